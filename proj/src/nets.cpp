#include "chaos/nets.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "chaos/errors.hpp"
#include "chaos/rng.hpp"

namespace chaos {

namespace {

constexpr double kSlack = 1e-12;  // absorbs roundoff in exact threshold comparisons

std::vector<int> validated_subset(int d, const std::vector<int>& i_set, const char* who) {
  if (i_set.empty()) throw ValidationError(std::string(who) + ": I must be nonempty");
  std::vector<int> sorted = i_set;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError(std::string(who) + ": duplicate slot in I");
  }
  if (sorted.front() < 1 || sorted.back() > d - 1) {
    throw ValidationError(std::string(who) + ": I must lie in {1,...,d-1}");
  }
  return sorted;
}

ChaosStudy mean_study(std::span<const double> draws, std::uint64_t seed, double parameter) {
  const MeanEstimate est = mean_with_se(draws);
  ChaosStudy study;
  study.statistic = Statistic::kMoment;
  study.parameter = parameter;
  study.seed = seed;
  study.n_samples = draws.size();
  study.estimate = est.mean;
  study.std_error = est.std_error;
  study.ci_lo = est.mean - 1.96 * est.std_error;
  study.ci_hi = est.mean + 1.96 * est.std_error;
  study.heavy_tail_caveat = est.kurtosis > 100.0;
  return study;
}

}  // namespace

ChaosStudy w_ix_study(const CoefficientTensor& a, const RealVectorTuple& x,
                      const std::vector<int>& i_set, double t, std::size_t count,
                      std::uint64_t seed) {
  const int d = a.order();
  if (d < 2) throw ValidationError("w_ix_study: requires order >= 2");
  if (t <= 0.0) throw ValidationError("w_ix_study: t must be positive");
  if (static_cast<int>(x.count()) != d - 1) {
    throw ValidationError("w_ix_study: tuple must have d-1 parts");
  }
  const std::vector<int> sorted = validated_subset(d, i_set, "w_ix_study");

  CounterRng rng(seed);
  std::vector<double> draws(count);
  RealVectorTuple z = x;
  for (std::size_t m = 0; m < count; ++m) {
    for (int j : sorted) {
      z.parts[j - 1] = rng.normal_vector(slot_stream(m, j), x.parts[j - 1].size());
      for (double& v : z.parts[j - 1]) v *= t;
    }
    const std::vector<double> contracted = contract_front_slots(a, z);
    double acc = 0.0;
    for (double v : contracted) acc += v * v;
    draws[m] = std::sqrt(acc);
  }
  return mean_study(draws, seed, t);
}

MeasureCheck measure_lower_bound_single(const Pseudonorm& a1, const Pseudonorm& a2,
                                        const std::vector<double>& x, double t,
                                        std::size_t count, std::uint64_t seed) {
  if (t <= 0.0) throw ValidationError("measure_lower_bound_single: t must be positive");
  if (count < 1) throw ValidationError("measure_lower_bound_single: count must be positive");
  const std::size_t n = x.size();
  CounterRng rng(seed);

  // Thresholds 4 E a_i(tG), estimated on an independent substream.
  const CounterRng sub = rng.fork(1);
  double sum1 = 0.0, sum2 = 0.0;
  std::vector<double> g(n);
  for (std::size_t m = 0; m < count; ++m) {
    for (std::size_t i = 0; i < n; ++i) g[i] = t * sub.normal(slot_stream(m, 1), i);
    sum1 += a1(g);
    sum2 += a2(g);
  }
  const double thr1 = 4.0 * sum1 / static_cast<double>(count);
  const double thr2 = 4.0 * sum2 / static_cast<double>(count);

  std::size_t hits = 0;
  std::vector<double> diff(n);
  for (std::size_t m = 0; m < count; ++m) {
    for (std::size_t i = 0; i < n; ++i) diff[i] = t * rng.normal(slot_stream(m, 1), i) - x[i];
    if (a1(diff) <= thr1 && a2(diff) <= thr2) ++hits;
  }

  const WilsonInterval w = wilson_interval(hits, count);
  MeasureCheck out;
  out.estimate = w.p_hat;
  out.std_error = w.std_error;
  out.bound = 0.5 * std::exp(-1.0 / (2.0 * t * t));
  out.pass = out.estimate >= out.bound - 3.0 * out.std_error;
  out.threshold = thr1 + thr2;
  return out;
}

MeasureCheck measure_lower_bound_product(const CoefficientTensor& a, const RealVectorTuple& x,
                                         double t, std::size_t count, std::uint64_t seed) {
  const int d = a.order();
  if (d < 2) throw ValidationError("measure_lower_bound_product: requires order >= 2");
  if (t <= 0.0) throw ValidationError("measure_lower_bound_product: t must be positive");
  if (static_cast<int>(x.count()) != d - 1) {
    throw ValidationError("measure_lower_bound_product: tuple must have d-1 parts");
  }
  const int factors = d - 1;
  if (factors > 10) {
    throw CapacityError("measure_lower_bound_product: 2^(d-1) subsets is too many for d-1 > 10");
  }

  // Neighbourhood radius: sum of W estimates at 4t over all nonempty subsets,
  // each on its own substream.
  CounterRng rng(seed);
  double threshold = 0.0;
  for (unsigned mask = 1; mask < (1u << factors); ++mask) {
    std::vector<int> subset;
    for (int j = 0; j < factors; ++j) {
      if (mask & (1u << j)) subset.push_back(j + 1);
    }
    threshold += w_ix_study(a, x, subset, 4.0 * t, count, mix64(seed, 1000 + mask)).estimate;
  }

  std::size_t hits = 0;
  RealVectorTuple y = x;
  for (std::size_t m = 0; m < count; ++m) {
    for (int j = 1; j <= factors; ++j) {
      y.parts[j - 1] = rng.normal_vector(slot_stream(m, j), x.parts[j - 1].size());
      for (double& v : y.parts[j - 1]) v *= t;
    }
    if (rho_alpha(a, x, y) <= threshold) ++hits;
  }

  const WilsonInterval w = wilson_interval(hits, count);
  MeasureCheck out;
  out.estimate = w.p_hat;
  out.std_error = w.std_error;
  out.bound = std::pow(2.0, -factors) * std::exp(-factors / (2.0 * t * t));
  out.pass = out.estimate >= out.bound - 3.0 * out.std_error;
  out.threshold = threshold;
  return out;
}

NetResult greedy_net(const std::vector<RealVectorTuple>& points, const TupleMetric& metric,
                     double two_u) {
  if (points.empty()) throw ValidationError("greedy_net: no points");
  if (two_u < 0.0) throw ValidationError("greedy_net: radius must be nonnegative");

  NetResult net;
  net.radius_2u = two_u;
  net.assignment.assign(points.size(), 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool placed = false;
    for (std::size_t c = 0; c < net.center_indices.size(); ++c) {
      if (metric(points[net.center_indices[c]], points[i]) <= two_u) {
        net.assignment[i] = c;
        placed = true;
        break;
      }
    }
    if (!placed) {
      net.assignment[i] = net.center_indices.size();
      net.center_indices.push_back(i);
      net.centers.push_back(points[i]);
    }
  }
  net.cardinality = net.centers.size();

  // Certificates, recomputed exhaustively.
  net.covered_count = 0;
  for (const auto& p : points) {
    for (const auto& c : net.centers) {
      if (metric(c, p) <= two_u) {
        ++net.covered_count;
        break;
      }
    }
  }
  net.covering_ok = net.covered_count == points.size();
  net.packing_ok = true;
  for (std::size_t i = 0; i < net.centers.size() && net.packing_ok; ++i) {
    for (std::size_t j = i + 1; j < net.centers.size(); ++j) {
      if (metric(net.centers[i], net.centers[j]) <= two_u) {
        net.packing_ok = false;
        break;
      }
    }
  }
  return net;
}

double UClassParams::alpha_tilde_threshold() const {
  return std::pow(2.0, -level) * std::pow(static_cast<double>(m), -0.5 * (d - 2));
}

double UClassParams::rho_threshold() const {
  return std::pow(2.0, -2 * level) * std::pow(static_cast<double>(m), -0.5 * (d - 1));
}

double UClassParams::part_rho_threshold(int i_size) const {
  return std::pow(2.0, -2 * level) * std::pow(static_cast<double>(m), -0.5 * (d - i_size - 1));
}

double u_partition_cardinality_budget(const UClassParams& params, double c) {
  return std::exp2(c * params.m * std::exp2(2.0 * params.level));
}

namespace {

double part_norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

RealVectorTuple tuple_difference(const RealVectorTuple& a, const RealVectorTuple& b) {
  RealVectorTuple out = a;
  for (std::size_t j = 0; j < out.parts.size(); ++j) {
    for (std::size_t i = 0; i < out.parts[j].size(); ++i) out.parts[j][i] -= b.parts[j][i];
  }
  return out;
}

}  // namespace

UClassReport check_u_class(const CoefficientTensor& a, const UClassParams& params,
                           const std::vector<RealVectorTuple>& u_set, const AlsConfig& cfg) {
  const int d = a.order();
  if (d < 3) throw ValidationError("check_u_class: requires d >= 3");
  if (params.d != d) throw ValidationError("check_u_class: params.d does not match the tensor");
  if (params.m < 1 || params.level < 0 || params.r < 1) {
    throw ValidationError("check_u_class: bad class parameters");
  }

  UClassReport report;
  const int r_count = static_cast<int>(u_set.size());

  if (r_count < 1 || r_count > params.r) {
    report.violations.push_back({"cardinality", -1, -1, -1, -1, static_cast<double>(r_count),
                                 static_cast<double>(params.r)});
  }

  for (int t = 0; t < r_count; ++t) {
    if (static_cast<int>(u_set[t].count()) != d - 1) {
      throw ValidationError("check_u_class: every element needs d-1 parts");
    }
    for (int j = 1; j <= d - 1; ++j) {
      if (static_cast<int>(u_set[t].parts[j - 1].size()) != a.dims()[j - 1]) {
        throw ValidationError("check_u_class: part length mismatch");
      }
    }
  }

  const double a_thr = params.alpha_tilde_threshold();
  const double rho_thr = params.rho_threshold();

  for (int t = 0; t < r_count; ++t) {
    // Unit-ball membership per coordinate.
    for (int j = 1; j <= d - 1; ++j) {
      const double n = part_norm(u_set[t].parts[j - 1]);
      if (n > 1.0 + kSlack) {
        report.violations.push_back({"ball", t, -1, j, -1, n, 1.0});
      }
    }
    // Coordinate seminorm thresholds over all ordered pairs.
    for (int j = 1; j <= d - 1; ++j) {
      for (int k = 1; k <= d - 1; ++k) {
        if (j == k) continue;
        const double v = alpha_tilde_jk(a, j, k, u_set[t].parts[j - 1], cfg).value;
        if (v > a_thr + kSlack) {
          report.violations.push_back({"alpha_tilde", t, -1, j, k, v, a_thr});
        }
      }
    }
  }

  for (int t = 0; t < r_count; ++t) {
    for (int t2 = t + 1; t2 < r_count; ++t2) {
      const double rho = rho_alpha(a, u_set[t], u_set[t2]);
      if (rho > rho_thr + kSlack) {
        report.violations.push_back({"rho_alpha", t, t2, -1, -1, rho, rho_thr});
      }
      const RealVectorTuple diff = tuple_difference(u_set[t], u_set[t2]);
      for (int j = 1; j <= d - 1; ++j) {
        const double n = part_norm(diff.parts[j - 1]);
        if (n > 1.0 + kSlack) {
          report.violations.push_back({"difference_ball", t, t2, j, -1, n, 1.0});
        }
      }
    }
  }

  report.ok = report.violations.empty();
  return report;
}

UPartition partition_u_class(const CoefficientTensor& a, const UClassParams& params,
                             const std::vector<RealVectorTuple>& u_set, const AlsConfig& cfg) {
  const int d = a.order();
  {
    const UClassReport member = check_u_class(a, params, u_set, cfg);
    if (!member.ok) {
      throw ValidationError("partition_u_class: input set is not a class member (clause " +
                            member.violations.front().clause + ")");
    }
  }

  // Deterministic processing order.
  std::vector<RealVectorTuple> pts = u_set;
  std::sort(pts.begin(), pts.end(), lex_less);

  UClassParams next = params;
  next.level = params.level + 2;

  // Stage 1: one greedy net per ordered pair (j,k) in the coordinate
  // pseudometric.  Radii are half the target threshold throughout: two
  // points sharing a center are within the full threshold by the triangle
  // inequality, and the cells below are intersections over several nets, so
  // the shift need not be a center of any single one.
  std::vector<std::vector<std::size_t>> stage1_keys(pts.size());
  for (int j = 1; j <= d - 1; ++j) {
    for (int k = 1; k <= d - 1; ++k) {
      if (j == k) continue;
      TupleMetric metric = [&, j, k](const RealVectorTuple& x, const RealVectorTuple& y) {
        std::vector<double> diff = x.parts[j - 1];
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= y.parts[j - 1][i];
        return alpha_tilde_jk(a, j, k, diff, cfg).value;
      };
      const NetResult net = greedy_net(pts, metric, 0.5 * next.alpha_tilde_threshold());
      for (std::size_t i = 0; i < pts.size(); ++i) stage1_keys[i].push_back(net.assignment[i]);
    }
  }

  // Group points by their stage-1 key, keeping first-appearance order.
  std::map<std::vector<std::size_t>, std::size_t> cell_of_key;
  std::vector<std::vector<std::size_t>> cells;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto [it, fresh] = cell_of_key.try_emplace(stage1_keys[i], cells.size());
    if (fresh) cells.emplace_back();
    cells[it->second].push_back(i);
  }
  std::sort(cells.begin(), cells.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });

  UPartition result;
  for (const auto& cell : cells) {
    const RealVectorTuple& shift = pts[cell.front()];
    std::vector<RealVectorTuple> shifted;
    shifted.reserve(cell.size());
    for (std::size_t i : cell) shifted.push_back(tuple_difference(pts[i], shift));

    // Stage 2: rho_alpha net on the shifted cell; half the pair threshold so
    // any two members of a sub-cell are within the N+2 clause via triangle.
    TupleMetric rho_metric = [&](const RealVectorTuple& x, const RealVectorTuple& y) {
      return rho_alpha(a, x, y);
    };
    const NetResult rho_net = greedy_net(shifted, rho_metric, 0.5 * next.rho_threshold());

    std::vector<std::vector<std::size_t>> keys(shifted.size());
    for (std::size_t i = 0; i < shifted.size(); ++i) keys[i].push_back(rho_net.assignment[i]);

    // Stage 3: one net per subset I, in the contracted pseudometric anchored
    // at this cell's shift; the clause threshold keeps the original level N.
    for (int mask = 1; mask < (1 << (d - 1)); ++mask) {
      std::vector<int> i_set;
      for (int j = 1; j <= d - 1; ++j) {
        if (mask & (1 << (j - 1))) i_set.push_back(j);
      }
      const int i_size = static_cast<int>(i_set.size());
      if (i_size > d - 2) continue;
      TupleMetric part_metric = [&, i_set](const RealVectorTuple& x, const RealVectorTuple& y) {
        return rho_alpha_Iu(a, shift, i_set, params.m, x, y);
      };
      const NetResult part_net =
          greedy_net(shifted, part_metric, 0.5 * params.part_rho_threshold(i_size));
      for (std::size_t i = 0; i < shifted.size(); ++i) keys[i].push_back(part_net.assignment[i]);
    }

    std::map<std::vector<std::size_t>, std::size_t> part_of_key;
    std::vector<UPart> parts;
    for (std::size_t i = 0; i < shifted.size(); ++i) {
      auto [it, fresh] = part_of_key.try_emplace(keys[i], parts.size());
      if (fresh) parts.push_back(UPart{shift, {}});
      parts[it->second].members.push_back(shifted[i]);
    }
    for (auto& part : parts) result.parts.push_back(std::move(part));
  }
  result.cardinality = result.parts.size();

  // Postconditions: every part is a class member at (r, N+2) and satisfies
  // the contracted-rho clause for every I with 1 <= |I| <= d-2.
  for (const auto& part : result.parts) {
    const UClassReport member = check_u_class(a, next, part.members, cfg);
    if (!member.ok) {
      throw UPartitionError("partition_u_class: a part fails membership at level N+2 (clause " +
                                member.violations.front().clause + ")",
                            member.violations.front());
    }
    for (int mask = 1; mask < (1 << (d - 1)); ++mask) {
      std::vector<int> i_set;
      for (int j = 1; j <= d - 1; ++j) {
        if (mask & (1 << (j - 1))) i_set.push_back(j);
      }
      const int i_size = static_cast<int>(i_set.size());
      if (i_size > d - 2) continue;
      const double thr = params.part_rho_threshold(i_size);
      for (std::size_t x = 0; x < part.members.size(); ++x) {
        for (std::size_t y = x + 1; y < part.members.size(); ++y) {
          const double v = rho_alpha_Iu(a, part.shift, i_set, params.m, part.members[x],
                                        part.members[y]);
          if (v > thr + kSlack) {
            UClassViolation violation{"part_rho", static_cast<int>(x), static_cast<int>(y),
                                      i_set.front(), -1, v, thr};
            throw UPartitionError("partition_u_class: a part violates the contracted-rho clause",
                                  violation);
          }
        }
      }
    }
  }
  return result;
}

}  // namespace chaos
