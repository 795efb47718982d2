#include "chaos/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "chaos/errors.hpp"
#include "chaos/rng.hpp"

namespace chaos {

namespace {

double double_factorial_odd(int c) {
  // (c-1)!! for even c >= 0: 1, 1, 3, 15, ...
  double v = 1.0;
  for (int k = c - 1; k >= 2; k -= 2) v *= k;
  return v;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

RealVectorTuple gaussian_tuple(const CounterRng& rng, std::uint64_t draw,
                               std::span<const int> dims, int first_slot) {
  RealVectorTuple g;
  g.parts.reserve(dims.size());
  for (std::size_t j = 0; j < dims.size(); ++j) {
    g.parts.push_back(rng.normal_vector(slot_stream(draw, first_slot + static_cast<int>(j)),
                                        static_cast<std::size_t>(dims[j])));
  }
  return g;
}

}  // namespace

std::string statistic_name(Statistic s) {
  switch (s) {
    case Statistic::kMoment: return "moment";
    case Statistic::kTail: return "tail";
    case Statistic::kSupMoment: return "sup_moment";
  }
  return "unknown";
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  if (xs.size() <= 8) {
    double acc = 0.0;
    for (double v : xs) acc += v;
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

MeanEstimate mean_with_se(std::span<const double> xs) {
  MeanEstimate out;
  const std::size_t n = xs.size();
  if (n == 0) return out;
  out.mean = pairwise_sum(xs) / static_cast<double>(n);

  std::vector<double> d2(n), d4(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = xs[i] - out.mean;
    d2[i] = d * d;
    d4[i] = d2[i] * d2[i];
  }
  const double m2 = pairwise_sum(d2) / static_cast<double>(n);
  const double m4 = pairwise_sum(d4) / static_cast<double>(n);
  out.std_error = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0;
  out.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
  return out;
}

WilsonInterval wilson_interval(std::size_t hits, std::size_t n, double z) {
  WilsonInterval w;
  if (n == 0) return w;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  const double z2 = z * z;
  w.p_hat = p;
  w.std_error = std::sqrt(p * (1.0 - p) / nn);
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = (z / denom) * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  w.lo = std::max(0.0, center - half);
  w.hi = std::min(1.0, center + half);
  return w;
}

std::vector<double> sample_y(const CoefficientTensor& a, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw ValidationError("sample_y: count must be positive");
  CounterRng rng(seed);
  std::vector<double> out(count);
  for (std::size_t m = 0; m < count; ++m) {
    RealVectorTuple g = gaussian_tuple(rng, m, a.dims(), 1);
    out[m] = apply_multilinear(a, g);
  }
  return out;
}

std::vector<double> sample_y_d(const CoefficientTensor& a, const RealVectorTuple& u,
                               std::size_t count, std::uint64_t seed) {
  const int d = a.order();
  if (d < 2) throw ValidationError("sample_y_d: requires order >= 2");
  if (static_cast<int>(u.count()) != d - 1) {
    throw ValidationError("sample_y_d: tuple must have d-1 parts");
  }
  const std::vector<double> b = contract_front_slots(a, u);  // fixed across draws
  const std::size_t nd = b.size();
  CounterRng rng(seed);
  std::vector<double> out(count);
  for (std::size_t m = 0; m < count; ++m) {
    double acc = 0.0;
    for (std::size_t i = 0; i < nd; ++i) acc += b[i] * rng.normal(slot_stream(m, d), i);
    out[m] = acc;
  }
  return out;
}

std::vector<double> sample_z(const CoefficientTensor& a, std::size_t count, std::uint64_t seed,
                             const AlsConfig& cfg) {
  const int d = a.order();
  if (d < 2) throw ValidationError("sample_z: requires order >= 2");
  CounterRng rng(seed);
  std::vector<double> out(count);
  for (std::size_t m = 0; m < count; ++m) {
    const std::vector<double> gd =
        rng.normal_vector(slot_stream(m, d), static_cast<std::size_t>(a.dims()[d - 1]));
    const CoefficientTensor b = contract_slot(a, d, gd);
    if (d == 2) {
      out[m] = b.frobenius_norm();  // sup over the unit ball of a linear form
    } else {
      AlsConfig per_draw = cfg;
      per_draw.seed = mix64(cfg.seed, m);
      out[m] = partition_norm(b, singleton_partition(d - 1), per_draw).value;
    }
  }
  return out;
}

double wick_moment(const CoefficientTensor& a, int m, double tuple_budget) {
  if (m < 1) throw ValidationError("wick_moment: M must be a positive integer");
  const double required = std::pow(static_cast<double>(a.size()), 2.0 * m);
  if (required > tuple_budget) {
    throw CapacityError("wick_moment: needs a tuple budget of " + std::to_string(required) +
                        " (limit " + std::to_string(tuple_budget) + ")");
  }

  // Nonzero coefficients with their multi-indices.
  std::vector<std::vector<int>> idx;
  std::vector<double> val;
  {
    const int d = a.order();
    std::vector<int> cur(d, 0);
    for (std::size_t lin = 0; lin < a.size(); ++lin) {
      if (a.coeffs()[lin] != 0.0) {
        idx.push_back(cur);
        val.push_back(a.coeffs()[lin]);
      }
      for (int j = d - 1; j >= 0; --j) {
        if (++cur[j] < a.dims()[j]) break;
        cur[j] = 0;
      }
    }
  }
  if (idx.empty()) return 0.0;

  const int d = a.order();
  const int p = 2 * m;
  const int nnz = static_cast<int>(idx.size());

  // Per (slot, coordinate value) multiplicity across the chosen multiset.
  std::vector<std::vector<int>> counts(d);
  for (int j = 0; j < d; ++j) counts[j].assign(static_cast<std::size_t>(a.dims()[j]), 0);

  double total = 0.0;
  // Choose multiplicities k_e >= 0 for each nonzero entry with sum k_e = 2M.
  // The ordered-tuple count is the multinomial (2M)! / prod k_e!.
  auto rec = [&](auto&& self, int e, int remaining, double coeff_weight) -> void {
    if (remaining == 0) {
      double gauss = 1.0;
      for (int j = 0; j < d && gauss != 0.0; ++j) {
        for (int c : counts[j]) {
          if (c & 1) {
            gauss = 0.0;
            break;
          }
          if (c > 0) gauss *= double_factorial_odd(c);
        }
      }
      total += coeff_weight * gauss;
      return;
    }
    if (e == nnz) return;
    if (e == nnz - 1) {
      // Last entry takes everything that is left.
      const int k = remaining;
      for (int j = 0; j < d; ++j) counts[j][idx[e][j]] += k;
      self(self, e + 1, 0, coeff_weight * binomial(remaining, k) * std::pow(val[e], k));
      for (int j = 0; j < d; ++j) counts[j][idx[e][j]] -= k;
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      if (k > 0) {
        for (int j = 0; j < d; ++j) counts[j][idx[e][j]] += k;
      }
      self(self, e + 1, remaining - k,
           coeff_weight * binomial(remaining, k) * (k > 0 ? std::pow(val[e], k) : 1.0));
      if (k > 0) {
        for (int j = 0; j < d; ++j) counts[j][idx[e][j]] -= k;
      }
    }
  };
  rec(rec, 0, p, 1.0);
  return total;
}

double quad_form_moment_d2(const CoefficientTensor& a, int m) {
  if (a.order() != 2) throw ValidationError("quad_form_moment_d2: requires d = 2");
  if (m < 1) throw ValidationError("quad_form_moment_d2: M must be a positive integer");
  const int n1 = a.dims()[0];
  const int n2 = a.dims()[1];

  // Gram matrix on the smaller side; both sides share nonzero eigenvalues.
  const int n = std::min(n1, n2);
  std::vector<double> gram(static_cast<std::size_t>(n) * n, 0.0);
  const double* c = a.coeffs().data();
  if (n1 <= n2) {
    for (int i = 0; i < n1; ++i) {
      for (int j = i; j < n1; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n2; ++k) acc += c[i * n2 + k] * c[j * n2 + k];
        gram[i * n1 + j] = gram[j * n1 + i] = acc;
      }
    }
  } else {
    for (int i = 0; i < n2; ++i) {
      for (int j = i; j < n2; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n1; ++k) acc += c[k * n2 + i] * c[k * n2 + j];
        gram[i * n2 + j] = gram[j * n2 + i] = acc;
      }
    }
  }

  std::vector<double> lambda = jacobi_eigen(std::move(gram), n).values;
  for (double& l : lambda) l = std::max(l, 0.0);

  // kappa_r = 2^{r-1} (r-1)! sum lambda^r; moments via the cumulant recursion.
  std::vector<double> kappa(m + 1, 0.0);
  for (int r = 1; r <= m; ++r) {
    double power_sum = 0.0;
    for (double l : lambda) power_sum += std::pow(l, r);
    double fact = 1.0;
    for (int i = 2; i < r; ++i) fact *= i;
    kappa[r] = std::pow(2.0, r - 1) * fact * power_sum;
  }
  std::vector<double> moment(m + 1, 0.0);
  moment[0] = 1.0;
  for (int r = 1; r <= m; ++r) {
    double acc = 0.0;
    for (int k = 0; k < r; ++k) acc += binomial(r - 1, k) * kappa[k + 1] * moment[r - 1 - k];
    moment[r] = acc;
  }
  return double_factorial_odd(2 * m) * moment[m];
}

ChaosStudy empirical_statistic(const CoefficientTensor& a, Statistic stat, double parameter,
                               std::size_t count, std::uint64_t seed, const AlsConfig& cfg) {
  ChaosStudy study;
  study.statistic = stat;
  study.parameter = parameter;
  study.seed = seed;
  study.n_samples = count;

  if (stat == Statistic::kTail) {
    if (parameter <= 0.0) throw ValidationError("empirical_statistic: tail level x must be positive");
    const std::vector<double> ys = sample_y(a, count, seed);
    std::size_t hits = 0;
    for (double y : ys) {
      if (std::fabs(y) > parameter) ++hits;
    }
    const WilsonInterval w = wilson_interval(hits, count);
    study.estimate = w.p_hat;
    study.std_error = w.std_error;
    study.ci_lo = w.lo;
    study.ci_hi = w.hi;
    return study;
  }

  const int m = static_cast<int>(parameter);
  if (m < 1 || static_cast<double>(m) != parameter) {
    throw ValidationError("empirical_statistic: moment order M must be a positive integer");
  }
  const std::vector<double> draws = stat == Statistic::kMoment ? sample_y(a, count, seed)
                                                               : sample_z(a, count, seed, cfg);
  std::vector<double> powers(draws.size());
  for (std::size_t i = 0; i < draws.size(); ++i) powers[i] = std::pow(draws[i], 2 * m);
  const MeanEstimate est = mean_with_se(powers);
  study.estimate = est.mean;
  study.std_error = est.std_error;
  study.ci_lo = est.mean - 1.96 * est.std_error;
  study.ci_hi = est.mean + 1.96 * est.std_error;
  study.heavy_tail_caveat = est.kurtosis > 100.0;
  return study;
}

EigenDecomposition jacobi_eigen(std::vector<double> mat, int n, double tol, int max_sweeps) {
  if (n < 1 || mat.size() != static_cast<std::size_t>(n) * n) {
    throw ValidationError("jacobi_eigen: bad matrix shape");
  }
  std::vector<double> q(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) q[i * n + i] = 1.0;

  double fro = 0.0;
  for (double v : mat) fro += v * v;
  fro = std::sqrt(fro);
  const double stop = tol * std::max(fro, 1e-300);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) off += 2.0 * mat[i * n + j] * mat[i * n + j];
    }
    if (std::sqrt(off) <= stop) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int r = p + 1; r < n; ++r) {
        const double apq = mat[p * n + r];
        if (apq == 0.0) continue;
        const double app = mat[p * n + p];
        const double aqq = mat[r * n + r];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double cos = 1.0 / std::sqrt(t * t + 1.0);
        const double sin = t * cos;
        for (int k = 0; k < n; ++k) {
          const double akp = mat[k * n + p];
          const double akq = mat[k * n + r];
          mat[k * n + p] = cos * akp - sin * akq;
          mat[k * n + r] = sin * akp + cos * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = mat[p * n + k];
          const double aqk = mat[r * n + k];
          mat[p * n + k] = cos * apk - sin * aqk;
          mat[r * n + k] = sin * apk + cos * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double qkp = q[k * n + p];
          const double qkq = q[k * n + r];
          q[k * n + p] = cos * qkp - sin * qkq;
          q[k * n + r] = sin * qkp + cos * qkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return mat[i * n + i] < mat[j * n + j]; });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int j = 0; j < n; ++j) {
    out.values[j] = mat[order[j] * n + order[j]];
    for (int i = 0; i < n; ++i) out.vectors[i * n + j] = q[i * n + order[j]];
  }
  return out;
}

std::vector<double> sample_z_constrained_d2(const CoefficientTensor& a, int level, int m,
                                            std::size_t count, std::uint64_t seed) {
  if (a.order() != 2) throw ValidationError("sample_z_constrained_d2: requires d = 2");
  if (level < 0 || m < 1) throw ValidationError("sample_z_constrained_d2: bad level or M");
  const int n1 = a.dims()[0];
  const int n2 = a.dims()[1];
  const double tau = std::pow(2.0, -level) / std::sqrt(static_cast<double>(m));
  const double tau2 = tau * tau;

  // S = A A^T governs the constraint |A^T u|^2 = u^T S u.
  std::vector<double> s(static_cast<std::size_t>(n1) * n1, 0.0);
  const double* c = a.coeffs().data();
  for (int i = 0; i < n1; ++i) {
    for (int j = i; j < n1; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n2; ++k) acc += c[i * n2 + k] * c[j * n2 + k];
      s[i * n1 + j] = s[j * n1 + i] = acc;
    }
  }
  const EigenDecomposition eig = jacobi_eigen(std::move(s), n1);
  const double lam_max = std::max(eig.values.back(), 0.0);
  const double lam_floor = lam_max * 1e-12;

  CounterRng rng(seed);
  std::vector<double> out(count);
  std::vector<double> beta(n1);
  for (std::size_t draw = 0; draw < count; ++draw) {
    const std::vector<double> g = rng.normal_vector(slot_stream(draw, 2), n2);
    // b = A g, expressed in the eigenbasis of S.
    std::vector<double> b(n1, 0.0);
    for (int i = 0; i < n1; ++i) {
      double acc = 0.0;
      for (int k = 0; k < n2; ++k) acc += c[i * n2 + k] * g[k];
      b[i] = acc;
    }
    for (int j = 0; j < n1; ++j) {
      double acc = 0.0;
      for (int i = 0; i < n1; ++i) acc += eig.vectors[i * n1 + j] * b[i];
      beta[j] = acc;
    }
    double bnorm2 = 0.0;
    for (double v : beta) bnorm2 += v * v;
    if (bnorm2 == 0.0) {
      out[draw] = 0.0;
      continue;
    }

    // Case 1: the ball maximizer already satisfies the seminorm constraint.
    double quad_ball = 0.0;
    for (int j = 0; j < n1; ++j) quad_ball += std::max(eig.values[j], 0.0) * beta[j] * beta[j];
    quad_ball /= bnorm2;
    if (quad_ball <= tau2 * (1.0 + 1e-12)) {
      out[draw] = std::sqrt(bnorm2);
      continue;
    }

    // Case 2: seminorm constraint alone (b lies in the range of S).
    double sum_bl = 0.0;   // sum beta^2 / lambda
    double sum_bl2 = 0.0;  // sum beta^2 / lambda^2
    for (int j = 0; j < n1; ++j) {
      const double l = eig.values[j];
      if (l > lam_floor) {
        sum_bl += beta[j] * beta[j] / l;
        sum_bl2 += beta[j] * beta[j] / (l * l);
      }
    }
    if (tau2 * sum_bl2 <= sum_bl) {  // the ellipsoid maximizer fits in the ball
      out[draw] = tau * std::sqrt(sum_bl);
      continue;
    }

    // Case 3: both constraints active; bisect on u(c) = (I + cS)^{-1} b.
    auto ratio = [&](double cc) {
      double num = 0.0, den = 0.0;
      for (int j = 0; j < n1; ++j) {
        const double l = std::max(eig.values[j], 0.0);
        const double w = beta[j] / (1.0 + cc * l);
        num += l * w * w;
        den += w * w;
      }
      return num / den;
    };
    double lo = 0.0, hi = 1.0;
    while (ratio(hi) > tau2 && hi < 1e18) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (ratio(mid) > tau2) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double cc = 0.5 * (lo + hi);
    double val = 0.0, unorm2 = 0.0;
    for (int j = 0; j < n1; ++j) {
      const double l = std::max(eig.values[j], 0.0);
      const double w = beta[j] / (1.0 + cc * l);
      val += beta[j] * w;
      unorm2 += w * w;
    }
    out[draw] = val / std::sqrt(unorm2);
  }
  return out;
}

}  // namespace chaos
