#include "chaos/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "chaos/errors.hpp"
#include "chaos/rng.hpp"

namespace chaos {

namespace {

constexpr const char* kVersion = "0.1.0";

Json provenance(const RunConfig& cfg) {
  Json j;
  j["command"] = cfg.command;
  j["version"] = kVersion;
  if (!cfg.tensor_path.empty()) j["tensor"] = cfg.tensor_path;
  j["M"] = cfg.m;
  j["x"] = cfg.x;
  j["s"] = cfg.s;
  j["C"] = cfg.c;
  j["seed"] = cfg.seed;
  j["samples"] = cfg.samples;
  j["restarts"] = cfg.restarts;
  j["budget"] = cfg.budget;
  return j;
}

AlsConfig als_from(const RunConfig& cfg) {
  AlsConfig als;
  als.restarts = cfg.restarts;
  als.seed = cfg.seed;
  return als;
}

std::string csv_quoted(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

std::vector<CoefficientTensor> random_fit_family(std::size_t count, std::uint64_t seed) {
  std::vector<CoefficientTensor> family;
  family.reserve(count);
  CounterRng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const int d = 2 + static_cast<int>(i % 2);
    std::vector<int> dims;
    if (d == 2) {
      dims = {2 + static_cast<int>(i % 2), 2 + static_cast<int>((i / 2) % 2)};
    } else {
      dims = {2, 2, 2};  // keeps the Wick budget comfortable
    }
    std::size_t total = 1;
    for (int n : dims) total *= static_cast<std::size_t>(n);
    std::vector<double> coeffs = rng.normal_vector(i, total);
    family.push_back(make_tensor(std::move(dims), std::move(coeffs)));
  }
  return family;
}

FitReport fit_c_family(const std::vector<CoefficientTensor>& family, int m_max,
                       std::size_t samples, std::uint64_t seed, const AlsConfig& cfg,
                       double budget) {
  if (family.empty()) throw ValidationError("fit_c_family: empty family");
  if (m_max < 1) throw ValidationError("fit_c_family: M must be a positive integer");

  FitReport report;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const CoefficientTensor& a = family[i];
    for (int m = 1; m <= m_max; ++m) {
      const Normalized norm = normalize_dm(a, m, cfg);
      FitMember member;
      member.index = i;
      member.d = a.order();
      member.dims = a.dims();
      member.m = m;
      try {
        member.oracle = wick_moment(norm.scaled, m, budget);
        member.oracle_exact = true;
      } catch (const CapacityError&) {
        member.oracle = empirical_statistic(norm.scaled, Statistic::kMoment, m, samples,
                                            mix64(seed, i * 37 + m), cfg)
                            .estimate;
        member.oracle_exact = false;
      }
      for (const auto& av : alpha_profile(norm.scaled, cfg)) {
        member.raw_factor =
            std::max(member.raw_factor, std::pow(static_cast<double>(m), 0.5 * av.s) * av.value);
      }
      member.c_required =
          std::pow(member.oracle, 1.0 / (2.0 * m)) / std::max(member.raw_factor, 1e-300);
      report.c_star_moment = std::max(report.c_star_moment, member.c_required);
      report.members.push_back(std::move(member));
    }
  }

  // Tail constant: empirical frequencies of the normalized (M = 1) members at
  // the 0.90/0.95/0.99 quantiles, fitted through the tail formula.
  const std::size_t tail_samples = std::max<std::size_t>(samples, 1000);
  for (std::size_t i = 0; i < family.size(); ++i) {
    const Normalized norm = normalize_dm(family[i], 1, cfg);
    std::vector<double> draws = sample_y(norm.scaled, tail_samples, mix64(seed, 900 + i));
    for (double& v : draws) v = std::fabs(v);
    std::sort(draws.begin(), draws.end());
    const std::vector<AlphaValue> alphas = alpha_profile(norm.scaled, cfg);
    for (double q : {0.90, 0.95, 0.99}) {
      const std::size_t pos = static_cast<std::size_t>(q * (draws.size() - 1));
      const double x = draws[pos];
      if (x <= 0.0) continue;
      const double p_hat = static_cast<double>(draws.size() - pos) / draws.size();
      // smallest C with C exp(-q(x)/C) >= p_hat; the left side increases in C
      double lo = 1e-6, hi = 1e6;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (tail_bound_from_alphas(alphas, x, mid) >= p_hat) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      report.c_star_tail = std::max(report.c_star_tail, hi);
    }
  }
  return report;
}

Json norms_report(const CoefficientTensor& a, const RunConfig& cfg) {
  const AlsConfig als = als_from(cfg);
  Json j = provenance(cfg);
  j["dims"] = a.dims();
  Json rows = Json::array();
  const int s_lo = cfg.s > 0 ? cfg.s : 1;
  const int s_hi = cfg.s > 0 ? cfg.s : a.order();
  if (s_lo < 1 || s_hi > a.order()) throw ValidationError("norms: s out of range");
  for (int s = s_lo; s <= s_hi; ++s) {
    const AlphaResult r = alpha_s(a, s, als);
    Json row;
    row["s"] = s;
    row["value"] = r.norm.value;
    row["exact"] = r.norm.exact;
    row["converged"] = r.norm.converged;
    row["argmax_partition"] = r.argmax.to_string();
    rows.push_back(std::move(row));
  }
  j["alphas"] = std::move(rows);
  return j;
}

Json bound_report_json(const CoefficientTensor& a, const RunConfig& cfg) {
  const AlsConfig als = als_from(cfg);
  BoundReport report = moment_bound(a, cfg.m, cfg.c, als);
  if (cfg.x > 0.0) {
    report.tail_x = cfg.x;
    report.tail_bound = tail_bound_from_alphas(report.alphas, cfg.x, cfg.c);
  }
  Json j = provenance(cfg);
  j["dims"] = a.dims();
  j["report"] = bound_report_to_json(report);
  return j;
}

Json verify_report(const CoefficientTensor& a, const RunConfig& cfg, bool& violation) {
  const AlsConfig als = als_from(cfg);
  Json j = provenance(cfg);
  j["dims"] = a.dims();

  bool oracle_available = true;
  double oracle = 0.0;
  try {
    oracle = wick_moment(a, cfg.m, cfg.budget);
  } catch (const CapacityError& e) {
    oracle_available = false;
    j["oracle_warning"] = e.what();
  }

  const ChaosStudy mc =
      empirical_statistic(a, Statistic::kMoment, cfg.m, cfg.samples, cfg.seed, als);
  const BoundReport bound = moment_bound(a, cfg.m, cfg.c, als);

  j["mc_fallback"] = !oracle_available;
  if (oracle_available) j["oracle"] = oracle;
  j["mc"] = study_to_json(mc);
  j["bound"] = bound_report_to_json(bound);

  const double reference = oracle_available ? oracle : mc.estimate;
  if (reference > 0.0 && bound.moment_bound > 0.0) {
    j["ratio_per_draw"] = std::exp(bound.log_moment_bound / (2.0 * cfg.m)) /
                          std::pow(reference, 1.0 / (2.0 * cfg.m));
  }
  if (oracle_available) {
    violation = !(bound.overflowed || bound.moment_bound >= oracle);
  } else {
    violation = mc.estimate - 3.0 * mc.std_error > bound.moment_bound && !bound.overflowed;
  }
  j["bound_holds"] = !violation;
  return j;
}

Json nets_report(const CoefficientTensor& a, const RunConfig& cfg, bool& violation) {
  const double t = cfg.x > 0.0 ? cfg.x : 1.0;
  const int d = a.order();
  Json j = provenance(cfg);
  j["dims"] = a.dims();

  // Single-space check on R^{n_1}: Euclidean norm paired with a chaos-induced
  // pseudonorm of the tensor.
  Pseudonorm euclid = [](const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
  };
  Pseudonorm chaos_norm;
  if (d == 2) {
    chaos_norm = [&a](const std::vector<double>& v) { return pseudonorm_alpha(a, v); };
  } else {
    const AlsConfig als = als_from(cfg);
    chaos_norm = [&a, als](const std::vector<double>& v) {
      return alpha_tilde_jk(a, 1, 2, v, als).value;
    };
  }
  const std::vector<double> x0(static_cast<std::size_t>(a.dims()[0]), 0.0);
  const MeasureCheck single =
      measure_lower_bound_single(euclid, chaos_norm, x0, t, cfg.samples, cfg.seed);

  std::vector<int> lead(a.dims().begin(), a.dims().end() - 1);
  const RealVectorTuple origin = RealVectorTuple::zeros(lead);
  const MeasureCheck product =
      measure_lower_bound_product(a, origin, t, cfg.samples, mix64(cfg.seed, 2));

  auto check_json = [](const MeasureCheck& c) {
    Json row;
    row["estimate"] = c.estimate;
    row["std_error"] = c.std_error;
    row["bound"] = c.bound;
    row["pass"] = c.pass;
    row["threshold"] = c.threshold;
    return row;
  };
  j["t"] = t;
  j["single"] = check_json(single);
  j["product"] = check_json(product);
  violation = !(single.pass && product.pass);
  return j;
}

Json partition_report(const CoefficientTensor& a, const RunConfig& cfg, bool& violation) {
  const AlsConfig als = als_from(cfg);
  const int d = a.order();
  if (d < 3) throw ValidationError("partition: requires a tensor of order >= 3");
  const int r = static_cast<int>(cfg.samples);
  if (r < 1 || r > 1000) throw CapacityError("partition: set size must be between 1 and 1000");

  const Normalized norm = normalize_dm(a, cfg.m, als);

  // Half-ball tuples are always class members at level 0 once the tensor is
  // normalized.
  CounterRng rng(cfg.seed);
  std::vector<RealVectorTuple> u_set;
  for (int t = 0; t < r; ++t) {
    RealVectorTuple u;
    for (int j = 1; j <= d - 1; ++j) {
      u.parts.push_back(ball_point(rng, slot_stream(static_cast<std::uint64_t>(t), j),
                                   static_cast<std::size_t>(a.dims()[j - 1]), 0.5));
    }
    u_set.push_back(std::move(u));
  }

  UClassParams params{cfg.m, 0, r, d};
  Json j = provenance(cfg);
  j["dims"] = a.dims();
  j["normalization_factor"] = norm.d_factor;
  j["params"] = Json{{"M", params.m}, {"N", params.level}, {"r", params.r}, {"d", params.d}};

  const UClassReport membership = check_u_class(norm.scaled, params, u_set, als);
  j["membership_ok"] = membership.ok;
  if (!membership.ok) {
    j["membership_violations"] = membership.violations.size();
    violation = true;
    return j;
  }

  try {
    const UPartition partition = partition_u_class(norm.scaled, params, u_set, als);
    j["partition"] = u_partition_to_json(partition);
    j["cardinality_budget_at_C"] = u_partition_cardinality_budget(params, cfg.c);
    j["postconditions_ok"] = true;
    violation = false;
  } catch (const UPartitionError& e) {
    j["postconditions_ok"] = false;
    j["violation_clause"] = e.violation.clause;
    violation = true;
  }
  return j;
}

Json fit_c_report(const std::optional<CoefficientTensor>& tensor, const RunConfig& cfg) {
  const AlsConfig als = als_from(cfg);
  std::vector<CoefficientTensor> family;
  if (tensor) {
    family.push_back(*tensor);
  } else {
    // --samples is the family size here; the inner Monte-Carlo count is fixed.
    if (cfg.samples < 1 || cfg.samples > 1000) {
      throw ValidationError("fit-c: family size must be between 1 and 1000");
    }
    family = random_fit_family(cfg.samples, cfg.seed);
  }
  const FitReport fit = fit_c_family(family, cfg.m, 10000, cfg.seed, als, cfg.budget);

  Json j = provenance(cfg);
  j["family_size"] = family.size();
  Json rows = Json::array();
  for (const auto& m : fit.members) {
    Json row;
    row["member"] = m.index;
    row["d"] = m.d;
    row["dims"] = m.dims;
    row["M"] = m.m;
    row["oracle"] = m.oracle;
    row["oracle_exact"] = m.oracle_exact;
    row["raw_factor"] = m.raw_factor;
    row["c_required"] = m.c_required;
    rows.push_back(std::move(row));
  }
  j["members"] = std::move(rows);
  j["c_star_moment"] = fit.c_star_moment;
  j["c_star_tail"] = fit.c_star_tail;
  return j;
}

namespace {

std::string json_to_csv(const Json& j, const std::string& command) {
  std::ostringstream out;
  if (command == "norms") {
    out << "s,value,exact,converged,argmax_partition\n";
    for (const auto& row : j["alphas"]) {
      out << row["s"].get<int>() << ',' << format_double(row["value"].get<double>()) << ','
          << (row["exact"].get<bool>() ? 1 : 0) << ',' << (row["converged"].get<bool>() ? 1 : 0)
          << ',' << csv_quoted(row["argmax_partition"].get<std::string>()) << '\n';
    }
    return out.str();
  }
  if (command == "nets") {
    out << "kind,t,bound,estimate,se,pass\n";
    for (const char* kind : {"single", "product"}) {
      const auto& row = j[kind];
      out << kind << ',' << format_double(j["t"].get<double>()) << ','
          << format_double(row["bound"].get<double>()) << ','
          << format_double(row["estimate"].get<double>()) << ','
          << format_double(row["std_error"].get<double>()) << ','
          << (row["pass"].get<bool>() ? 1 : 0) << '\n';
    }
    return out.str();
  }
  if (command == "verify") {
    out << "M,oracle,mc_estimate,mc_se,ci_lo,ci_hi,bound,C,bound_holds\n";
    const auto& mc = j["mc"];
    out << j["M"].get<int>() << ','
        << (j.contains("oracle") ? format_double(j["oracle"].get<double>()) : "") << ','
        << format_double(mc["estimate"].get<double>()) << ','
        << format_double(mc["std_error"].get<double>()) << ','
        << format_double(mc["ci95"][0].get<double>()) << ','
        << format_double(mc["ci95"][1].get<double>()) << ','
        << format_double(j["bound"]["moment_bound"].get<double>()) << ','
        << format_double(j["C"].get<double>()) << ',' << (j["bound_holds"].get<bool>() ? 1 : 0)
        << '\n';
    return out.str();
  }
  if (command == "fit-c") {
    out << "member,d,M,oracle,oracle_exact,raw_factor,c_required\n";
    for (const auto& row : j["members"]) {
      out << row["member"].get<std::size_t>() << ',' << row["d"].get<int>() << ','
          << row["M"].get<int>() << ',' << format_double(row["oracle"].get<double>()) << ','
          << (row["oracle_exact"].get<bool>() ? 1 : 0) << ','
          << format_double(row["raw_factor"].get<double>()) << ','
          << format_double(row["c_required"].get<double>()) << '\n';
    }
    out << "# c_star_moment," << format_double(j["c_star_moment"].get<double>()) << '\n';
    out << "# c_star_tail," << format_double(j["c_star_tail"].get<double>()) << '\n';
    return out.str();
  }
  // bound / partition keep their JSON shape in CSV mode
  return j.dump(2) + "\n";
}

}  // namespace

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::optional<CoefficientTensor> tensor;
    if (!cfg.tensor_path.empty()) {
      tensor = load_tensor(cfg.tensor_path);
    }

    Json report;
    bool violation = false;
    if (cfg.command == "norms" || cfg.command == "bound" || cfg.command == "verify" ||
        cfg.command == "nets" || cfg.command == "partition") {
      if (!tensor) throw ValidationError(cfg.command + ": --tensor is required");
    }

    if (cfg.command == "norms") {
      report = norms_report(*tensor, cfg);
    } else if (cfg.command == "bound") {
      report = bound_report_json(*tensor, cfg);
    } else if (cfg.command == "verify") {
      report = verify_report(*tensor, cfg, violation);
    } else if (cfg.command == "nets") {
      report = nets_report(*tensor, cfg, violation);
    } else if (cfg.command == "partition") {
      report = partition_report(*tensor, cfg, violation);
    } else if (cfg.command == "fit-c") {
      report = fit_c_report(tensor, cfg);
    } else {
      throw ValidationError("unknown command: " + cfg.command);
    }

    const std::string text =
        cfg.format == "csv" ? json_to_csv(report, cfg.command) : report.dump(2) + "\n";
    if (!cfg.output.empty()) {
      std::ofstream file(cfg.output);
      if (!file) throw ValidationError("cannot open output file: " + cfg.output);
      file << text;
    } else {
      out << text;
    }
    return violation ? 1 : 0;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace chaos
