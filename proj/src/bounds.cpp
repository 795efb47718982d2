#include "chaos/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chaos/errors.hpp"
#include "chaos/oracle.hpp"
#include "chaos/rng.hpp"

namespace chaos {

std::vector<AlphaValue> alpha_profile(const CoefficientTensor& a, const AlsConfig& cfg) {
  std::vector<AlphaValue> out;
  out.reserve(static_cast<std::size_t>(a.order()));
  for (int s = 1; s <= a.order(); ++s) {
    const AlphaResult r = alpha_s(a, s, cfg);
    out.push_back({s, r.norm.value, r.norm.exact});
  }
  return out;
}

NormalizationCheck check_normalization(const CoefficientTensor& a, int m, int upto,
                                       const AlsConfig& cfg) {
  const int d = a.order();
  if (upto != d && upto != d - 1) throw ValidationError("check_normalization: upto must be d-1 or d");
  if (m < 1) throw ValidationError("check_normalization: M must be a positive integer");

  NormalizationCheck out;
  out.ok = true;
  out.all_exact = true;
  for (int s = 1; s <= upto; ++s) {
    const AlphaResult r = alpha_s(a, s, cfg);
    out.alphas.push_back({s, r.norm.value, r.norm.exact});
    const double target = std::pow(static_cast<double>(m), -0.5 * (s - 1));
    out.margins.push_back(target - r.norm.value);
    if (r.norm.value > target) out.ok = false;
    if (!r.norm.exact) out.all_exact = false;
  }
  return out;
}

Normalized normalize_dm(const CoefficientTensor& a, int m, const AlsConfig& cfg) {
  if (a.is_zero()) throw ValidationError("normalize_dm: zero tensor has no normalization");
  if (m < 1) throw ValidationError("normalize_dm: M must be a positive integer");
  double d_factor = 0.0;
  for (int s = 1; s <= a.order(); ++s) {
    const AlphaResult r = alpha_s(a, s, cfg);
    d_factor = std::max(d_factor, std::pow(static_cast<double>(m), 0.5 * (s - 1)) * r.norm.value);
  }
  return Normalized{a.scaled(1.0 / d_factor), d_factor};
}

BoundReport moment_bound(const CoefficientTensor& a, int m, double c, const AlsConfig& cfg) {
  if (m < 1) throw ValidationError("moment_bound: M must be a positive integer");
  if (c <= 0.0) throw ValidationError("moment_bound: C must be positive");

  BoundReport report;
  report.m = m;
  report.c_used = c;
  report.alphas = alpha_profile(a, cfg);
  for (const auto& av : report.alphas) {
    report.raw_factor =
        std::max(report.raw_factor, std::pow(static_cast<double>(m), 0.5 * av.s) * av.value);
  }
  if (report.raw_factor == 0.0) {
    report.log_moment_bound = -std::numeric_limits<double>::infinity();
    report.moment_bound = 0.0;
    return report;
  }
  report.log_moment_bound = 2.0 * m * (std::log(c) + std::log(report.raw_factor));
  report.moment_bound = std::exp(report.log_moment_bound);
  if (!std::isfinite(report.moment_bound)) {
    report.moment_bound = std::numeric_limits<double>::max();
    report.overflowed = true;
  }
  return report;
}

double tail_bound_from_alphas(const std::vector<AlphaValue>& alphas, double x, double c) {
  if (x <= 0.0) throw ValidationError("tail_bound: x must be positive");
  if (c <= 0.0) throw ValidationError("tail_bound: C must be positive");
  double exponent = std::numeric_limits<double>::infinity();
  for (const auto& av : alphas) {
    if (av.value <= 0.0) continue;  // a vanishing scale imposes no constraint
    exponent = std::min(exponent, std::pow(x / av.value, 2.0 / av.s));
  }
  if (!std::isfinite(exponent)) return 0.0;  // zero tensor: the chaos is a.s. 0
  return std::min(1.0, c * std::exp(-exponent / c));
}

double tail_bound(const CoefficientTensor& a, double x, double c, const AlsConfig& cfg) {
  return tail_bound_from_alphas(alpha_profile(a, cfg), x, c);
}

double w_ix_predicted_bound(const CoefficientTensor& a, const RealVectorTuple& u,
                            const std::vector<int>& i_set, double t, int m, const AlsConfig& cfg) {
  const int d = a.order();
  if (d < 3) throw ValidationError("w_ix_predicted_bound: requires d >= 3");
  if (i_set.empty()) throw ValidationError("w_ix_predicted_bound: I must be nonempty");
  if (m < 1) throw ValidationError("w_ix_predicted_bound: M must be a positive integer");
  if (static_cast<int>(u.count()) != d - 1) {
    throw ValidationError("w_ix_predicted_bound: tuple must have d-1 parts");
  }
  for (int j : i_set) {
    if (j < 1 || j > d - 1) throw ValidationError("w_ix_predicted_bound: I must lie in {1,...,d-1}");
  }

  const int size = static_cast<int>(i_set.size());
  if (size >= 2) {
    return std::pow(t, size) * std::pow(static_cast<double>(m), -0.5 * (d - size - 1));
  }
  const int k = i_set.front();
  double smallest = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= d - 1; ++j) {
    if (j == k) continue;
    smallest = std::min(smallest, alpha_tilde_jk(a, j, k, u.parts[j - 1], cfg).value);
  }
  return t * smallest;
}

GaussianSeminormStudy alpha_tilde_gaussian_study(const CoefficientTensor& a, int j, int k, int m,
                                                 std::size_t count, std::uint64_t seed,
                                                 const AlsConfig& cfg) {
  if (m < 1) throw ValidationError("alpha_tilde_gaussian_study: M must be a positive integer");
  if (count < 1) throw ValidationError("alpha_tilde_gaussian_study: count must be positive");
  const std::size_t nj = static_cast<std::size_t>(a.dims().at(j - 1));
  CounterRng rng(seed);
  std::vector<double> draws(count);
  for (std::size_t i = 0; i < count; ++i) {
    draws[i] = alpha_tilde_jk(a, j, k, rng.normal_vector(slot_stream(i, j), nj), cfg).value;
  }
  const MeanEstimate est = mean_with_se(draws);
  GaussianSeminormStudy study;
  study.estimate = est.mean;
  study.std_error = est.std_error;
  study.implied_c = est.mean * std::pow(static_cast<double>(m), 0.5 * (a.order() - 3));
  study.n_samples = count;
  study.seed = seed;
  return study;
}

}  // namespace chaos
