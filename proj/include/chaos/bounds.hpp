#pragma once

#include <optional>
#include <vector>

#include "chaos/norms.hpp"
#include "chaos/tensor.hpp"

namespace chaos {

struct AlphaValue {
  int s = 1;
  double value = 0.0;
  bool exact = true;
};

// All alpha_s for s = 1..d.
std::vector<AlphaValue> alpha_profile(const CoefficientTensor& a, const AlsConfig& cfg);

// Checks alpha_s <= M^{-(s-1)/2} for 1 <= s <= upto (upto is d-1 or d).
// With heuristic alpha values for three or more blocks this is a
// necessary-condition check; `all_exact` says whether it is conclusive.
struct NormalizationCheck {
  bool ok = false;
  bool all_exact = false;
  std::vector<double> margins;  // M^{-(s-1)/2} - alpha_s, s = 1..upto
  std::vector<AlphaValue> alphas;
};
NormalizationCheck check_normalization(const CoefficientTensor& a, int m, int upto,
                                       const AlsConfig& cfg);

// Divides A by D(M) = max_s M^{(s-1)/2} alpha_s so the scaled tensor passes
// check_normalization(., M, d) (up to heuristic-alpha caveats).
struct Normalized {
  CoefficientTensor scaled;
  double d_factor = 1.0;
};
Normalized normalize_dm(const CoefficientTensor& a, int m, const AlsConfig& cfg);

// Moment and tail bounds built from the alpha profile.
struct BoundReport {
  int m = 1;
  double c_used = 1.0;
  std::vector<AlphaValue> alphas;
  double raw_factor = 0.0;       // max_s M^{s/2} alpha_s
  double log_moment_bound = 0.0; // 2M (log C + log raw_factor); -inf for zero tensors
  double moment_bound = 0.0;     // exp of the log value; overflow flagged instead of failing
  bool overflowed = false;
  std::optional<double> tail_x;
  std::optional<double> tail_bound;
};

// (C max_s M^{s/2} alpha_s)^{2M}, with per-s contributions retained.
BoundReport moment_bound(const CoefficientTensor& a, int m, double c, const AlsConfig& cfg);

// min(1, C exp(-(1/C) min_s (x/alpha_s)^{2/s})).  Terms with alpha_s = 0
// impose no constraint and are skipped; an all-zero profile returns 0.
double tail_bound(const CoefficientTensor& a, double x, double c, const AlsConfig& cfg);
double tail_bound_from_alphas(const std::vector<AlphaValue>& alphas, double x, double c);

// Predicted upper bound for the W statistic of the nets module:
//   |I| >= 2 :  t^{|I|} M^{-(d-|I|-1)/2}
//   I = {k}  :  t min_{j != k} alpha_tilde_jk(u_j)
// Pure formula evaluation; Monte-Carlo comparison lives in the nets module.
double w_ix_predicted_bound(const CoefficientTensor& a, const RealVectorTuple& u,
                            const std::vector<int>& i_set, double t, int m, const AlsConfig& cfg);

// Informational study of the coordinate seminorm at a Gaussian argument:
// estimates E alpha_tilde_jk(G_j) by Monte Carlo and reports the implied
// constant estimate * M^{(d-3)/2}.  Nothing is asserted; the constant in the
// theory is not quantified.
struct GaussianSeminormStudy {
  double estimate = 0.0;
  double std_error = 0.0;
  double implied_c = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};
GaussianSeminormStudy alpha_tilde_gaussian_study(const CoefficientTensor& a, int j, int k, int m,
                                                 std::size_t count, std::uint64_t seed,
                                                 const AlsConfig& cfg);

}  // namespace chaos
