#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chaos/norms.hpp"
#include "chaos/tensor.hpp"

namespace chaos {

enum class Statistic { kMoment, kTail, kSupMoment };

std::string statistic_name(Statistic s);

// Result of a Monte-Carlo study.  Rerunning with the same inputs reproduces
// every field bit-identically.
struct ChaosStudy {
  Statistic statistic = Statistic::kMoment;
  double parameter = 1.0;  // M for moment statistics, x for tails
  std::uint64_t seed = 0;
  std::size_t n_samples = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  // Set when the sample kurtosis of the averaged quantity exceeds 100; the
  // delta-method standard error is unreliable in that regime.
  bool heavy_tail_caveat = false;
};

// ---- deterministic summation and interval helpers ----

// Fixed-order pairwise summation; order-insensitive up to ~1e-12 relative.
double pairwise_sum(std::span<const double> xs);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double kurtosis = 0.0;
};
MeanEstimate mean_with_se(std::span<const double> xs);

struct WilsonInterval {
  double p_hat = 0.0;
  double std_error = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};
WilsonInterval wilson_interval(std::size_t hits, std::size_t n, double z = 1.96);

// ---- samplers (all counter-seeded and embarrassingly parallel) ----

// i.i.d. draws of Y(A) with fresh Gaussian vectors G_1..G_d per draw.
std::vector<double> sample_y(const CoefficientTensor& a, std::size_t count, std::uint64_t seed);

// Draws of the Gaussian variable Y_d(u) = <contraction of A by u, G_d>.
std::vector<double> sample_y_d(const CoefficientTensor& a, const RealVectorTuple& u,
                               std::size_t count, std::uint64_t seed);

// Draws of Z_d: per draw, contract slot d against a Gaussian vector and take
// the injective norm over all-singleton blocks.  Exact for d = 2,3; a lower
// bound for d >= 4 where the inner problem is solved by alternating
// maximization.
std::vector<double> sample_z(const CoefficientTensor& a, std::size_t count, std::uint64_t seed,
                             const AlsConfig& cfg);

// Exact E Y(A)^{2M} by enumeration over multisets of nonzero coefficients
// with per-slot Gaussian moment factors (0 for odd powers, (c-1)!! for even).
// Guarded by (prod dims)^{2M} <= tuple_budget.
double wick_moment(const CoefficientTensor& a, int m, double tuple_budget = 1e8);

// Exact E Y^{2M} for d = 2 via (2M-1)!! times the M-th moment of the Gaussian
// quadratic form with the Gram matrix of A, computed from eigenvalues through
// the cumulant recursion.  Independent of wick_moment.
double quad_form_moment_d2(const CoefficientTensor& a, int m);

// Runs one study: moment(M) averages Y^{2M}, tail(x) counts |Y| > x with a
// Wilson interval, sup_moment(M) averages Z^{2M}.
ChaosStudy empirical_statistic(const CoefficientTensor& a, Statistic stat, double parameter,
                               std::size_t count, std::uint64_t seed, const AlsConfig& cfg);

// ---- exact symmetric eigensolver (cyclic Jacobi) ----

struct EigenDecomposition {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // row-major n x n, column j pairs with values[j]
};

// mat: row-major symmetric n x n.  Converges the off-diagonal mass below
// tol * frobenius; intended for n <= 30.
EigenDecomposition jacobi_eigen(std::vector<double> mat, int n, double tol = 1e-12,
                                int max_sweeps = 100);

// ---- constrained supremum draws (d = 2) ----

// Draws of sup{ <u, A g> : |u| <= 1, |A^T u| <= 2^{-level} M^{-1/2} } with a
// fresh Gaussian g per draw.  The inner problem is solved exactly in the
// eigenbasis of A A^T (KKT cases plus bisection on the active-set path).
std::vector<double> sample_z_constrained_d2(const CoefficientTensor& a, int level, int m,
                                            std::size_t count, std::uint64_t seed);

}  // namespace chaos
