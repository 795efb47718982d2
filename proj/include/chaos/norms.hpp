#pragma once

#include <cstdint>
#include <vector>

#include "chaos/partitions.hpp"
#include "chaos/tensor.hpp"

namespace chaos {

// Knobs for the iterative norm solvers (power iteration and block
// alternating maximization).
struct AlsConfig {
  int restarts = 20;
  int max_sweeps = 500;
  double tol = 1e-8;
  std::uint64_t seed = 0;
};

// Result of a partition-norm computation.
//
// `exact` is true for groupings with at most two blocks (Euclidean or
// spectral norm, solved to tolerance) and for zero tensors; with three or
// more blocks the value comes from multi-start alternating maximization and
// is a certified LOWER bound of the true supremum.  The witness is a unit
// vector per block attaining `value`; a zero tensor gets zero witnesses.
struct NormResult {
  double value = 0.0;
  bool exact = false;
  std::vector<std::vector<double>> witness;
  int restarts_used = 0;
  bool converged = true;
};

struct AlphaResult {
  NormResult norm;
  SetPartition argmax;
};

// Supremum of the grouped multilinear form over the product of unit balls,
// one ball per block.
NormResult injective_norm(const GroupedTensor& g, const AlsConfig& cfg);

// V(P, B): injective norm of B regrouped along P.  P's ground set must have
// one element per slot of B (relabeled by rank, as after contractions).
NormResult partition_norm(const CoefficientTensor& b, const SetPartition& p, const AlsConfig& cfg);

// alpha_s: maximum of V(P, A) over the partitions of {1,...,d} with exactly
// s blocks.  Ties keep the first partition in enumeration order.
AlphaResult alpha_s(const CoefficientTensor& a, int s, const AlsConfig& cfg);

// Coordinate seminorm: V(P_{j,k}, .) of the tensor with slot j contracted
// against u_j.  Requires d >= 3 and distinct j,k in {1,...,d-1}.
NormResult alpha_tilde_jk(const CoefficientTensor& a, int j, int k, std::span<const double> u_j,
                          const AlsConfig& cfg);

// Set version: V(P_{I,k}, .) of the weighted contraction of the slots in I
// against the matching parts of the full (d-1)-part tuple u.
NormResult alpha_tilde_Ik(const CoefficientTensor& a, const RealVectorTuple& u,
                          const std::vector<int>& i_set, int k, int m_weight, const AlsConfig& cfg);

// Max of V(P, .) of the weighted contraction over all partitions of the
// surviving slots with exactly s blocks.
NormResult alpha_us_I(const CoefficientTensor& a, const RealVectorTuple& u,
                      const std::vector<int>& i_set, int s, int m_weight, const AlsConfig& cfg);

// Pseudonorm alpha(v) = sqrt( sum_{i_d} ( sum a(i_1,...,i_d) v(i_1,...,i_{d-1}) )^2 )
// for v dense over slots 1..d-1.  Requires d >= 2.
double pseudonorm_alpha(const CoefficientTensor& a, std::span<const double> v);

// Chaos pseudometric: alpha applied to the difference of the outer products
// of two (d-1)-part tuples (computed by contraction, the outer products are
// never materialized).
double rho_alpha(const CoefficientTensor& a, const RealVectorTuple& u, const RealVectorTuple& v);

// rho of the I-contracted tensor: coordinates of v, vbar inside I are
// ignored; the surviving coordinates are compared under the contraction of
// `a` against u on I with weight m^{|I|/2}.
double rho_alpha_Iu(const CoefficientTensor& a, const RealVectorTuple& u,
                    const std::vector<int>& i_set, int m_weight, const RealVectorTuple& v,
                    const RealVectorTuple& vbar);

}  // namespace chaos
