#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chaos/norms.hpp"
#include "chaos/oracle.hpp"
#include "chaos/tensor.hpp"

namespace chaos {

using Pseudonorm = std::function<double(const std::vector<double>&)>;
using TupleMetric = std::function<double(const RealVectorTuple&, const RealVectorTuple&)>;

// Monte-Carlo estimate of the W statistic: the mean of the chaos pseudonorm
// alpha over rank-one inputs whose coordinates inside I are replaced by
// t-scaled Gaussian vectors (and kept at x outside I).  Never materializes
// the outer product.
ChaosStudy w_ix_study(const CoefficientTensor& a, const RealVectorTuple& x,
                      const std::vector<int>& i_set, double t, std::size_t count,
                      std::uint64_t seed);

// One measure-lower-bound verification: an estimated Gaussian-measure of a
// pseudonorm neighbourhood against the predicted floor.  Pass is one-sided:
// the estimate may not fall more than three standard errors below the bound.
struct MeasureCheck {
  double estimate = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  bool pass = false;
  double threshold = 0.0;  // the pre-estimated neighbourhood radius (sum of W terms)
};

// Single-space check: mu_{n,t}{ y : a1(y-x) <= 4 E a1(tG), a2(y-x) <= 4 E a2(tG) }
// against the floor 0.5 exp(-1/(2 t^2)).  The two expectations are estimated
// first on an independent substream.
MeasureCheck measure_lower_bound_single(const Pseudonorm& a1, const Pseudonorm& a2,
                                        const std::vector<double>& x, double t,
                                        std::size_t count, std::uint64_t seed);

// Product-space check for the chaos pseudometric of `a` on its d-1 leading
// slots: mu{ y : rho_alpha(x,y) <= sum_I W_I^x(alpha,4t) } against
// 2^{-(d-1)} exp(-(d-1)/(2 t^2)).  The threshold sums W estimates over all
// nonempty subsets of {1,...,d-1} (capacity error when d-1 > 10).
MeasureCheck measure_lower_bound_product(const CoefficientTensor& a, const RealVectorTuple& x,
                                         double t, std::size_t count, std::uint64_t seed);

// First-fit greedy net over `points` in the given order: a point becomes a
// center iff its distance to every existing center exceeds two_u.  Both
// certificates are recomputed exhaustively on the output.
struct NetResult {
  std::vector<RealVectorTuple> centers;
  std::vector<std::size_t> center_indices;  // positions of the centers among the inputs
  std::vector<std::size_t> assignment;      // per point: first center within two_u
  double radius_2u = 0.0;
  std::size_t covered_count = 0;
  bool covering_ok = false;
  bool packing_ok = false;
  std::size_t cardinality = 0;
};
NetResult greedy_net(const std::vector<RealVectorTuple>& points, const TupleMetric& metric,
                     double two_u);

// Membership class for finite tuple sets: thresholds shrink geometrically in
// the level N.
struct UClassParams {
  int m = 1;        // moment scale M
  int level = 0;    // N
  int r = 1;        // cardinality cap
  int d = 3;        // tensor order

  double alpha_tilde_threshold() const;          // 2^{-N} M^{-(d-2)/2}
  double rho_threshold() const;                  // 2^{-2N} M^{-(d-1)/2}
  double part_rho_threshold(int i_size) const;   // 2^{-2N} M^{-(d-|I|-1)/2}
};

struct UClassViolation {
  std::string clause;  // cardinality | alpha_tilde | rho_alpha | ball | difference_ball | part_rho
  int t = -1;          // element indices involved (-1 when not applicable)
  int t2 = -1;
  int j = -1;          // slot / pair labels
  int k = -1;
  double value = 0.0;
  double threshold = 0.0;
};

struct UClassReport {
  bool ok = false;
  std::vector<UClassViolation> violations;
};

// Verifies every clause of class membership: cardinality, the alpha_tilde
// threshold for each element and ordered pair (j,k), the pairwise rho_alpha
// threshold, unit-ball membership of elements and of pairwise differences.
// Returns all violated clauses with indices and margins.
UClassReport check_u_class(const CoefficientTensor& a, const UClassParams& params,
                           const std::vector<RealVectorTuple>& u_set, const AlsConfig& cfg);

// One part of a shifted partition: `members` are already shifted by `shift`.
struct UPart {
  RealVectorTuple shift;
  std::vector<RealVectorTuple> members;
};

struct UPartition {
  std::vector<UPart> parts;
  std::size_t cardinality = 0;
};

// Informational cardinality budget 2^{C M 2^{2N}} for a user-supplied C.
double u_partition_cardinality_budget(const UClassParams& params, double c);

// Thrown when a constructed partition fails its own postconditions (the net
// radius budget was too small for the requested thresholds).
class UPartitionError : public std::runtime_error {
 public:
  UPartitionError(const std::string& what, UClassViolation v)
      : std::runtime_error(what), violation(std::move(v)) {}
  UClassViolation violation;
};

// Constructive partition of a class member U, on the finite set itself:
// greedy nets in each alpha_tilde coordinate pseudometric, then in rho_alpha
// within shifted cells, then in each contracted-rho pseudometric anchored at
// the cell shift.  Every output part is re-checked for membership at
// (r, N+2) and for the contracted-rho clause at every I with 1 <= |I| <= d-2;
// a failure raises UPartitionError.
UPartition partition_u_class(const CoefficientTensor& a, const UClassParams& params,
                             const std::vector<RealVectorTuple>& u_set, const AlsConfig& cfg);

}  // namespace chaos
