#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chaos/partitions.hpp"

namespace chaos {

inline constexpr std::size_t kDefaultEntryCap = 10'000'000;

// One coefficient at a 1-based multi-index, as it appears in tensor files.
struct SparseEntry {
  std::vector<int> index;
  double value = 0.0;
};

// Dense real tensor a(i_1,...,i_d) of order d with shape (n_1,...,n_d),
// stored row-major (last slot fastest).  Immutable after construction; all
// operations on it are pure functions.  Order-0 tensors (a single scalar)
// arise from full contractions and are permitted internally.
class CoefficientTensor {
 public:
  CoefficientTensor() : coeffs_(1, 0.0) {}

  // Validates shape consistency and finiteness of every entry.
  CoefficientTensor(std::vector<int> dims, std::vector<double> coeffs);

  int order() const { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<double>& coeffs() const { return coeffs_; }

  // Entry at a 0-based multi-index.
  double at(std::span<const int> index0) const;
  std::size_t linear_index(std::span<const int> index0) const;

  double frobenius_norm() const;
  bool is_zero() const;

  CoefficientTensor scaled(double factor) const;

 private:
  std::vector<int> dims_;
  std::vector<double> coeffs_;
};

// A tuple of real vectors, one per tensor slot (or per retained slot).
struct RealVectorTuple {
  std::vector<std::vector<double>> parts;

  RealVectorTuple() = default;
  explicit RealVectorTuple(std::vector<std::vector<double>> p) : parts(std::move(p)) {}

  std::size_t count() const { return parts.size(); }
  static RealVectorTuple zeros(std::span<const int> lengths);
};

// Lexicographic order on the concatenated coordinates; ties by shape.
bool lex_less(const RealVectorTuple& a, const RealVectorTuple& b);

// View of a tensor regrouped along a partition of its slots: block r of the
// partition becomes one slot whose index ranges over the flattened
// multi-index of the block (slots inside a block in ascending order,
// row-major).  Entries are a bijective rearrangement of the base entries.
struct GroupedTensor {
  std::vector<int> base_dims;
  std::vector<std::vector<int>> blocks;  // canonical order, 1-based slot labels
  CoefficientTensor flattened;           // order = number of blocks
};

// Builds a validated tensor from a dense row-major array.
// Requires nonempty dims and prod(dims) <= entry_cap.
CoefficientTensor make_tensor(std::vector<int> dims, std::vector<double> dense,
                              std::size_t entry_cap = kDefaultEntryCap);

// Builds a tensor from sparse (1-based multi-index, value) entries.
// Duplicate indices sum.
CoefficientTensor make_tensor(std::vector<int> dims, const std::vector<SparseEntry>& entries,
                              std::size_t entry_cap = kDefaultEntryCap);

// Sum over all slots: sum a(i_1,...,i_d) u_1(i_1)...u_d(i_d).
double apply_multilinear(const CoefficientTensor& a, const RealVectorTuple& u);

// Inner product of coefficient arrays: sum a(i) v(i), v dense with a's shape.
double apply_functional(const CoefficientTensor& a, std::span<const double> v);

// Contracts slot j (1-based) against u: entry at the remaining multi-index
// equals sum_{i_j} a(...) u(i_j).  Surviving slots keep ascending order.
CoefficientTensor contract_slot(const CoefficientTensor& a, int slot, std::span<const double> u);

// Contracts every slot in `slots` (1-based, 1 <= |slots| <= d-2) and scales
// the result by m_weight^{|slots|/2}.  `u` supplies one vector per contracted
// slot, in ascending slot order.
CoefficientTensor contract_set(const CoefficientTensor& a, const std::vector<int>& slots,
                               const RealVectorTuple& u, int m_weight);

// Contracts slots 1..d-1 against the d-1 parts of u, returning the length-n_d
// vector b(i_d) = sum a(i_1,...,i_d) u_1(i_1)...u_{d-1}(i_{d-1}).
std::vector<double> contract_front_slots(const CoefficientTensor& a, const RealVectorTuple& u);

// Regroups a tensor along a partition.  The partition's ground set must have
// exactly `order` elements; its sorted elements are mapped to slots 1..d by
// rank, so partitions of index sets other than {1,...,d} (as arise after
// contractions) are accepted.
GroupedTensor group_blocks(const CoefficientTensor& a, const SetPartition& p);

}  // namespace chaos
