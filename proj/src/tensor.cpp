#include "chaos/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chaos/errors.hpp"

namespace chaos {

namespace {

std::size_t checked_product(const std::vector<int>& dims, std::size_t cap) {
  std::size_t total = 1;
  for (int n : dims) {
    if (n < 1) throw ValidationError("tensor dims must be positive");
    if (total > cap / static_cast<std::size_t>(n)) {
      throw CapacityError("tensor entry count exceeds the cap of " + std::to_string(cap));
    }
    total *= static_cast<std::size_t>(n);
  }
  return total;
}

std::size_t plain_product(const std::vector<int>& dims) {
  std::size_t total = 1;
  for (int n : dims) total *= static_cast<std::size_t>(n);
  return total;
}

}  // namespace

CoefficientTensor::CoefficientTensor(std::vector<int> dims, std::vector<double> coeffs)
    : dims_(std::move(dims)), coeffs_(std::move(coeffs)) {
  for (int n : dims_) {
    if (n < 1) throw ValidationError("tensor dims must be positive");
  }
  if (coeffs_.size() != plain_product(dims_)) {
    throw ValidationError("coefficient array length does not match the product of dims");
  }
  for (double v : coeffs_) {
    if (!std::isfinite(v)) throw ValidationError("tensor entries must be finite");
  }
}

std::size_t CoefficientTensor::linear_index(std::span<const int> index0) const {
  if (index0.size() != dims_.size()) throw ValidationError("multi-index order mismatch");
  std::size_t lin = 0;
  for (std::size_t j = 0; j < dims_.size(); ++j) {
    if (index0[j] < 0 || index0[j] >= dims_[j]) throw ValidationError("multi-index out of range");
    lin = lin * static_cast<std::size_t>(dims_[j]) + static_cast<std::size_t>(index0[j]);
  }
  return lin;
}

double CoefficientTensor::at(std::span<const int> index0) const {
  return coeffs_[linear_index(index0)];
}

double CoefficientTensor::frobenius_norm() const {
  double sum = 0.0;
  for (double v : coeffs_) sum += v * v;
  return std::sqrt(sum);
}

bool CoefficientTensor::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double v) { return v == 0.0; });
}

CoefficientTensor CoefficientTensor::scaled(double factor) const {
  std::vector<double> out(coeffs_);
  for (double& v : out) v *= factor;
  return CoefficientTensor(dims_, std::move(out));
}

RealVectorTuple RealVectorTuple::zeros(std::span<const int> lengths) {
  std::vector<std::vector<double>> parts;
  parts.reserve(lengths.size());
  for (int n : lengths) parts.emplace_back(static_cast<std::size_t>(n), 0.0);
  return RealVectorTuple(std::move(parts));
}

bool lex_less(const RealVectorTuple& a, const RealVectorTuple& b) {
  if (a.parts.size() != b.parts.size()) return a.parts.size() < b.parts.size();
  for (std::size_t j = 0; j < a.parts.size(); ++j) {
    const auto& x = a.parts[j];
    const auto& y = b.parts[j];
    if (x.size() != y.size()) return x.size() < y.size();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] != y[i]) return x[i] < y[i];
    }
  }
  return false;
}

CoefficientTensor make_tensor(std::vector<int> dims, std::vector<double> dense,
                              std::size_t entry_cap) {
  if (dims.empty()) throw ValidationError("make_tensor: dims must be nonempty");
  checked_product(dims, entry_cap);
  return CoefficientTensor(std::move(dims), std::move(dense));
}

CoefficientTensor make_tensor(std::vector<int> dims, const std::vector<SparseEntry>& entries,
                              std::size_t entry_cap) {
  if (dims.empty()) throw ValidationError("make_tensor: dims must be nonempty");
  const std::size_t total = checked_product(dims, entry_cap);
  std::vector<double> dense(total, 0.0);
  std::vector<int> idx0(dims.size());
  for (const auto& e : entries) {
    if (e.index.size() != dims.size()) {
      throw ValidationError("make_tensor: sparse index order mismatch");
    }
    if (!std::isfinite(e.value)) throw ValidationError("make_tensor: entries must be finite");
    std::size_t lin = 0;
    for (std::size_t j = 0; j < dims.size(); ++j) {
      idx0[j] = e.index[j] - 1;  // 1-based at the interface
      if (idx0[j] < 0 || idx0[j] >= dims[j]) {
        throw ValidationError("make_tensor: sparse index out of range");
      }
      lin = lin * static_cast<std::size_t>(dims[j]) + static_cast<std::size_t>(idx0[j]);
    }
    dense[lin] += e.value;  // duplicates sum
  }
  return CoefficientTensor(std::move(dims), std::move(dense));
}

double apply_multilinear(const CoefficientTensor& a, const RealVectorTuple& u) {
  const int d = a.order();
  if (static_cast<int>(u.count()) != d) {
    throw ValidationError("apply_multilinear: tuple must have one part per slot");
  }
  for (int j = 0; j < d; ++j) {
    if (static_cast<int>(u.parts[j].size()) != a.dims()[j]) {
      throw ValidationError("apply_multilinear: part length mismatch");
    }
  }
  // Fold the last remaining slot repeatedly; row-major makes it contiguous.
  std::vector<double> cur(a.coeffs());
  std::vector<double> next;
  for (int j = d - 1; j >= 0; --j) {
    const std::size_t nj = static_cast<std::size_t>(a.dims()[j]);
    const std::size_t rows = cur.size() / nj;
    next.assign(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      double acc = 0.0;
      const double* row = cur.data() + r * nj;
      for (std::size_t i = 0; i < nj; ++i) acc += row[i] * u.parts[j][i];
      next[r] = acc;
    }
    cur.swap(next);
  }
  return cur[0];
}

double apply_functional(const CoefficientTensor& a, std::span<const double> v) {
  if (v.size() != a.size()) throw ValidationError("apply_functional: shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += a.coeffs()[i] * v[i];
  return acc;
}

CoefficientTensor contract_slot(const CoefficientTensor& a, int slot, std::span<const double> u) {
  const int d = a.order();
  if (slot < 1 || slot > d) throw ValidationError("contract_slot: slot out of range");
  const std::size_t nj = static_cast<std::size_t>(a.dims()[slot - 1]);
  if (u.size() != nj) throw ValidationError("contract_slot: vector length mismatch");

  std::size_t pre = 1, post = 1;
  for (int p = 0; p < slot - 1; ++p) pre *= static_cast<std::size_t>(a.dims()[p]);
  for (int p = slot; p < d; ++p) post *= static_cast<std::size_t>(a.dims()[p]);

  std::vector<double> out(pre * post, 0.0);
  for (std::size_t ipre = 0; ipre < pre; ++ipre) {
    for (std::size_t ij = 0; ij < nj; ++ij) {
      const double w = u[ij];
      if (w == 0.0) continue;
      const double* src = a.coeffs().data() + (ipre * nj + ij) * post;
      double* dst = out.data() + ipre * post;
      for (std::size_t ipost = 0; ipost < post; ++ipost) dst[ipost] += w * src[ipost];
    }
  }
  std::vector<int> dims;
  dims.reserve(d - 1);
  for (int p = 0; p < d; ++p) {
    if (p != slot - 1) dims.push_back(a.dims()[p]);
  }
  return CoefficientTensor(std::move(dims), std::move(out));
}

CoefficientTensor contract_set(const CoefficientTensor& a, const std::vector<int>& slots,
                               const RealVectorTuple& u, int m_weight) {
  const int d = a.order();
  const int k = static_cast<int>(slots.size());
  if (k < 1 || k > d - 2) throw ValidationError("contract_set: need 1 <= |I| <= d-2");
  if (m_weight < 1) throw ValidationError("contract_set: M must be a positive integer");
  std::vector<int> sorted = slots;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("contract_set: duplicate slot");
  }
  if (sorted.front() < 1 || sorted.back() > d) throw ValidationError("contract_set: slot out of range");
  if (static_cast<int>(u.count()) != k) {
    throw ValidationError("contract_set: tuple must have one part per contracted slot");
  }

  // Contract from the highest slot down so lower slot numbers stay valid.
  CoefficientTensor cur = a;
  for (int p = k - 1; p >= 0; --p) cur = contract_slot(cur, sorted[p], u.parts[p]);
  return cur.scaled(std::pow(static_cast<double>(m_weight), 0.5 * k));
}

std::vector<double> contract_front_slots(const CoefficientTensor& a, const RealVectorTuple& u) {
  const int d = a.order();
  if (d < 2) throw ValidationError("contract_front_slots: requires order >= 2");
  if (static_cast<int>(u.count()) != d - 1) {
    throw ValidationError("contract_front_slots: tuple must have d-1 parts");
  }
  // Peel the leading slot repeatedly; the trailing block stays contiguous.
  std::vector<double> cur(a.coeffs());
  std::vector<double> next;
  std::size_t rest = cur.size();
  for (int j = 0; j < d - 1; ++j) {
    const std::size_t nj = static_cast<std::size_t>(a.dims()[j]);
    if (u.parts[j].size() != nj) throw ValidationError("contract_front_slots: part length mismatch");
    rest /= nj;
    next.assign(rest, 0.0);
    for (std::size_t i = 0; i < nj; ++i) {
      const double w = u.parts[j][i];
      if (w == 0.0) continue;
      const double* src = cur.data() + i * rest;
      for (std::size_t r = 0; r < rest; ++r) next[r] += w * src[r];
    }
    cur.swap(next);
  }
  return cur;
}

GroupedTensor group_blocks(const CoefficientTensor& a, const SetPartition& p) {
  const int d = a.order();
  if (static_cast<int>(p.ground().size()) != d) {
    throw ValidationError("group_blocks: partition ground set must have one element per slot");
  }
  // Map sorted ground elements to slots 0..d-1 by rank.
  auto slot_of = [&](int elem) {
    const auto& g = p.ground();
    return static_cast<int>(std::lower_bound(g.begin(), g.end(), elem) - g.begin());
  };

  const int s = p.size();
  std::vector<std::vector<int>> block_slots(s);  // 0-based slots, ascending
  std::vector<int> grouped_dims(s, 1);
  for (int r = 0; r < s; ++r) {
    for (int elem : p.blocks()[r]) {
      const int j = slot_of(elem);
      block_slots[r].push_back(j);
      grouped_dims[r] *= a.dims()[j];
    }
  }

  // Output strides: row-major over blocks in canonical order.
  std::vector<std::size_t> block_stride(s, 1);
  for (int r = s - 2; r >= 0; --r) {
    block_stride[r] = block_stride[r + 1] * static_cast<std::size_t>(grouped_dims[r + 1]);
  }
  // Per input slot: contribution stride into the output linear index.
  std::vector<std::size_t> slot_out_stride(d, 0);
  for (int r = 0; r < s; ++r) {
    std::size_t inner = 1;
    for (int q = static_cast<int>(block_slots[r].size()) - 1; q >= 0; --q) {
      const int j = block_slots[r][q];
      slot_out_stride[j] = inner * block_stride[r];
      inner *= static_cast<std::size_t>(a.dims()[j]);
    }
  }

  std::vector<double> out(a.size(), 0.0);
  std::vector<int> idx(d, 0);
  for (std::size_t lin = 0; lin < a.size(); ++lin) {
    std::size_t olin = 0;
    for (int j = 0; j < d; ++j) olin += slot_out_stride[j] * static_cast<std::size_t>(idx[j]);
    out[olin] = a.coeffs()[lin];
    for (int j = d - 1; j >= 0; --j) {
      if (++idx[j] < a.dims()[j]) break;
      idx[j] = 0;
    }
  }

  GroupedTensor g;
  g.base_dims = a.dims();
  g.blocks = p.blocks();
  g.flattened = CoefficientTensor(std::move(grouped_dims), std::move(out));
  return g;
}

}  // namespace chaos
