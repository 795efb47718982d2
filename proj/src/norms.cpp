#include "chaos/norms.hpp"

#include <algorithm>
#include <cmath>

#include "chaos/errors.hpp"
#include "chaos/rng.hpp"

namespace chaos {

namespace {

double dot(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void normalize(std::vector<double>& x) {
  const double n = norm2(x);
  if (n > 0.0) {
    for (double& v : x) v /= n;
  }
}

NormResult zero_result(const std::vector<int>& dims) {
  NormResult r;
  r.value = 0.0;
  r.exact = true;
  r.converged = true;
  for (int n : dims) r.witness.emplace_back(static_cast<std::size_t>(n), 0.0);
  return r;
}

NormResult euclidean_case(const CoefficientTensor& t) {
  NormResult r;
  r.value = t.frobenius_norm();
  r.exact = true;
  r.converged = true;
  std::vector<double> w(t.coeffs());
  normalize(w);
  r.witness.push_back(std::move(w));
  return r;
}

// Largest singular value of the order-2 tensor via power iteration on B^T B,
// with a deterministic start (the largest row, normalized) plus three random
// restarts.  Residual-based stopping: |S v - mu v| <= tol * max(1, mu).
NormResult spectral_case(const CoefficientTensor& t, const AlsConfig& cfg) {
  const std::size_t m = static_cast<std::size_t>(t.dims()[0]);
  const std::size_t n = static_cast<std::size_t>(t.dims()[1]);
  const double* b = t.coeffs().data();

  auto apply_b = [&](std::span<const double> v, std::vector<double>& out) {
    out.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) out[i] = dot({b + i * n, n}, v);
  };
  auto apply_bt = [&](std::span<const double> w, std::vector<double>& out) {
    out.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double wi = w[i];
      if (wi == 0.0) continue;
      const double* row = b + i * n;
      for (std::size_t j = 0; j < n; ++j) out[j] += wi * row[j];
    }
  };

  CounterRng rng(cfg.seed);
  NormResult best;
  best.value = -1.0;

  const int kRandomRestarts = 3;
  for (int restart = 0; restart <= kRandomRestarts; ++restart) {
    std::vector<double> v(n);
    if (restart == 0) {
      std::size_t top = 0;
      double top_norm = -1.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double rn = norm2({b + i * n, n});
        if (rn > top_norm) {
          top_norm = rn;
          top = i;
        }
      }
      v.assign(b + top * n, b + (top + 1) * n);
      if (norm2(v) == 0.0) v.assign(n, 1.0);
    } else {
      v = rng.normal_vector(slot_stream(static_cast<std::uint64_t>(restart), 1), n);
    }
    normalize(v);

    std::vector<double> w, z;
    double mu = 0.0;
    bool converged = false;
    for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
      apply_b(v, w);
      mu = dot(w, w);  // v is unit, so mu = v^T (B^T B) v
      apply_bt(w, z);
      double resid = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double rj = z[j] - mu * v[j];
        resid += rj * rj;
      }
      if (std::sqrt(resid) <= cfg.tol * std::max(1.0, mu)) {
        converged = true;
        break;
      }
      if (norm2(z) == 0.0) break;  // v orthogonal to the row space
      v = z;
      normalize(v);
    }

    const double sigma = std::sqrt(std::max(mu, 0.0));
    if (sigma > best.value) {  // strict: ties keep the earliest start
      apply_b(v, w);
      normalize(w);
      best.value = sigma;
      best.witness = {w, v};
      best.converged = converged;
    }
  }
  best.exact = true;
  best.restarts_used = kRandomRestarts + 1;
  return best;
}

// Block alternating maximization for three or more blocks.  Each inner step
// fixes all blocks but one and maximizes the linear form over the free unit
// ball, which the normalized contraction attains.
NormResult als_case(const CoefficientTensor& t, const AlsConfig& cfg) {
  const int s = t.order();
  const auto& dims = t.dims();

  // Contraction of t against every block vector except `skip`.
  auto contract_others = [&](const std::vector<std::vector<double>>& vs, int skip) {
    std::vector<double> cur(t.coeffs());
    // Peel trailing blocks after `skip`, then leading blocks before it.
    for (int r = s - 1; r > skip; --r) {
      const std::size_t nr = static_cast<std::size_t>(dims[r]);
      const std::size_t rows = cur.size() / nr;
      std::vector<double> next(rows, 0.0);
      for (std::size_t row = 0; row < rows; ++row) {
        next[row] = dot({cur.data() + row * nr, nr}, vs[r]);
      }
      cur.swap(next);
    }
    for (int r = 0; r < skip; ++r) {
      const std::size_t nr = static_cast<std::size_t>(dims[r]);
      const std::size_t rest = cur.size() / nr;
      std::vector<double> next(rest, 0.0);
      for (std::size_t i = 0; i < nr; ++i) {
        const double w = vs[r][i];
        if (w == 0.0) continue;
        const double* src = cur.data() + i * rest;
        for (std::size_t q = 0; q < rest; ++q) next[q] += w * src[q];
      }
      cur.swap(next);
    }
    return cur;  // length dims[skip]
  };

  CounterRng rng(cfg.seed);
  NormResult best;
  best.value = -1.0;
  best.converged = false;

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    std::vector<std::vector<double>> vs(s);
    for (int r = 0; r < s; ++r) {
      vs[r] = rng.normal_vector(slot_stream(static_cast<std::uint64_t>(restart), r + 1),
                                static_cast<std::size_t>(dims[r]));
      normalize(vs[r]);
      if (norm2(vs[r]) == 0.0) vs[r][0] = 1.0;
    }

    double value = 0.0;
    bool converged = false;
    for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
      double sweep_value = 0.0;
      for (int r = 0; r < s; ++r) {
        std::vector<double> w = contract_others(vs, r);
        const double wn = norm2(w);
        if (wn > 0.0) {
          for (std::size_t i = 0; i < w.size(); ++i) vs[r][i] = w[i] / wn;
        }
        sweep_value = wn;
      }
      if (sweep > 0 && std::fabs(sweep_value - value) <= cfg.tol * std::max(1.0, sweep_value)) {
        value = sweep_value;
        converged = true;
        break;
      }
      value = sweep_value;
    }

    if (value > best.value) {  // strict: ties keep the lowest restart index
      best.value = value;
      best.witness = vs;
      best.converged = converged;
    }
  }

  best.value = std::max(best.value, 0.0);
  best.exact = false;
  best.restarts_used = cfg.restarts;
  return best;
}

}  // namespace

NormResult injective_norm(const GroupedTensor& g, const AlsConfig& cfg) {
  const CoefficientTensor& t = g.flattened;
  if (t.order() < 1) throw ValidationError("injective_norm: order must be at least 1");
  if (cfg.restarts < 1 || cfg.tol <= 0.0) throw ValidationError("injective_norm: bad config");
  if (t.is_zero()) return zero_result(t.dims());
  if (t.order() == 1) return euclidean_case(t);
  if (t.order() == 2) return spectral_case(t, cfg);
  return als_case(t, cfg);
}

NormResult partition_norm(const CoefficientTensor& b, const SetPartition& p, const AlsConfig& cfg) {
  return injective_norm(group_blocks(b, p), cfg);
}

AlphaResult alpha_s(const CoefficientTensor& a, int s, const AlsConfig& cfg) {
  const int d = a.order();
  if (s < 1 || s > d) throw ValidationError("alpha_s: s out of range");
  std::vector<int> ground(d);
  for (int j = 0; j < d; ++j) ground[j] = j + 1;

  auto candidates = partitions_of_size(ground, s);
  AlphaResult best{NormResult{}, candidates.front()};
  best.norm.value = -1.0;
  for (const auto& p : candidates) {
    NormResult r = partition_norm(a, p, cfg);
    if (r.value > best.norm.value) {
      best.norm = std::move(r);
      best.argmax = p;
    }
  }
  return best;
}

NormResult alpha_tilde_jk(const CoefficientTensor& a, int j, int k, std::span<const double> u_j,
                          const AlsConfig& cfg) {
  const int d = a.order();
  if (d < 3) throw ValidationError("alpha_tilde_jk: requires d >= 3");
  const CoefficientTensor b = contract_slot(a, j, u_j);
  return partition_norm(b, partition_jk(d, j, k), cfg);
}

NormResult alpha_tilde_Ik(const CoefficientTensor& a, const RealVectorTuple& u,
                          const std::vector<int>& i_set, int k, int m_weight,
                          const AlsConfig& cfg) {
  const int d = a.order();
  std::vector<int> sorted = i_set;
  std::sort(sorted.begin(), sorted.end());
  RealVectorTuple picked;
  if (u.count() == sorted.size()) {
    picked = u;
  } else if (static_cast<int>(u.count()) == d - 1) {
    for (int slot : sorted) picked.parts.push_back(u.parts[slot - 1]);
  } else {
    throw ValidationError("alpha_tilde_Ik: tuple must have d-1 parts or one per slot of I");
  }
  const CoefficientTensor b = contract_set(a, sorted, picked, m_weight);
  return partition_norm(b, partition_Ik(d, sorted, k), cfg);
}

NormResult alpha_us_I(const CoefficientTensor& a, const RealVectorTuple& u,
                      const std::vector<int>& i_set, int s, int m_weight, const AlsConfig& cfg) {
  const int d = a.order();
  std::vector<int> sorted = i_set;
  std::sort(sorted.begin(), sorted.end());
  RealVectorTuple picked;
  if (u.count() == sorted.size()) {
    picked = u;
  } else if (static_cast<int>(u.count()) == d - 1) {
    for (int slot : sorted) picked.parts.push_back(u.parts[slot - 1]);
  } else {
    throw ValidationError("alpha_us_I: tuple must have d-1 parts or one per slot of I");
  }
  const int surviving = d - static_cast<int>(sorted.size());
  if (s < 1 || s > surviving) throw ValidationError("alpha_us_I: s out of range");

  const CoefficientTensor b = contract_set(a, sorted, picked, m_weight);
  std::vector<int> ground;
  for (int j = 1; j <= d; ++j) {
    if (std::find(sorted.begin(), sorted.end(), j) == sorted.end()) ground.push_back(j);
  }
  NormResult best;
  best.value = -1.0;
  for (const auto& p : partitions_of_size(ground, s)) {
    NormResult r = partition_norm(b, p, cfg);
    if (r.value > best.value) best = std::move(r);
  }
  return best;
}

double pseudonorm_alpha(const CoefficientTensor& a, std::span<const double> v) {
  const int d = a.order();
  if (d < 2) throw ValidationError("pseudonorm_alpha: requires order >= 2");
  const std::size_t nd = static_cast<std::size_t>(a.dims()[d - 1]);
  const std::size_t rows = a.size() / nd;
  if (v.size() != rows) throw ValidationError("pseudonorm_alpha: shape mismatch");
  std::vector<double> w(nd, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    const double vr = v[r];
    if (vr == 0.0) continue;
    const double* row = a.coeffs().data() + r * nd;
    for (std::size_t c = 0; c < nd; ++c) w[c] += vr * row[c];
  }
  return norm2(w);
}

double rho_alpha(const CoefficientTensor& a, const RealVectorTuple& u, const RealVectorTuple& v) {
  std::vector<double> bu = contract_front_slots(a, u);
  std::vector<double> bv = contract_front_slots(a, v);
  double acc = 0.0;
  for (std::size_t i = 0; i < bu.size(); ++i) {
    const double diff = bu[i] - bv[i];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

double rho_alpha_Iu(const CoefficientTensor& a, const RealVectorTuple& u,
                    const std::vector<int>& i_set, int m_weight, const RealVectorTuple& v,
                    const RealVectorTuple& vbar) {
  const int d = a.order();
  if (static_cast<int>(v.count()) != d - 1 || static_cast<int>(vbar.count()) != d - 1) {
    throw ValidationError("rho_alpha_Iu: v and vbar must have d-1 parts");
  }
  std::vector<int> sorted = i_set;
  std::sort(sorted.begin(), sorted.end());
  RealVectorTuple picked;
  if (u.count() == sorted.size()) {
    picked = u;
  } else if (static_cast<int>(u.count()) == d - 1) {
    for (int slot : sorted) picked.parts.push_back(u.parts[slot - 1]);
  } else {
    throw ValidationError("rho_alpha_Iu: tuple must have d-1 parts or one per slot of I");
  }
  const CoefficientTensor b = contract_set(a, sorted, picked, m_weight);

  RealVectorTuple vs, vbars;  // coordinates inside I are dropped
  for (int j = 1; j <= d - 1; ++j) {
    if (std::find(sorted.begin(), sorted.end(), j) != sorted.end()) continue;
    vs.parts.push_back(v.parts[j - 1]);
    vbars.parts.push_back(vbar.parts[j - 1]);
  }
  return rho_alpha(b, vs, vbars);
}

}  // namespace chaos
