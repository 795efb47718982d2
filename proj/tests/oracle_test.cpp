#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "chaos/errors.hpp"
#include "chaos/oracle.hpp"
#include "chaos/rng.hpp"
#include "test_helpers.hpp"

using namespace chaos;
using chaos::testing::identity2;
using chaos::testing::random_tensor;

namespace {

AlsConfig test_cfg() {
  AlsConfig cfg;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("pairwise_sum matches plain summation") {
  std::vector<double> xs;
  for (int i = 0; i < 1000; ++i) xs.push_back(std::sin(i) * 1e-3);
  double plain = 0.0;
  for (double x : xs) plain += x;
  CHECK(pairwise_sum(xs) == doctest::Approx(plain).epsilon(1e-12));
}

TEST_CASE("wilson interval shapes") {
  const WilsonInterval mid = wilson_interval(50, 100);
  CHECK(mid.p_hat == 0.5);
  CHECK(mid.lo < 0.5);
  CHECK(mid.hi > 0.5);
  const WilsonInterval none = wilson_interval(0, 1000);
  CHECK(none.p_hat == 0.0);
  CHECK(none.lo == 0.0);
  CHECK(none.hi > 0.0);  // the upper bound stays informative at zero hits
}

TEST_CASE("wick: second moment is the squared Frobenius norm") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (auto dims : std::vector<std::vector<int>>{{3, 2}, {2, 2, 2}, {2, 2, 2, 2}}) {
      const CoefficientTensor a = random_tensor(dims, seed);
      double sum_sq = 0.0;
      for (double v : a.coeffs()) sum_sq += v * v;
      CHECK(wick_moment(a, 1) == doctest::Approx(sum_sq).epsilon(1e-12));
    }
  }
}

TEST_CASE("wick: product of two standard normals to the fourth power") {
  const CoefficientTensor rank_one = make_tensor({2, 2}, std::vector<SparseEntry>{{{1, 1}, 1.0}});
  CHECK(wick_moment(rank_one, 2) == doctest::Approx(9.0).epsilon(1e-12));  // 3!! * 3!!
}

TEST_CASE("wick agrees with the quadratic-form oracle on the identity") {
  const double wick = wick_moment(identity2(), 2);
  const double quad = quad_form_moment_d2(identity2(), 2);
  CHECK(wick == doctest::Approx(24.0).epsilon(1e-12));
  CHECK(quad == doctest::Approx(24.0).epsilon(1e-12));
}

TEST_CASE("wick budget guard names the required budget") {
  try {
    wick_moment(identity2(), 4, 100.0);
    FAIL("expected a capacity error");
  } catch (const CapacityError& e) {
    CHECK(std::string(e.what()).find("budget") != std::string::npos);
  }
}

TEST_CASE("Jensen's inequality across moment orders") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const CoefficientTensor a = random_tensor({2, 2}, seed);
    const double m1 = wick_moment(a, 1);
    CHECK(wick_moment(a, 2) >= m1 * m1 - 1e-9);
    CHECK(wick_moment(a, 3) >= m1 * m1 * m1 - 1e-9);
  }
}

TEST_CASE("quadratic-form oracle: single eigenvalue and identity cases") {
  const CoefficientTensor rank_one = make_tensor({2, 2}, std::vector<SparseEntry>{{{1, 1}, 1.0}});
  CHECK(quad_form_moment_d2(rank_one, 2) == doctest::Approx(9.0).epsilon(1e-12));
  for (int n : {2, 4}) {
    std::vector<SparseEntry> entries;
    for (int i = 1; i <= n; ++i) entries.push_back({{i, i}, 1.0});
    CHECK(quad_form_moment_d2(make_tensor({n, n}, entries), 1) ==
          doctest::Approx(n).epsilon(1e-12));
  }
  CHECK_THROWS_AS(quad_form_moment_d2(random_tensor({2, 2, 2}, 1), 1), ValidationError);
}

TEST_CASE("both exact oracles agree on random matrices") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const CoefficientTensor a = random_tensor({3, 3}, 200 + seed);
    for (int m = 1; m <= 4; ++m) {
      const double w = wick_moment(a, m);
      const double q = quad_form_moment_d2(a, m);
      CHECK(w == doctest::Approx(q).epsilon(1e-9));
    }
  }
}

TEST_CASE("sample_y: zero tensor, rank-one second moment, identity fourth moment") {
  const CoefficientTensor zero = make_tensor({2, 2}, std::vector<double>(4, 0.0));
  for (double v : sample_y(zero, 100, 1)) CHECK(v == 0.0);

  const CoefficientTensor rank_one = make_tensor({2, 2}, std::vector<SparseEntry>{{{1, 1}, 1.0}});
  const std::vector<double> draws = sample_y(rank_one, 100000, 11);
  std::vector<double> sq(draws.size());
  for (std::size_t i = 0; i < draws.size(); ++i) sq[i] = draws[i] * draws[i];
  const MeanEstimate est = mean_with_se(sq);
  CHECK(std::fabs(est.mean - 1.0) <= 3.0 * est.std_error);

  const std::vector<double> idraws = sample_y(identity2(), 100000, 13);
  std::vector<double> p4(idraws.size());
  for (std::size_t i = 0; i < idraws.size(); ++i) p4[i] = std::pow(idraws[i], 4);
  const MeanEstimate est4 = mean_with_se(p4);
  CHECK(std::fabs(est4.mean - wick_moment(identity2(), 2)) <= 3.0 * est4.std_error);
}

TEST_CASE("sample_y_d: zeros, variance identity, Gaussian kurtosis") {
  const CoefficientTensor a = random_tensor({2, 2, 2}, 17);
  const RealVectorTuple zero({{0, 0}, {0, 0}});
  for (double v : sample_y_d(a, zero, 50, 3)) CHECK(v == 0.0);

  const RealVectorTuple u({{0.6, -0.3}, {0.2, 0.9}});
  const std::vector<double> draws = sample_y_d(a, u, 100000, 19);
  std::vector<double> sq(draws.size());
  for (std::size_t i = 0; i < draws.size(); ++i) sq[i] = draws[i] * draws[i];
  const MeanEstimate est = mean_with_se(sq);
  std::vector<double> outer;
  for (double x : u.parts[0]) {
    for (double y : u.parts[1]) outer.push_back(x * y);
  }
  const double variance = std::pow(pseudonorm_alpha(a, outer), 2);
  CHECK(std::fabs(est.mean - variance) <= 3.0 * est.std_error);

  const std::vector<double> g = sample_y_d(identity2(), RealVectorTuple({{1.0, 0.0}}), 100000, 23);
  const MeanEstimate gm = mean_with_se(g);
  double m2 = 0.0, m4 = 0.0;
  for (double x : g) {
    m2 += x * x;
    m4 += x * x * x * x;
  }
  m2 /= g.size();
  m4 /= g.size();
  CHECK(m4 / (m2 * m2) == doctest::Approx(3.0).epsilon(0.05));
  CHECK(std::fabs(gm.mean) <= 3.0 * gm.std_error);
}

TEST_CASE("sample_z: d=2 closed form is reproduced bit for bit") {
  const CoefficientTensor a = random_tensor({3, 2}, 29);
  const std::size_t n = 200;
  const std::uint64_t seed = 31;
  const std::vector<double> zs = sample_z(a, n, seed, test_cfg());
  CounterRng rng(seed);
  for (std::size_t m = 0; m < n; ++m) {
    const std::vector<double> g = rng.normal_vector(slot_stream(m, 2), 2);
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
      double acc = 0.0;
      for (int j = 0; j < 2; ++j) acc += a.coeffs()[i * 2 + j] * g[j];
      sum += acc * acc;
    }
    CHECK(zs[m] == std::sqrt(sum));
  }
}

TEST_CASE("sample_z: zero tensor and the rank-one order-3 second moment") {
  const CoefficientTensor zero = make_tensor({2, 2}, std::vector<double>(4, 0.0));
  for (double v : sample_z(zero, 50, 1, test_cfg())) CHECK(v == 0.0);

  // rank-one u (x) v (x) w: Z = |u||v| |<w, G>|, so E Z^2 = (|u||v||w|)^2
  const std::vector<double> u = {1.0, -0.5};
  const std::vector<double> v = {0.3, 0.8};
  const std::vector<double> w = {0.9, 0.2};
  std::vector<double> coeffs;
  for (double x : u) {
    for (double y : v) {
      for (double z : w) coeffs.push_back(x * y * z);
    }
  }
  const CoefficientTensor rank_one = make_tensor({2, 2, 2}, std::move(coeffs));
  const std::vector<double> zs = sample_z(rank_one, 20000, 37, test_cfg());
  std::vector<double> sq(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) sq[i] = zs[i] * zs[i];
  const MeanEstimate est = mean_with_se(sq);
  const double expect = std::pow(chaos::testing::norm2(u) * chaos::testing::norm2(v) *
                                     chaos::testing::norm2(w),
                                 2);
  CHECK(std::fabs(est.mean - expect) <= 3.0 * est.std_error);
}

TEST_CASE("empirical_statistic: moment, deep tail, sup moment") {
  const ChaosStudy moment =
      empirical_statistic(identity2(), Statistic::kMoment, 1, 100000, 41, test_cfg());
  CHECK(std::fabs(moment.estimate - 2.0) <= 3.0 * moment.std_error);
  CHECK(moment.ci_lo < moment.estimate);
  CHECK(moment.ci_hi > moment.estimate);

  const ChaosStudy tail =
      empirical_statistic(identity2(), Statistic::kTail, 1000.0, 2000, 43, test_cfg());
  CHECK(tail.estimate == 0.0);
  CHECK(tail.ci_hi > 0.0);

  const ChaosStudy sup =
      empirical_statistic(identity2(), Statistic::kSupMoment, 1, 50000, 47, test_cfg());
  CHECK(std::fabs(sup.estimate - 2.0) <= 3.0 * sup.std_error);  // E |G|^2 = 2
}

TEST_CASE("standard errors halve as the sample count doubles") {
  const CoefficientTensor a = random_tensor({2, 2}, 53);
  std::vector<double> log_n, log_se;
  for (std::size_t count : {1000u, 2000u, 4000u, 8000u, 16000u, 32000u, 64000u, 128000u}) {
    const ChaosStudy s = empirical_statistic(a, Statistic::kMoment, 1, count, 59, test_cfg());
    log_n.push_back(std::log(static_cast<double>(count)));
    log_se.push_back(std::log(s.std_error));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    mx += log_n[i];
    my += log_se[i];
  }
  mx /= log_n.size();
  my /= log_se.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    sxy += (log_n[i] - mx) * (log_se[i] - my);
    sxx += (log_n[i] - mx) * (log_n[i] - mx);
  }
  const double slope = sxy / sxx;
  CHECK(slope == doctest::Approx(-0.5).epsilon(0.2));
}

TEST_CASE("a spiked sample trips the heavy-tail kurtosis guard") {
  std::vector<double> xs(1000, 0.0);
  xs[0] = 1000.0;
  const MeanEstimate est = mean_with_se(xs);
  CHECK(est.kurtosis > 100.0);

  std::vector<double> flat(1000, 1.0);
  for (std::size_t i = 0; i < flat.size(); i += 2) flat[i] = -1.0;
  CHECK(mean_with_se(flat).kurtosis < 100.0);
}

TEST_CASE("studies are bit-reproducible under the same seed") {
  const CoefficientTensor a = random_tensor({2, 2, 2}, 61);
  const ChaosStudy s1 = empirical_statistic(a, Statistic::kMoment, 2, 5000, 67, test_cfg());
  const ChaosStudy s2 = empirical_statistic(a, Statistic::kMoment, 2, 5000, 67, test_cfg());
  CHECK(s1.estimate == s2.estimate);
  CHECK(s1.std_error == s2.std_error);
  CHECK(s1.ci_lo == s2.ci_lo);
  CHECK(s1.ci_hi == s2.ci_hi);
}

TEST_CASE("jacobi solves a known symmetric eigenproblem") {
  // [[2,1],[1,2]] has eigenvalues 1 and 3
  const EigenDecomposition e = jacobi_eigen({2, 1, 1, 2}, 2);
  CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.values[1] == doctest::Approx(3.0).epsilon(1e-12));
  // eigenvector for 3 is (1,1)/sqrt(2) up to sign
  CHECK(std::fabs(e.vectors[0 * 2 + 1]) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
  CHECK(std::fabs(e.vectors[1 * 2 + 1]) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
}

TEST_CASE("constrained supremum draws respect both constraints") {
  const CoefficientTensor a = random_tensor({3, 3}, 71);
  // Loose constraint: scale the tensor down so the seminorm bound is inactive
  // and the draws equal the plain d=2 supremum |A g|.
  const CoefficientTensor small = a.scaled(1e-3);
  const std::vector<double> loose = sample_z_constrained_d2(small, 0, 1, 100, 73);
  const std::vector<double> plain = sample_z(small, 100, 73, test_cfg());
  for (std::size_t i = 0; i < loose.size(); ++i) {
    CHECK(loose[i] == doctest::Approx(plain[i]).epsilon(1e-9));
  }

  // Tightening the level can only lower the supremum.
  const std::vector<double> l0 = sample_z_constrained_d2(a, 0, 1, 200, 79);
  const std::vector<double> l2 = sample_z_constrained_d2(a, 2, 1, 200, 79);
  const std::vector<double> unconstrained = sample_z(a, 200, 79, test_cfg());
  for (std::size_t i = 0; i < l0.size(); ++i) {
    CHECK(l2[i] <= l0[i] + 1e-9);
    CHECK(l0[i] <= unconstrained[i] + 1e-9);
    CHECK(l2[i] >= 0.0);
  }
}
