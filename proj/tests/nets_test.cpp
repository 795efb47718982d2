#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "chaos/bounds.hpp"
#include "chaos/errors.hpp"
#include "chaos/nets.hpp"
#include "chaos/rng.hpp"
#include "test_helpers.hpp"

using namespace chaos;
using chaos::testing::random_tensor;
using chaos::testing::random_unit;

namespace {

AlsConfig test_cfg() {
  AlsConfig cfg;
  cfg.seed = 23;
  return cfg;
}

TupleMetric euclidean_metric() {
  return [](const RealVectorTuple& a, const RealVectorTuple& b) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.parts.size(); ++j) {
      for (std::size_t i = 0; i < a.parts[j].size(); ++i) {
        const double d = a.parts[j][i] - b.parts[j][i];
        acc += d * d;
      }
    }
    return std::sqrt(acc);
  };
}

// Half-ball tuples over a tensor normalized at M are always class members at
// level 0.
std::vector<RealVectorTuple> half_ball_tuples(const CoefficientTensor& a, int count,
                                              std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<RealVectorTuple> out;
  for (int t = 0; t < count; ++t) {
    RealVectorTuple u;
    for (int j = 1; j <= a.order() - 1; ++j) {
      u.parts.push_back(ball_point(rng, slot_stream(static_cast<std::uint64_t>(t), j),
                                   static_cast<std::size_t>(a.dims()[j - 1]), 0.5));
    }
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace

TEST_CASE("w study vanishes with t and scales with degree |I|") {
  CoefficientTensor a = random_tensor({2, 2, 2}, 3);
  a = a.scaled(1.0 / a.frobenius_norm());
  const RealVectorTuple x({random_unit(2, 1), random_unit(2, 2)});

  const ChaosStudy tiny = w_ix_study(a, x, {1}, 1e-6, 2000, 7);
  CHECK(tiny.estimate < 1e-4);

  for (const std::vector<int>& i_set : {std::vector<int>{1}, std::vector<int>{1, 2}}) {
    const ChaosStudy at_t = w_ix_study(a, x, i_set, 0.7, 20000, 11);
    const ChaosStudy at_2t = w_ix_study(a, x, i_set, 1.4, 20000, 11);  // paired seeds
    const double expect = std::pow(2.0, i_set.size()) * at_t.estimate;
    const double se = std::pow(2.0, i_set.size()) * at_t.std_error + at_2t.std_error;
    CHECK(std::fabs(at_2t.estimate - expect) <= 3.0 * se);
  }
}

TEST_CASE("w study stays under the predicted bound on admissible tensors") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    CoefficientTensor a = random_tensor({2, 2, 2}, 100 + seed);
    // normalize per the d-1 condition: both alpha_1 and alpha_2 at most 1
    const double a1 = alpha_s(a, 1, test_cfg()).norm.value;
    const double a2 = alpha_s(a, 2, test_cfg()).norm.value;
    a = a.scaled(1.0 / std::max(a1, a2));
    const RealVectorTuple u({random_unit(2, seed), random_unit(2, 60 + seed)});

    const ChaosStudy w12 = w_ix_study(a, u, {1, 2}, 1.0, 20000, 13 + seed);
    const double predicted = w_ix_predicted_bound(a, u, {1, 2}, 1.0, 1, test_cfg());
    CHECK(predicted == doctest::Approx(1.0));
    CHECK(w12.estimate <= predicted + 3.0 * w12.std_error);

    const ChaosStudy w1 = w_ix_study(a, u, {1}, 0.5, 20000, 17 + seed);
    const double predicted1 = w_ix_predicted_bound(a, u, {1}, 0.5, 1, test_cfg());
    CHECK(w1.estimate <= predicted1 + 3.0 * w1.std_error);
  }
}

TEST_CASE("single-space measure bound: Euclidean pair at the origin") {
  Pseudonorm euclid = [](const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
  };
  const MeasureCheck c =
      measure_lower_bound_single(euclid, euclid, std::vector<double>{0.0, 0.0}, 1.0, 20000, 19);
  CHECK(c.bound == doctest::Approx(0.5 * std::exp(-0.5)).epsilon(1e-12));
  CHECK(c.estimate >= c.bound - 3.0 * c.std_error);
  CHECK(c.pass);
}

TEST_CASE("single-space measure bound: large t approaches one half") {
  Pseudonorm euclid = [](const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
  };
  const std::vector<double> x = random_unit(4, 5);
  const MeasureCheck c = measure_lower_bound_single(euclid, euclid, x, 50.0, 20000, 23);
  CHECK(c.bound == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(c.pass);
}

TEST_CASE("a vanishing pseudonorm is vacuous under paired seeds") {
  Pseudonorm euclid = [](const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
  };
  Pseudonorm zero = [](const std::vector<double>&) { return 0.0; };
  const std::vector<double> x = random_unit(3, 7);
  const MeasureCheck with_zero = measure_lower_bound_single(zero, euclid, x, 0.8, 10000, 29);
  const MeasureCheck doubled = measure_lower_bound_single(euclid, euclid, x, 0.8, 10000, 29);
  CHECK(with_zero.estimate == doubled.estimate);
}

TEST_CASE("product measure bound: d=2 identity, large t, zero tensor") {
  const CoefficientTensor id = chaos::testing::identity2();
  const RealVectorTuple x({random_unit(2, 9)});
  const MeasureCheck c = measure_lower_bound_product(id, x, 1.0, 20000, 31);
  CHECK(c.bound == doctest::Approx(0.5 * std::exp(-0.5)).epsilon(1e-12));
  CHECK(c.pass);

  const MeasureCheck wide = measure_lower_bound_product(id, x, 40.0, 10000, 37);
  CHECK(wide.bound == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(wide.pass);

  const CoefficientTensor zero = make_tensor({2, 2, 2}, std::vector<double>(8, 0.0));
  const RealVectorTuple origin({{0.0, 0.0}, {0.0, 0.0}});
  const MeasureCheck trivial = measure_lower_bound_product(zero, origin, 0.5, 5000, 41);
  CHECK(trivial.estimate == 1.0);
  CHECK(trivial.pass);
}

TEST_CASE("greedy net: pure packing and singleton inputs") {
  std::vector<RealVectorTuple> far;
  far.push_back(RealVectorTuple({{0.0, 0.0}}));
  far.push_back(RealVectorTuple({{10.0, 0.0}}));
  far.push_back(RealVectorTuple({{0.0, 10.0}}));
  const NetResult all = greedy_net(far, euclidean_metric(), 1.0);
  CHECK(all.cardinality == 3);
  CHECK(all.covering_ok);
  CHECK(all.packing_ok);

  const NetResult one = greedy_net({far.front()}, euclidean_metric(), 0.5);
  CHECK(one.cardinality == 1);
  CHECK(one.covering_ok);
}

TEST_CASE("greedy net on 100 points of the plane ball") {
  CounterRng rng(43);
  std::vector<RealVectorTuple> points;
  for (int i = 0; i < 100; ++i) points.push_back(RealVectorTuple({ball_point(rng, i, 2, 1.0)}));
  const NetResult net = greedy_net(points, euclidean_metric(), 0.5);
  CHECK(net.covering_ok);
  CHECK(net.covered_count == 100);
  CHECK(net.packing_ok);
  CHECK(net.cardinality <= 25);  // disjoint radius-0.25 disks inside radius 1.25
  for (std::size_t i = 0; i < points.size(); ++i) {
    CHECK(euclidean_metric()(points[i], net.centers[net.assignment[i]]) <= 0.5);
  }
}

TEST_CASE("class membership: zero tuple, half-ball sets, and a ball violation") {
  CoefficientTensor a = random_tensor({2, 2, 2}, 47);
  a = normalize_dm(a, 1, test_cfg()).scaled;

  const RealVectorTuple zero({{0.0, 0.0}, {0.0, 0.0}});
  UClassParams params{1, 0, 5, 3};
  CHECK(check_u_class(a, params, {zero}, test_cfg()).ok);

  std::vector<RealVectorTuple> doubled = {half_ball_tuples(a, 1, 51).front(),
                                          half_ball_tuples(a, 1, 51).front()};
  CHECK(check_u_class(a, params, doubled, test_cfg()).ok);

  RealVectorTuple outside({{1.5, 0.0}, {0.0, 0.0}});
  const UClassReport bad = check_u_class(a, params, {outside}, test_cfg());
  CHECK_FALSE(bad.ok);
  REQUIRE_FALSE(bad.violations.empty());
  bool saw_ball = false;
  for (const auto& v : bad.violations) saw_ball |= v.clause == "ball";
  CHECK(saw_ball);
}

TEST_CASE("cardinality clause is reported, not thrown") {
  CoefficientTensor a = random_tensor({2, 2, 2}, 53);
  a = normalize_dm(a, 1, test_cfg()).scaled;
  const auto tuples = half_ball_tuples(a, 3, 59);
  UClassParams params{1, 0, 2, 3};
  const UClassReport report = check_u_class(a, params, tuples, test_cfg());
  CHECK_FALSE(report.ok);
  CHECK(report.violations.front().clause == "cardinality");
}

TEST_CASE("partition of the singleton zero set") {
  CoefficientTensor a = random_tensor({2, 2, 2}, 61);
  a = normalize_dm(a, 1, test_cfg()).scaled;
  const RealVectorTuple zero({{0.0, 0.0}, {0.0, 0.0}});
  UClassParams params{1, 0, 5, 3};
  const UPartition p = partition_u_class(a, params, {zero}, test_cfg());
  CHECK(p.cardinality == 1);
  CHECK(p.parts.front().members.size() == 1);
  for (const auto& part : p.parts.front().members.front().parts) {
    for (double v : part) CHECK(v == 0.0);
  }
}

TEST_CASE("a tight cluster in the quarter ball collapses to one part") {
  CoefficientTensor a = random_tensor({2, 2, 2}, 67);
  a = normalize_dm(a, 1, test_cfg()).scaled;
  CounterRng rng(71);
  RealVectorTuple base;
  for (int j = 1; j <= 2; ++j) base.parts.push_back(ball_point(rng, j, 2, 0.25));
  std::vector<RealVectorTuple> cluster;
  for (int t = 0; t < 6; ++t) {
    RealVectorTuple u = base;
    for (auto& part : u.parts) {
      for (std::size_t i = 0; i < part.size(); ++i) {
        part[i] += 1e-6 * rng.uniform(100 + t, i);
      }
    }
    cluster.push_back(std::move(u));
  }
  UClassParams params{1, 0, 10, 3};
  REQUIRE(check_u_class(a, params, cluster, test_cfg()).ok);
  const UPartition p = partition_u_class(a, params, cluster, test_cfg());
  CHECK(p.cardinality == 1);
  CHECK(p.parts.front().members.size() == 6);
}

TEST_CASE("random class members partition cleanly and reconstruct") {
  CoefficientTensor a = random_tensor({2, 2, 2}, 73);
  a = normalize_dm(a, 1, test_cfg()).scaled;
  const auto tuples = half_ball_tuples(a, 12, 79);
  UClassParams params{1, 0, 12, 3};
  REQUIRE(check_u_class(a, params, tuples, test_cfg()).ok);

  const UPartition p = partition_u_class(a, params, tuples, test_cfg());
  std::size_t total = 0;
  std::vector<RealVectorTuple> rebuilt;
  for (const auto& part : p.parts) {
    total += part.members.size();
    UClassParams next = params;
    next.level = params.level + 2;
    CHECK(check_u_class(a, next, part.members, test_cfg()).ok);
    for (const auto& member : part.members) {
      RealVectorTuple original = member;
      for (std::size_t j = 0; j < original.parts.size(); ++j) {
        for (std::size_t i = 0; i < original.parts[j].size(); ++i) {
          original.parts[j][i] += part.shift.parts[j][i];
        }
      }
      rebuilt.push_back(std::move(original));
    }
  }
  CHECK(total == tuples.size());

  auto near = [](const RealVectorTuple& x, const RealVectorTuple& y) {
    double acc = 0.0;
    for (std::size_t j = 0; j < x.parts.size(); ++j) {
      for (std::size_t i = 0; i < x.parts[j].size(); ++i) {
        acc = std::max(acc, std::fabs(x.parts[j][i] - y.parts[j][i]));
      }
    }
    return acc < 1e-12;
  };
  for (const auto& original : tuples) {
    bool found = false;
    for (const auto& r : rebuilt) found |= near(original, r);
    CHECK(found);
  }
}

TEST_CASE("order-4 members partition with exact spectral seminorm backends") {
  CoefficientTensor a = random_tensor({2, 2, 2, 2}, 89);
  a = normalize_dm(a, 1, test_cfg()).scaled;
  const auto tuples = half_ball_tuples(a, 8, 97);
  UClassParams params{1, 0, 8, 4};
  REQUIRE(check_u_class(a, params, tuples, test_cfg()).ok);

  const UPartition p = partition_u_class(a, params, tuples, test_cfg());
  CHECK(p.cardinality >= 1);
  std::size_t total = 0;
  UClassParams next = params;
  next.level = 2;
  for (const auto& part : p.parts) {
    total += part.members.size();
    CHECK(check_u_class(a, next, part.members, test_cfg()).ok);
    // the contracted-rho clause for both subset sizes
    for (const std::vector<int>& i_set :
         {std::vector<int>{1}, std::vector<int>{2}, std::vector<int>{3}, std::vector<int>{1, 2},
          std::vector<int>{1, 3}, std::vector<int>{2, 3}}) {
      const double thr = params.part_rho_threshold(static_cast<int>(i_set.size()));
      for (std::size_t x = 0; x < part.members.size(); ++x) {
        for (std::size_t y = x + 1; y < part.members.size(); ++y) {
          CHECK(rho_alpha_Iu(a, part.shift, i_set, params.m, part.members[x], part.members[y]) <=
                thr + 1e-12);
        }
      }
    }
  }
  CHECK(total == tuples.size());
}

TEST_CASE("zero-radius nets merge only exact duplicates") {
  std::vector<RealVectorTuple> pts;
  pts.push_back(RealVectorTuple({{0.5, 0.5}}));
  pts.push_back(RealVectorTuple({{0.5, 0.5}}));
  pts.push_back(RealVectorTuple({{0.5, 0.6}}));
  const NetResult net = greedy_net(pts, euclidean_metric(), 0.0);
  CHECK(net.cardinality == 2);
  CHECK(net.assignment[1] == net.assignment[0]);
  CHECK(net.covering_ok);
  CHECK(net.packing_ok);
}

TEST_CASE("w study input validation") {
  const CoefficientTensor a = random_tensor({2, 2, 2}, 91);
  const RealVectorTuple x({{0.1, 0.2}, {0.3, 0.4}});
  CHECK_THROWS_AS(w_ix_study(a, x, {}, 1.0, 10, 1), ValidationError);
  CHECK_THROWS_AS(w_ix_study(a, x, {3}, 1.0, 10, 1), ValidationError);
  CHECK_THROWS_AS(w_ix_study(a, x, {1}, 0.0, 10, 1), ValidationError);
  CHECK_THROWS_AS(w_ix_study(a, RealVectorTuple({{0.1, 0.2}}), {1}, 1.0, 10, 1), ValidationError);
}

TEST_CASE("partition rejects non-members up front") {
  CoefficientTensor a = random_tensor({2, 2, 2}, 83);
  a = normalize_dm(a, 1, test_cfg()).scaled;
  RealVectorTuple outside({{1.5, 0.0}, {0.0, 0.0}});
  UClassParams params{1, 0, 5, 3};
  CHECK_THROWS_AS(partition_u_class(a, params, {outside}, test_cfg()), ValidationError);
}
