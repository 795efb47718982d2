#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "chaos/errors.hpp"
#include "chaos/tensor.hpp"
#include "test_helpers.hpp"

using namespace chaos;
using chaos::testing::identity2;
using chaos::testing::random_tensor;

TEST_CASE("construction: identity, zero, duplicate summation") {
  const CoefficientTensor id = identity2();
  CHECK(id.coeffs() == std::vector<double>{1, 0, 0, 1});

  const CoefficientTensor zero = make_tensor({2}, std::vector<double>{0, 0});
  CHECK(zero.order() == 1);
  CHECK(zero.is_zero());

  const CoefficientTensor dup =
      make_tensor({2, 2, 2}, std::vector<SparseEntry>{{{1, 1, 1}, 1.0}, {{1, 1, 1}, 2.0}});
  CHECK(dup.coeffs()[0] == 3.0);
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(make_tensor({}, std::vector<double>{}), ValidationError);
  CHECK_THROWS_AS(make_tensor({2}, std::vector<double>{1.0}), ValidationError);
  CHECK_THROWS_AS(make_tensor({2}, std::vector<double>{1.0, std::nan("")}), ValidationError);
  CHECK_THROWS_AS(
      make_tensor({2}, std::vector<double>{1.0, std::numeric_limits<double>::infinity()}),
      ValidationError);
  CHECK_THROWS_AS(make_tensor({2, 2}, std::vector<SparseEntry>{{{3, 1}, 1.0}}), ValidationError);
  CHECK_THROWS_AS(make_tensor({2, 2}, std::vector<SparseEntry>{{{1}, 1.0}}), ValidationError);
  CHECK_THROWS_AS(make_tensor({4000, 4000}, std::vector<SparseEntry>{}, 1000000), CapacityError);
}

TEST_CASE("apply_multilinear on the identity picks diagonal entries") {
  const CoefficientTensor id = identity2();
  CHECK(apply_multilinear(id, RealVectorTuple({{1, 0}, {1, 0}})) == 1.0);
  CHECK(apply_multilinear(id, RealVectorTuple({{1, 0}, {0, 1}})) == 0.0);
  CHECK_THROWS_AS(apply_multilinear(id, RealVectorTuple({{1, 0, 0}, {0, 1}})), ValidationError);
}

TEST_CASE("apply_multilinear agrees with the naive nested loop") {
  const CoefficientTensor a = random_tensor({2, 2, 2}, 11);
  const std::vector<std::vector<double>> u = {{0.3, -1.2}, {0.7, 0.4}, {-0.5, 1.1}};
  double naive = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        const int idx[] = {i, j, k};
        naive += a.at(idx) * u[0][i] * u[1][j] * u[2][k];
      }
    }
  }
  CHECK(apply_multilinear(a, RealVectorTuple(u)) == doctest::Approx(naive).epsilon(1e-12));
}

TEST_CASE("apply_functional: Frobenius direction, zero, trace") {
  const CoefficientTensor a = random_tensor({3, 2}, 5);
  std::vector<double> v = a.coeffs();
  const double fro = a.frobenius_norm();
  for (double& x : v) x /= fro;
  CHECK(apply_functional(a, v) == doctest::Approx(fro).epsilon(1e-12));

  CHECK(apply_functional(a, std::vector<double>(6, 0.0)) == 0.0);
  CHECK(apply_functional(identity2(), std::vector<double>{1, 0, 0, 1}) == 2.0);
  CHECK_THROWS_AS(apply_functional(a, std::vector<double>(5, 0.0)), ValidationError);
}

TEST_CASE("contract_slot selects columns and respects zero") {
  const CoefficientTensor id = identity2();
  const CoefficientTensor col = contract_slot(id, 2, std::vector<double>{1, 0});
  CHECK(col.order() == 1);
  CHECK(col.coeffs() == std::vector<double>{1, 0});

  const CoefficientTensor z = contract_slot(id, 1, std::vector<double>{0, 0});
  CHECK(z.is_zero());
  CHECK_THROWS_AS(contract_slot(id, 3, std::vector<double>{1, 0}), ValidationError);
  CHECK_THROWS_AS(contract_slot(id, 1, std::vector<double>{1, 0, 0}), ValidationError);
}

TEST_CASE("contract_slot equals the slab sum entrywise") {
  const CoefficientTensor a = random_tensor({2, 2, 2}, 17);
  const CoefficientTensor sum = contract_slot(a, 1, std::vector<double>{1, 1});
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      const int top[] = {0, j, k};
      const int bot[] = {1, j, k};
      const int out[] = {j, k};
      CHECK(sum.at(out) == doctest::Approx(a.at(top) + a.at(bot)).epsilon(1e-12));
    }
  }
}

TEST_CASE("contract_slot is linear in the vector") {
  const CoefficientTensor a = random_tensor({3, 2, 2}, 23);
  const std::vector<double> u = {0.2, -0.7, 1.1};
  const std::vector<double> v = {1.4, 0.3, -0.9};
  const double s = 0.6, t = -1.3;
  std::vector<double> mix(3);
  for (int i = 0; i < 3; ++i) mix[i] = s * u[i] + t * v[i];
  const CoefficientTensor left = contract_slot(a, 1, mix);
  const CoefficientTensor ru = contract_slot(a, 1, u);
  const CoefficientTensor rv = contract_slot(a, 1, v);
  for (std::size_t i = 0; i < left.size(); ++i) {
    CHECK(left.coeffs()[i] ==
          doctest::Approx(s * ru.coeffs()[i] + t * rv.coeffs()[i]).epsilon(1e-12));
  }
}

TEST_CASE("multilinear form equals the functional at the outer product") {
  const CoefficientTensor a = random_tensor({2, 3, 2}, 29);
  const RealVectorTuple u({{0.5, -0.2}, {1.0, 0.1, -0.6}, {0.3, 0.9}});
  std::vector<double> outer;
  outer.reserve(12);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 2; ++k) outer.push_back(u.parts[0][i] * u.parts[1][j] * u.parts[2][k]);
    }
  }
  CHECK(apply_multilinear(a, u) == doctest::Approx(apply_functional(a, outer)).epsilon(1e-12));
}

TEST_CASE("contract_set scales by M^{|I|/2} and composes slot contractions") {
  const CoefficientTensor a = random_tensor({2, 2, 2}, 31);
  const RealVectorTuple u1({{0.4, -1.0}});
  const CoefficientTensor plain = contract_set(a, {1}, u1, 1);
  const CoefficientTensor slot = contract_slot(a, 1, u1.parts[0]);
  for (std::size_t i = 0; i < plain.size(); ++i) {
    CHECK(plain.coeffs()[i] == doctest::Approx(slot.coeffs()[i]).epsilon(1e-12));
  }

  const CoefficientTensor scaled = contract_set(a, {1}, u1, 4);  // sqrt(4) = 2
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    CHECK(scaled.coeffs()[i] == doctest::Approx(2.0 * slot.coeffs()[i]).epsilon(1e-12));
  }
}

TEST_CASE("contract_set over two slots matches the naive loop") {
  const CoefficientTensor a = random_tensor({2, 2, 2, 2}, 37);
  const RealVectorTuple u({chaos::testing::random_unit(2, 1), chaos::testing::random_unit(2, 2)});
  const CoefficientTensor out = contract_set(a, {1, 2}, u, 1);
  REQUIRE(out.order() == 2);
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      double naive = 0.0;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const int idx[] = {i, j, k, l};
          naive += a.at(idx) * u.parts[0][i] * u.parts[1][j];
        }
      }
      const int oidx[] = {k, l};
      CHECK(out.at(oidx) == doctest::Approx(naive).epsilon(1e-12));
    }
  }
}

TEST_CASE("contract_set order independence and range validation") {
  const CoefficientTensor a = random_tensor({2, 3, 2, 2}, 41);
  const std::vector<double> v1 = {0.2, -0.4};
  const std::vector<double> v3 = {1.1, 0.6};
  const CoefficientTensor ab = contract_set(a, {1, 3}, RealVectorTuple({v1, v3}), 1);
  const CoefficientTensor ba = contract_slot(contract_slot(a, 3, v3), 1, v1);
  for (std::size_t i = 0; i < ab.size(); ++i) {
    CHECK(ab.coeffs()[i] == doctest::Approx(ba.coeffs()[i]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(contract_set(a, {}, RealVectorTuple(), 1), ValidationError);
  CHECK_THROWS_AS(contract_set(a, {1, 2, 3}, RealVectorTuple({v1, v1, v1}), 1), ValidationError);
}

TEST_CASE("group_blocks: singletons, single block, and the 2x3x2 example") {
  const CoefficientTensor a = random_tensor({2, 3, 2}, 43);

  const GroupedTensor singles = group_blocks(a, SetPartition({{1}, {2}, {3}}));
  CHECK(singles.flattened.dims() == a.dims());
  CHECK(singles.flattened.coeffs() == a.coeffs());

  const GroupedTensor whole = group_blocks(a, SetPartition({{1, 2, 3}}));
  CHECK(whole.flattened.order() == 1);
  CHECK(whole.flattened.size() == 12);
  CHECK(whole.flattened.frobenius_norm() == doctest::Approx(a.frobenius_norm()).epsilon(1e-12));

  const GroupedTensor mixed = group_blocks(a, SetPartition({{1, 3}, {2}}));
  REQUIRE(mixed.flattened.dims() == std::vector<int>{4, 3});
  // entry (i,k),(j): flattened row index is i*2 + k
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 2; ++k) {
        const int src[] = {i, j, k};
        const int dst[] = {i * 2 + k, j};
        CHECK(mixed.flattened.at(dst) == a.at(src));
      }
    }
  }
  CHECK_THROWS_AS(group_blocks(a, SetPartition({{1, 2}})), ValidationError);
}

TEST_CASE("group_blocks preserves the multiset of entries") {
  const CoefficientTensor a = random_tensor({2, 2, 3}, 47);
  for (const auto& p : enumerate_partitions({1, 2, 3})) {
    std::vector<double> base = a.coeffs();
    std::vector<double> grouped = group_blocks(a, p).flattened.coeffs();
    std::sort(base.begin(), base.end());
    std::sort(grouped.begin(), grouped.end());
    CHECK(base == grouped);
  }
}
