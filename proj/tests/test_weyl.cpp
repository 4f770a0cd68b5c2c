#include "doctest.h"

#include <map>
#include <set>

#include "ctexp/weyl.hpp"

using namespace ctexp;

TEST_CASE("window arithmetic and generator involutions") {
  AffinePerm id = AffinePerm::identity(3);
  CHECK(id.window == std::vector<int64_t>{1, 2, 3});
  CHECK(id.is_valid());
  CHECK(length_by_inversions(id) == 0);

  // each generator is an involution
  for (uint32_t m = 2; m <= 5; ++m) {
    AffinePerm u = AffinePerm::identity(m);
    // walk to a generic element first
    for (uint32_t i = 0; i < m; ++i) u = apply_generator(u, i % m);
    for (uint32_t i = 0; i < m; ++i) {
      AffinePerm v = apply_generator(apply_generator(u, i), i);
      CHECK(v == u);
      CHECK(apply_generator(u, i).is_valid());
    }
  }

  // single generators have length 1
  for (uint32_t m = 2; m <= 4; ++m)
    for (uint32_t i = 0; i < m; ++i)
      CHECK(length_by_inversions(apply_generator(AffinePerm::identity(m), i)) == 1);

  // m = 2 spot checks: the boundary generator gives window (0, 3)
  AffinePerm s0 = apply_generator(AffinePerm::identity(2), 0);
  CHECK(s0.window == std::vector<int64_t>{0, 3});
  AffinePerm s0s1 = apply_generator(s0, 1);
  CHECK(s0s1.window == std::vector<int64_t>{3, 0});
  CHECK(length_by_inversions(s0s1) == 2);

  CHECK_THROWS_AS(apply_generator(id, 3), std::invalid_argument);

  AffinePerm bad;
  bad.m = 2;
  bad.window = {1, 3};  // same residue mod 2
  CHECK_FALSE(bad.is_valid());
  CHECK_THROWS_AS(length_by_inversions(bad), std::invalid_argument);
  bad.window = {1, 4};  // wrong sum
  CHECK_FALSE(bad.is_valid());
}

TEST_CASE("rank one growth counts freeze") {
  SeriesCoeffs c = coxeter_growth_bfs(2, 5);
  REQUIRE(c.coeffs.size() == 6);
  CHECK(c.provenance == "bfs");
  CHECK(c.coeffs[0] == 1);
  for (size_t d = 1; d <= 5; ++d) CHECK(c.coeffs[d] == 2);
}

TEST_CASE("series formula freeze and difference stabilization") {
  SeriesCoeffs f1 = poincare_formula(1, 6);
  CHECK(f1.provenance == "formula");
  CHECK(f1.coeffs == std::vector<BigInt>{1, 2, 2, 2, 2, 2, 2});

  SeriesCoeffs f2 = poincare_formula(2, 4);
  CHECK(f2.coeffs == std::vector<BigInt>{1, 3, 6, 9, 12});

  SeriesCoeffs f3 = poincare_formula(3, 5);
  CHECK(f3.coeffs == std::vector<BigInt>{1, 4, 10, 20, 34, 52});

  // the n-th finite difference vanishes from degree 1 on
  for (uint32_t n = 1; n <= 4; ++n) {
    SeriesCoeffs f = poincare_formula(n, 14);
    std::vector<BigInt> diff = f.coeffs;
    for (uint32_t round = 0; round < n; ++round)
      for (size_t d = diff.size() - 1; d >= 1; --d) diff[d] -= diff[d - 1];
    for (size_t d = n + 1; d < diff.size(); ++d) CHECK(diff[d] == 0);
  }
}

TEST_CASE("enumeration matches the closed-form series") {
  for (uint32_t m = 2; m <= 4; ++m) {
    uint32_t L = 12;
    GrowthEnum e = coxeter_growth_enumerate(m, L);
    SeriesCoeffs f = poincare_formula(m - 1, L);
    REQUIRE(e.counts.coeffs.size() == f.coeffs.size());
    for (size_t d = 0; d <= L; ++d) CHECK(e.counts.coeffs[d] == f.coeffs[d]);

    // inversion length agrees with word length for every element reached
    REQUIRE(e.elements.size() == e.depth.size());
    std::set<std::vector<int64_t>> seen;
    for (size_t i = 0; i < e.elements.size(); ++i) {
      CHECK(length_by_inversions(e.elements[i]) == e.depth[i]);
      CHECK(e.elements[i].is_valid());
      seen.insert(e.elements[i].window);
    }
    CHECK(seen.size() == e.elements.size());
  }
}

TEST_CASE("enumeration cap") {
  CHECK_THROWS_AS(coxeter_growth_enumerate(3, 12, 50), CapExceededError);
  try {
    coxeter_growth_enumerate(3, 12, 50);
  } catch (const CapExceededError& e) {
    CHECK(e.partial_count > 0);
    CHECK(e.partial_count <= 50);
  }
}

TEST_CASE("covolume partial sums") {
  std::vector<Rational> s = covolume_partial_sums(1, 2, 40);
  REQUIRE(s.size() == 41);
  CHECK(s[0] == 1);
  CHECK(s[1] == 2);
  CHECK(s[2] == Rational(5, 2));
  CHECK(s[3] == Rational(11, 4));
  Rational limit = covolume_closed_form(1, 2);
  CHECK(limit == 3);
  for (size_t d = 1; d < s.size(); ++d) CHECK(s[d] > s[d - 1]);
  for (const Rational& v : s) CHECK(v < limit);
  CHECK(limit - s.back() < Rational(1, BigInt(1) << 30));

  CHECK(covolume_closed_form(3, 2) == 15);
  CHECK(covolume_closed_form(1, 3) == 2);
  CHECK(covolume_closed_form(2, 2) == 7);

  std::vector<Rational> s32 = covolume_partial_sums(3, 2, 60);
  Rational lim32 = covolume_closed_form(3, 2);
  for (size_t d = 1; d < s32.size(); ++d) CHECK(s32[d] > s32[d - 1]);
  CHECK(s32.back() < lim32);
  CHECK(lim32 - s32.back() < Rational(1, BigInt(1) << 40));

  CHECK_THROWS_AS(covolume_partial_sums(1, 1, 4), std::invalid_argument);
  CHECK_THROWS_AS(covolume_closed_form(2, 0), std::invalid_argument);
}
