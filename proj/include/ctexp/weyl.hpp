#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ctexp/errors.hpp"

namespace ctexp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Affine permutation of period m, stored by its window u(1..m): entries
// pairwise distinct mod m with sum m(m+1)/2.
struct AffinePerm {
  uint32_t m = 0;
  std::vector<int64_t> window;

  static AffinePerm identity(uint32_t m);
  bool is_valid() const;
  bool operator==(const AffinePerm& o) const {
    return m == o.m && window == o.window;
  }
};

// Right multiplication by a Coxeter generator: i in [1, m) swaps window
// entries i, i+1; i = 0 swaps across the period boundary.
AffinePerm apply_generator(const AffinePerm& u, uint32_t i);

// Coxeter length via the affine inversion count
// sum_{i<j} |floor((u(j) - u(i)) / m)|. Throws on an invalid window.
uint64_t length_by_inversions(const AffinePerm& u);

struct SeriesCoeffs {
  std::vector<BigInt> coeffs;  // index = degree, length L+1
  std::string provenance;      // "bfs" | "formula"
};

struct GrowthEnum {
  std::vector<AffinePerm> elements;  // BFS order
  std::vector<uint32_t> depth;       // Cayley distance from identity
  SeriesCoeffs counts;
};

// BFS over the m Coxeter generators out to distance L.
GrowthEnum coxeter_growth_enumerate(uint32_t m, uint32_t L,
                                    uint64_t max_elements = uint64_t(1) << 22);
SeriesCoeffs coxeter_growth_bfs(uint32_t m, uint32_t L,
                                uint64_t max_elements = uint64_t(1) << 22);

// Truncated expansion of (1 - x^{n+1}) / (1 - x)^{n+1}:
// coefficient d = C(d+n, n) - C(d-1, n).
SeriesCoeffs poincare_formula(uint32_t n, uint32_t L);

// Partial sums sum_{d<=D} coeff(d) q^{-d} for D = 0..L, exact rationals.
std::vector<Rational> covolume_partial_sums(uint32_t n, uint64_t q, uint32_t L);

// The closed-form limit (1 - q^{-(n+1)}) / (1 - q^{-1})^{n+1}
//   = (q^{n+1} - 1) / (q - 1)^{n+1}.
Rational covolume_closed_form(uint32_t n, uint64_t q);

}  // namespace ctexp
