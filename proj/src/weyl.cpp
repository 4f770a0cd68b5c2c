#include "ctexp/weyl.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

namespace ctexp {

namespace {

// floored quotient for positive modulus
int64_t floordiv(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

BigInt binomial(uint64_t n, uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (uint64_t i = 1; i <= k; ++i) {
    r *= BigInt(n - k + i);
    r /= BigInt(i);
  }
  return r;
}

}  // namespace

AffinePerm AffinePerm::identity(uint32_t m) {
  AffinePerm u;
  u.m = m;
  u.window.resize(m);
  for (uint32_t i = 0; i < m; ++i) u.window[i] = int64_t(i) + 1;
  return u;
}

bool AffinePerm::is_valid() const {
  if (m == 0 || window.size() != m) return false;
  int64_t sum = 0;
  std::vector<bool> seen(m, false);
  for (int64_t v : window) {
    sum += v;
    int64_t r = v % int64_t(m);
    if (r < 0) r += int64_t(m);
    if (seen[size_t(r)]) return false;
    seen[size_t(r)] = true;
  }
  return sum == int64_t(m) * (int64_t(m) + 1) / 2;
}

AffinePerm apply_generator(const AffinePerm& u, uint32_t i) {
  if (i >= u.m) throw std::invalid_argument("generator index out of range");
  AffinePerm v = u;
  if (i >= 1) {
    std::swap(v.window[i - 1], v.window[i]);
  } else {
    v.window[0] = u.window[u.m - 1] - int64_t(u.m);
    v.window[u.m - 1] = u.window[0] + int64_t(u.m);
  }
  return v;
}

uint64_t length_by_inversions(const AffinePerm& u) {
  if (!u.is_valid()) throw std::invalid_argument("window is not an affine permutation");
  uint64_t total = 0;
  for (uint32_t i = 0; i < u.m; ++i)
    for (uint32_t j = i + 1; j < u.m; ++j) {
      int64_t q = floordiv(u.window[j] - u.window[i], int64_t(u.m));
      total += uint64_t(q < 0 ? -q : q);
    }
  return total;
}

GrowthEnum coxeter_growth_enumerate(uint32_t m, uint32_t L, uint64_t max_elements) {
  if (m < 2) throw std::invalid_argument("need period at least 2");
  GrowthEnum out;
  out.counts.provenance = "bfs";
  out.counts.coeffs.assign(L + 1, 0);

  std::set<std::vector<int64_t>> visited;
  std::vector<AffinePerm> layer{AffinePerm::identity(m)};
  visited.insert(layer[0].window);
  out.counts.coeffs[0] = 1;
  out.elements.push_back(layer[0]);
  out.depth.push_back(0);

  for (uint32_t d = 1; d <= L; ++d) {
    std::set<std::vector<int64_t>> next;
    for (const AffinePerm& u : layer)
      for (uint32_t i = 0; i < m; ++i) {
        AffinePerm v = apply_generator(u, i);
        if (!visited.count(v.window)) next.insert(std::move(v.window));
      }
    if (visited.size() + next.size() > max_elements)
      throw CapExceededError(visited.size());
    layer.clear();
    for (const auto& w : next) {
      AffinePerm v;
      v.m = m;
      v.window = w;
      visited.insert(w);
      out.elements.push_back(v);
      out.depth.push_back(d);
      layer.push_back(std::move(v));
    }
    out.counts.coeffs[d] = BigInt(layer.size());
    if (layer.empty()) break;
  }
  return out;
}

SeriesCoeffs coxeter_growth_bfs(uint32_t m, uint32_t L, uint64_t max_elements) {
  return coxeter_growth_enumerate(m, L, max_elements).counts;
}

SeriesCoeffs poincare_formula(uint32_t n, uint32_t L) {
  SeriesCoeffs out;
  out.provenance = "formula";
  out.coeffs.resize(L + 1);
  for (uint32_t d = 0; d <= L; ++d) {
    BigInt c = binomial(uint64_t(d) + n, n);
    if (d >= 1) c -= binomial(uint64_t(d) - 1, n);
    out.coeffs[d] = c;
  }
  return out;
}

std::vector<Rational> covolume_partial_sums(uint32_t n, uint64_t q, uint32_t L) {
  if (q < 2) throw std::invalid_argument("need a prime power q >= 2");
  SeriesCoeffs coeffs = poincare_formula(n, L);
  std::vector<Rational> sums(L + 1);
  Rational acc = 0;
  BigInt qd = 1;
  for (uint32_t d = 0; d <= L; ++d) {
    acc += Rational(coeffs.coeffs[d], qd);
    sums[d] = acc;
    qd *= BigInt(q);
  }
  return sums;
}

Rational covolume_closed_form(uint32_t n, uint64_t q) {
  if (q < 2) throw std::invalid_argument("need a prime power q >= 2");
  BigInt qb(q);
  BigInt num = boost::multiprecision::pow(qb, n + 1) - 1;
  BigInt den = boost::multiprecision::pow(qb - 1, n + 1);
  return Rational(num, den);
}

}  // namespace ctexp
