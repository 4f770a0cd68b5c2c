#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ctexp/finite_field.hpp"

namespace ctexp {

inline constexpr int64_t kMaxWindow = 1000000;

// Laurent polynomial over the field of its context, window representation:
// coeff(i) holds the coefficient of t^(lo+i). Normalized so that boundary
// coefficients are nonzero; the zero polynomial is the canonical empty
// window with lo = hi = 0.
class LPoly {
 public:
  LPoly() = default;

  static LPoly zero(const FieldCtx* f);
  static LPoly constant(const Fe& c);
  static LPoly monomial(const Fe& c, int64_t e);
  static LPoly t_power(const FieldCtx* f, int64_t e);
  // coeffs[i] is the coefficient of t^(lo+i)
  static LPoly from_coeffs(const FieldCtx* f, int64_t lo, std::vector<Fe> coeffs);

  const FieldCtx* field() const { return f_; }
  bool is_zero() const { return c_.empty(); }
  int64_t lo() const { return c_.empty() ? 0 : lo_; }
  int64_t hi() const { return c_.empty() ? 0 : lo_ + int64_t(c_.size()) - 1; }
  Fe coeff(int64_t e) const;
  bool is_constant() const;
  bool is_monomial() const { return c_.size() == 1; }

  LPoly operator+(const LPoly& o) const;
  LPoly operator-(const LPoly& o) const;
  LPoly operator*(const LPoly& o) const;
  LPoly operator-() const;
  bool operator==(const LPoly& o) const;
  bool operator!=(const LPoly& o) const { return !(*this == o); }

  LPoly scaled(const Fe& c) const;
  LPoly shifted(int64_t e) const;  // multiply by t^e
  LPoly sigma() const;             // t -> t^{-1}, coefficients fixed
  Fe eval(const Fe& a) const;      // requires a != 0

  // exact division in the Laurent ring; throws std::domain_error when the
  // divisor does not divide this exactly
  LPoly divide_exact(const LPoly& g) const;

  bool in_subfield() const;  // all coefficients in F_q
  LPoly transport(const FieldCtx* target) const;  // prime-field constants only

  std::string to_string() const;

 private:
  void normalize();
  const FieldCtx* f_ = nullptr;
  int64_t lo_ = 0;
  std::vector<Fe> c_;
};

}  // namespace ctexp
