#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctexp/laurent.hpp"

namespace ctexp {

// Square matrix over the Laurent ring, row-major. Columns hold images of
// basis vectors; basis order is (e_1..e_n, f_1..f_n), so index i < n is e_{i+1}
// and index n+i is f_{i+1}.
class LMat {
 public:
  LMat() = default;
  LMat(const FieldCtx* f, uint32_t dim);
  static LMat identity(const FieldCtx* f, uint32_t dim);

  uint32_t dim() const { return dim_; }
  const FieldCtx* field() const { return f_; }
  const LPoly& at(uint32_t r, uint32_t c) const { return e_[r * dim_ + c]; }
  void set(uint32_t r, uint32_t c, LPoly v) { e_[r * dim_ + c] = std::move(v); }

  LMat operator*(const LMat& o) const;
  bool operator==(const LMat& o) const;
  bool operator!=(const LMat& o) const { return !(*this == o); }

  LMat transpose() const;
  LMat sigma_entrywise() const;
  LMat scaled(const LPoly& c) const;
  std::vector<LPoly> apply(const std::vector<LPoly>& v) const;  // matrix * column
  LPoly det() const;
  bool is_identity() const;
  LMat transport(const FieldCtx* target) const;

  std::string to_text() const;  // one row per line, entries joined by " ; "

 private:
  const FieldCtx* f_ = nullptr;
  uint32_t dim_ = 0;
  std::vector<LPoly> e_;
};

// The twisted form: gram entries beta(e_i, f_i) = t, beta(f_i, e_i) = 1.
struct Form {
  const FieldCtx* f = nullptr;
  uint32_t n = 0;
  LMat gram;
};

Form make_form(const FieldCtx* f, uint32_t n);

uint32_t basis_index(const Form& fm, const std::string& label);  // "e1".."fn"
std::string basis_label(const Form& fm, uint32_t index);

// beta(x, y) = x^T B sigma(y)
LPoly form_value(const Form& fm, const std::vector<LPoly>& x,
                 const std::vector<LPoly>& y);

bool is_form_preserving(const Form& fm, const LMat& g);

struct MembershipReport {
  bool form_preserving = false;
  bool det_one = false;
  LPoly det;
};

MembershipReport gtau_membership(const Form& fm, const LMat& g);

// e_i -> e_{i+1}, f_i -> f_{i+1}, e_n -> f_1, f_n -> t^{-1} e_1
LMat shift_generator(const Form& fm);
LMat shift_generator_inverse(const Form& fm);

struct Mat2 {
  Fe a, b, c, d;
};

Mat2 mat2_mul(const FieldCtx& f, const Mat2& x, const Mat2& y);
Mat2 mat2_inverse(const FieldCtx& f, const Mat2& m);  // needs det 1

// diag(A, I, transpose(A^{-1}), I) acting on (e_1,e_2) and (f_1,f_2)
LMat l0_embed(const Form& fm, const Mat2& A);

struct GenSet {
  struct Gen {
    std::string label;
    LMat m;
  };
  std::vector<Gen> gens;
  bool involution_found = false;
  Mat2 x2, y2;
  std::string provenance;
};

// Deterministic search over SL_2(F_q) for a generating pair, preferring an
// involution x; falls back to the symmetric 6-element set when no involution
// generates (odd q).
GenSet build_generating_set(const Form& fm);

// F with sigma(F) + t F = 0 and F(a) = lambda, built by the P -> G -> H -> F
// chain; falls back to the window solver if an internal identity fails.
struct LiftSolution {
  LPoly F;
  bool used_fallback = false;
};

LiftSolution solve_F(const FieldCtx& f, const Fe& lambda, const Fe& a, uint32_t s);

// Independent route: bounded-window linear solve over F_q for the same two
// conditions. Used as the test oracle and as the fallback.
LPoly solve_F_window(const FieldCtx& f, const Fe& lambda, const Fe& a, uint32_t s);

// P with P(a) = lambda via coordinates in the basis {w^i a^j}
LPoly lambda_polynomial(const FieldCtx& f, const Fe& lambda, const Fe& a, uint32_t s);

struct Lift {
  LMat phi;
  LPoly F;
  bool used_fallback = false;
};

// Phi_v(x) = x + F beta(x, v) v for a basis vector v
Lift lift_transvection(const Form& fm, uint32_t v_index, const Fe& lambda,
                       const Fe& a, uint32_t s);

struct TrivialSpecReport {
  std::vector<uint32_t> trivial_s;  // s values where the image is the identity
  int64_t root_bound = 0;           // min support width over nonzero entries of g - I
};

// Which root orders q^s + 1, s <= s_max, send g to the identity. Requires
// g != I with prime-field constant coefficients.
TrivialSpecReport trivial_specializations(const LMat& g, uint64_t q, uint32_t s_max,
                                          uint64_t size_bound = kDefaultFieldBound);

}  // namespace ctexp
