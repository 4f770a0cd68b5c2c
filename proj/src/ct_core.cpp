#include "ctexp/ct_core.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace ctexp {
namespace {

// Gaussian elimination mod p; rows carry the rhs in the last slot. Returns
// the particular solution with free variables set to zero.
std::optional<std::vector<uint32_t>> solve_mod_p(
    std::vector<std::vector<uint32_t>> rows, size_t n, uint64_t p) {
  size_t rank = 0;
  std::vector<size_t> pivot_col;
  for (size_t col = 0; col < n && rank < rows.size(); ++col) {
    size_t piv = rank;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    uint64_t inv = mod_inverse(rows[rank][col], p);
    for (size_t j = col; j <= n; ++j)
      rows[rank][j] = uint32_t(rows[rank][j] * inv % p);
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      uint64_t fac = rows[r][col];
      for (size_t j = col; j <= n; ++j)
        rows[r][j] = uint32_t((rows[r][j] + (p - rows[rank][j]) * fac) % p);
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (size_t r = rank; r < rows.size(); ++r)
    if (rows[r][n] != 0) return std::nullopt;
  std::vector<uint32_t> x(n, 0);
  for (size_t r = 0; r < rank; ++r) x[pivot_col[r]] = rows[r][n];
  return x;
}

LPoly det_rec(const LMat& m, uint32_t row, uint32_t colmask) {
  const FieldCtx* f = m.field();
  if (row == m.dim()) return LPoly::constant(f->one());
  LPoly acc = LPoly::zero(f);
  int pos = 0;
  for (uint32_t c = 0; c < m.dim(); ++c) {
    if (!(colmask & (uint32_t(1) << c))) continue;
    const LPoly& e = m.at(row, c);
    if (!e.is_zero()) {
      LPoly term = e * det_rec(m, row + 1, colmask & ~(uint32_t(1) << c));
      acc = (pos % 2 == 0) ? acc + term : acc - term;
    }
    ++pos;
  }
  return acc;
}

bool lift_conditions_hold(const FieldCtx& f, const LPoly& F, const Fe& a,
                          const Fe& lambda) {
  if (!(F.sigma() + F.shifted(1) == LPoly::zero(&f))) return false;
  Fe v = F.is_zero() ? f.zero() : F.eval(a);
  return v == lambda;
}

void check_admissible(const FieldCtx& f, const Fe& lambda, const Fe& a) {
  if (!f.is_zero(f.add(f.conj(lambda), f.mul(a, lambda))))
    throw std::invalid_argument("lambda fails conj(lambda) + a*lambda = 0");
}

}  // namespace

LMat::LMat(const FieldCtx* f, uint32_t dim)
    : f_(f), dim_(dim), e_(size_t(dim) * dim, LPoly::zero(f)) {}

LMat LMat::identity(const FieldCtx* f, uint32_t dim) {
  LMat m(f, dim);
  for (uint32_t i = 0; i < dim; ++i)
    m.set(i, i, LPoly::constant(f->one()));
  return m;
}

LMat LMat::operator*(const LMat& o) const {
  if (dim_ != o.dim_ || f_ != o.f_) throw std::invalid_argument("dim mismatch");
  LMat r(f_, dim_);
  for (uint32_t i = 0; i < dim_; ++i)
    for (uint32_t k = 0; k < dim_; ++k) {
      const LPoly& a = at(i, k);
      if (a.is_zero()) continue;
      for (uint32_t j = 0; j < dim_; ++j) {
        const LPoly& b = o.at(k, j);
        if (b.is_zero()) continue;
        r.set(i, j, r.at(i, j) + a * b);
      }
    }
  return r;
}

bool LMat::operator==(const LMat& o) const {
  return dim_ == o.dim_ && f_ == o.f_ && e_ == o.e_;
}

LMat LMat::transpose() const {
  LMat r(f_, dim_);
  for (uint32_t i = 0; i < dim_; ++i)
    for (uint32_t j = 0; j < dim_; ++j) r.set(j, i, at(i, j));
  return r;
}

LMat LMat::sigma_entrywise() const {
  LMat r(f_, dim_);
  for (uint32_t i = 0; i < dim_; ++i)
    for (uint32_t j = 0; j < dim_; ++j) r.set(i, j, at(i, j).sigma());
  return r;
}

LMat LMat::scaled(const LPoly& c) const {
  LMat r(f_, dim_);
  for (uint32_t i = 0; i < dim_; ++i)
    for (uint32_t j = 0; j < dim_; ++j) r.set(i, j, at(i, j) * c);
  return r;
}

std::vector<LPoly> LMat::apply(const std::vector<LPoly>& v) const {
  if (v.size() != dim_) throw std::invalid_argument("vector dim mismatch");
  std::vector<LPoly> out(dim_, LPoly::zero(f_));
  for (uint32_t i = 0; i < dim_; ++i)
    for (uint32_t j = 0; j < dim_; ++j) {
      if (at(i, j).is_zero() || v[j].is_zero()) continue;
      out[i] = out[i] + at(i, j) * v[j];
    }
  return out;
}

LPoly LMat::det() const {
  if (dim_ == 0 || dim_ > 31) throw std::invalid_argument("bad dimension");
  return det_rec(*this, 0, (uint32_t(1) << dim_) - 1);
}

bool LMat::is_identity() const {
  for (uint32_t i = 0; i < dim_; ++i)
    for (uint32_t j = 0; j < dim_; ++j) {
      if (i == j) {
        if (!(at(i, j) == LPoly::constant(f_->one()))) return false;
      } else if (!at(i, j).is_zero()) {
        return false;
      }
    }
  return true;
}

LMat LMat::transport(const FieldCtx* target) const {
  LMat r(target, dim_);
  for (uint32_t i = 0; i < dim_; ++i)
    for (uint32_t j = 0; j < dim_; ++j) r.set(i, j, at(i, j).transport(target));
  return r;
}

std::string LMat::to_text() const {
  std::string s;
  for (uint32_t i = 0; i < dim_; ++i) {
    for (uint32_t j = 0; j < dim_; ++j) {
      if (j) s += " ; ";
      s += at(i, j).to_string();
    }
    s += "\n";
  }
  return s;
}

Form make_form(const FieldCtx* f, uint32_t n) {
  if (n < 2) throw std::invalid_argument("n must be >= 2");
  if (2 * n > 31) throw std::invalid_argument("n too large");
  Form fm;
  fm.f = f;
  fm.n = n;
  fm.gram = LMat(f, 2 * n);
  for (uint32_t i = 0; i < n; ++i) {
    fm.gram.set(i, n + i, LPoly::t_power(f, 1));
    fm.gram.set(n + i, i, LPoly::constant(f->one()));
  }
  return fm;
}

uint32_t basis_index(const Form& fm, const std::string& label) {
  if (label.size() < 2 || (label[0] != 'e' && label[0] != 'f'))
    throw std::invalid_argument("bad basis label: " + label);
  uint32_t i = uint32_t(std::stoul(label.substr(1)));
  if (i < 1 || i > fm.n) throw std::invalid_argument("basis index out of range: " + label);
  return (label[0] == 'e') ? i - 1 : fm.n + i - 1;
}

std::string basis_label(const Form& fm, uint32_t index) {
  if (index >= 2 * fm.n) throw std::invalid_argument("basis index out of range");
  if (index < fm.n) return "e" + std::to_string(index + 1);
  return "f" + std::to_string(index - fm.n + 1);
}

LPoly form_value(const Form& fm, const std::vector<LPoly>& x,
                 const std::vector<LPoly>& y) {
  uint32_t d = 2 * fm.n;
  if (x.size() != d || y.size() != d) throw std::invalid_argument("vector dim mismatch");
  std::vector<LPoly> sy(d, LPoly::zero(fm.f));
  for (uint32_t i = 0; i < d; ++i) sy[i] = y[i].sigma();
  std::vector<LPoly> bsy = fm.gram.apply(sy);
  LPoly acc = LPoly::zero(fm.f);
  for (uint32_t i = 0; i < d; ++i) {
    if (x[i].is_zero() || bsy[i].is_zero()) continue;
    acc = acc + x[i] * bsy[i];
  }
  return acc;
}

bool is_form_preserving(const Form& fm, const LMat& g) {
  LMat lhs = g.transpose() * (fm.gram * g.sigma_entrywise());
  return lhs == fm.gram;
}

MembershipReport gtau_membership(const Form& fm, const LMat& g) {
  MembershipReport r;
  r.form_preserving = is_form_preserving(fm, g);
  r.det = g.det();
  r.det_one = (r.det == LPoly::constant(fm.f->one()));
  return r;
}

LMat shift_generator(const Form& fm) {
  uint32_t n = fm.n;
  LMat s(fm.f, 2 * n);
  for (uint32_t i = 0; i + 1 < n; ++i) {
    s.set(i + 1, i, LPoly::constant(fm.f->one()));        // e_{i+1} <- e_i image
    s.set(n + i + 1, n + i, LPoly::constant(fm.f->one())); // f block
  }
  s.set(n, n - 1, LPoly::constant(fm.f->one()));   // e_n -> f_1
  s.set(0, 2 * n - 1, LPoly::t_power(fm.f, -1));   // f_n -> t^{-1} e_1
  return s;
}

LMat shift_generator_inverse(const Form& fm) {
  uint32_t n = fm.n;
  LMat s(fm.f, 2 * n);
  for (uint32_t i = 0; i + 1 < n; ++i) {
    s.set(i, i + 1, LPoly::constant(fm.f->one()));
    s.set(n + i, n + i + 1, LPoly::constant(fm.f->one()));
  }
  s.set(n - 1, n, LPoly::constant(fm.f->one()));  // f_1 -> e_n
  s.set(2 * n - 1, 0, LPoly::t_power(fm.f, 1));   // e_1 -> t f_n
  return s;
}

Mat2 mat2_mul(const FieldCtx& f, const Mat2& x, const Mat2& y) {
  Mat2 r;
  r.a = f.add(f.mul(x.a, y.a), f.mul(x.b, y.c));
  r.b = f.add(f.mul(x.a, y.b), f.mul(x.b, y.d));
  r.c = f.add(f.mul(x.c, y.a), f.mul(x.d, y.c));
  r.d = f.add(f.mul(x.c, y.b), f.mul(x.d, y.d));
  return r;
}

Mat2 mat2_inverse(const FieldCtx& f, const Mat2& m) {
  Fe det = f.sub(f.mul(m.a, m.d), f.mul(m.b, m.c));
  if (!f.is_one(det)) throw std::invalid_argument("mat2_inverse needs det 1");
  Mat2 r;
  r.a = m.d;
  r.b = f.neg(m.b);
  r.c = f.neg(m.c);
  r.d = m.a;
  return r;
}

LMat l0_embed(const Form& fm, const Mat2& A) {
  const FieldCtx& f = *fm.f;
  Fe det = f.sub(f.mul(A.a, A.d), f.mul(A.b, A.c));
  if (!f.is_one(det)) throw std::invalid_argument("l0_embed needs det 1");
  for (const Fe* c : {&A.a, &A.b, &A.c, &A.d})
    if (!f.in_subfield(*c))
      throw std::invalid_argument("l0_embed entries must lie in the subfield");
  uint32_t n = fm.n;
  LMat m = LMat::identity(fm.f, 2 * n);
  m.set(0, 0, LPoly::constant(A.a));
  m.set(0, 1, LPoly::constant(A.b));
  m.set(1, 0, LPoly::constant(A.c));
  m.set(1, 1, LPoly::constant(A.d));
  // transpose of the inverse on the f block
  m.set(n, n, LPoly::constant(A.d));
  m.set(n, n + 1, LPoly::constant(f.neg(A.c)));
  m.set(n + 1, n, LPoly::constant(f.neg(A.b)));
  m.set(n + 1, n + 1, LPoly::constant(A.a));
  return m;
}

namespace {

std::array<uint64_t, 4> mat2_key(const FieldCtx& f, const Mat2& m) {
  return {f.to_index(m.a), f.to_index(m.b), f.to_index(m.c), f.to_index(m.d)};
}

std::vector<Mat2> sl2_elements(const FieldCtx& f) {
  auto sub = f.subfield_elements();
  std::vector<Mat2> out;
  for (const Fe& a : sub)
    for (const Fe& b : sub)
      for (const Fe& c : sub)
        for (const Fe& d : sub) {
          Fe det = f.sub(f.mul(a, d), f.mul(b, c));
          if (f.is_one(det)) out.push_back(Mat2{a, b, c, d});
        }
  return out;
}

size_t closure_size(const FieldCtx& f, const Mat2& x, const Mat2& y, size_t cap) {
  std::set<std::array<uint64_t, 4>> seen;
  std::vector<Mat2> frontier = {x, y};
  seen.insert(mat2_key(f, x));
  seen.insert(mat2_key(f, y));
  while (!frontier.empty() && seen.size() <= cap) {
    std::vector<Mat2> next;
    for (const Mat2& m : frontier)
      for (const Mat2* g : {&x, &y}) {
        Mat2 prod = mat2_mul(f, m, *g);
        if (seen.insert(mat2_key(f, prod)).second) next.push_back(prod);
      }
    frontier = std::move(next);
  }
  return seen.size();
}

bool is_involution(const FieldCtx& f, const Mat2& m) {
  Mat2 sq = mat2_mul(f, m, m);
  return f.is_one(sq.a) && f.is_zero(sq.b) && f.is_zero(sq.c) && f.is_one(sq.d) &&
         !(f.is_one(m.a) && f.is_zero(m.b) && f.is_zero(m.c) && f.is_one(m.d));
}

}  // namespace

GenSet build_generating_set(const Form& fm) {
  const FieldCtx& f = *fm.f;
  uint64_t q = f.q();
  size_t sl2_order = size_t(q * (q * q - 1));
  auto all = sl2_elements(f);
  if (all.size() != sl2_order)
    throw std::logic_error("SL2 enumeration has the wrong size");
  GenSet gs;
  bool found = false;
  for (const Mat2& x : all) {
    if (!is_involution(f, x)) continue;
    for (const Mat2& y : all) {
      if (closure_size(f, x, y, sl2_order) == sl2_order) {
        gs.x2 = x;
        gs.y2 = y;
        gs.involution_found = true;
        found = true;
        break;
      }
    }
    if (found) break;
  }
  if (!found) {
    for (const Mat2& x : all) {
      for (const Mat2& y : all) {
        if (closure_size(f, x, y, sl2_order) == sl2_order) {
          gs.x2 = x;
          gs.y2 = y;
          gs.involution_found = false;
          found = true;
          break;
        }
      }
      if (found) break;
    }
  }
  if (!found) throw std::logic_error("no generating pair for SL2 found");

  LMat X = l0_embed(fm, gs.x2);
  LMat Y = l0_embed(fm, gs.y2);
  LMat Yi = l0_embed(fm, mat2_inverse(f, gs.y2));
  LMat S = shift_generator(fm);
  LMat Si = shift_generator_inverse(fm);
  if (gs.involution_found) {
    gs.gens = {{"x", X}, {"y", Y}, {"y_inv", Yi}, {"s", S}, {"s_inv", Si}};
    gs.provenance = "x: first involution in lex order generating with the first lex y";
  } else {
    LMat Xi = l0_embed(fm, mat2_inverse(f, gs.x2));
    gs.gens = {{"x", X},  {"x_inv", Xi}, {"y", Y},
               {"y_inv", Yi}, {"s", S},  {"s_inv", Si}};
    gs.provenance =
        "no involution generates SL2 at this q; first lex pair, symmetric 6-element set";
  }
  return gs;
}

LPoly lambda_polynomial(const FieldCtx& f, const Fe& lambda, const Fe& a,
                        uint32_t s) {
  uint32_t e = f.base_degree();
  uint32_t k = f.k();
  if (k != 2 * s * e) throw std::invalid_argument("field degree does not match s");
  Fe b = f.subfield_generator();
  uint64_t p = f.p();
  size_t nunk = size_t(2 * s) * e;
  std::vector<std::vector<uint32_t>> rows(k, std::vector<uint32_t>(nunk + 1, 0));
  for (uint32_t j = 0; j < 2 * s; ++j) {
    Fe aj = f.pow(a, j);
    for (uint32_t i = 0; i < e; ++i) {
      Fe basis = f.mul(f.pow(b, i), aj);
      for (uint32_t r = 0; r < k; ++r) rows[r][size_t(j) * e + i] = basis.d[r];
    }
  }
  for (uint32_t r = 0; r < k; ++r) rows[r][nunk] = lambda.d[r];
  auto sol = solve_mod_p(std::move(rows), nunk, p);
  if (!sol) throw std::logic_error("lambda coordinates: inconsistent system");
  std::vector<Fe> coeffs;
  coeffs.reserve(2 * s);
  for (uint32_t j = 0; j < 2 * s; ++j) {
    Fe c = f.zero();
    for (uint32_t i = 0; i < e; ++i) {
      Fe term = f.mul(f.from_int(int64_t((*sol)[size_t(j) * e + i])), f.pow(b, i));
      c = f.add(c, term);
    }
    coeffs.push_back(c);
  }
  return LPoly::from_coeffs(&f, 0, std::move(coeffs));
}

LPoly solve_F_window(const FieldCtx& f, const Fe& lambda, const Fe& a, uint32_t s) {
  check_admissible(f, lambda, a);
  uint32_t e = f.base_degree();
  uint32_t k = f.k();
  uint64_t p = f.p();
  LPoly P = lambda_polynomial(f, lambda, a, s);
  int64_t L = std::max<int64_t>(P.hi(), 0);
  int64_t wlo = -int64_t(2 * s) - L;
  int64_t whi = L;
  size_t wn = size_t(whi - wlo + 1);
  size_t nunk = wn * e;
  Fe b = f.subfield_generator();
  auto unk = [&](int64_t j, uint32_t i) { return size_t(j - wlo) * e + i; };

  std::vector<std::vector<uint32_t>> rows;
  // symmetry: coefficient of t^{-m} plus coefficient of t^{m-1} vanishes
  for (int64_t m = wlo + 1; m <= -wlo; ++m) {
    bool in1 = (-m >= wlo && -m <= whi);
    bool in2 = (m - 1 >= wlo && m - 1 <= whi);
    if (!in1 && !in2) continue;
    if (in1 && in2 && -m > m - 1) continue;  // each pair once
    for (uint32_t i = 0; i < e; ++i) {
      std::vector<uint32_t> row(nunk + 1, 0);
      if (in1) row[unk(-m, i)] = uint32_t((row[unk(-m, i)] + 1) % p);
      if (in2) row[unk(m - 1, i)] = uint32_t((row[unk(m - 1, i)] + 1) % p);
      rows.push_back(std::move(row));
    }
  }
  // evaluation: sum over the window equals lambda
  std::vector<std::vector<uint32_t>> erows(k, std::vector<uint32_t>(nunk + 1, 0));
  for (int64_t j = wlo; j <= whi; ++j) {
    Fe aj = f.pow_signed(a, j);
    for (uint32_t i = 0; i < e; ++i) {
      Fe basis = f.mul(f.pow(b, i), aj);
      for (uint32_t r = 0; r < k; ++r) erows[r][unk(j, i)] = basis.d[r];
    }
  }
  for (uint32_t r = 0; r < k; ++r) erows[r][nunk] = lambda.d[r];
  for (auto& r : erows) rows.push_back(std::move(r));

  auto sol = solve_mod_p(std::move(rows), nunk, p);
  if (!sol) throw std::logic_error("window solver: inconsistent system");
  std::vector<Fe> coeffs(wn, f.zero());
  for (int64_t j = wlo; j <= whi; ++j) {
    Fe c = f.zero();
    for (uint32_t i = 0; i < e; ++i) {
      Fe term = f.mul(f.from_int(int64_t((*sol)[unk(j, i)])), f.pow(b, i));
      c = f.add(c, term);
    }
    coeffs[size_t(j - wlo)] = c;
  }
  LPoly F = LPoly::from_coeffs(&f, wlo, std::move(coeffs));
  if (!lift_conditions_hold(f, F, a, lambda))
    throw std::logic_error("window solver: solution fails the lift conditions");
  return F;
}

LiftSolution solve_F(const FieldCtx& f, const Fe& lambda, const Fe& a, uint32_t s) {
  check_admissible(f, lambda, a);
  LPoly P = lambda_polynomial(f, lambda, a, s);
  LPoly fa = LPoly::from_coeffs(&f, 0, f.min_poly(a));
  if (fa.hi() != int64_t(2 * s))
    throw std::invalid_argument("root does not have degree 2s over the subfield");
  try {
    LPoly num = P.sigma() + P.shifted(1);
    LPoly G = num.is_zero() ? LPoly::zero(&f) : num.divide_exact(fa);
    if (!(G.sigma() == G.shifted(int64_t(2 * s) - 1)))
      throw std::logic_error("chain: G symmetry fails");
    LPoly H = LPoly::zero(&f);
    if (!G.is_zero()) {
      int64_t l = G.hi();
      int64_t r = int64_t(2 * s) - 1 + l;
      if (G.lo() != -r) throw std::logic_error("chain: G window mismatch");
      if (l < 1 - int64_t(s)) throw std::logic_error("chain: degenerate G window");
      std::vector<Fe> hc;
      for (int64_t ex = -l - int64_t(2 * s); ex <= -int64_t(s) - 1; ++ex)
        hc.push_back(f.one());
      for (int64_t ex = -int64_t(s); ex <= l - 1; ++ex)
        hc.push_back(f.sub(G.coeff(ex + 1), f.one()));
      H = LPoly::from_coeffs(&f, -l - int64_t(2 * s), std::move(hc));
      if (!(H.sigma().shifted(-int64_t(2 * s)) + H.shifted(1) == G))
        throw std::logic_error("chain: H condition fails");
    }
    LPoly F = P - fa * H;
    if (!lift_conditions_hold(f, F, a, lambda))
      throw std::logic_error("chain: F conditions fail");
    return {F, false};
  } catch (const std::logic_error&) {
    // degenerate window or broken identity: fall back to the direct solve
    return {solve_F_window(f, lambda, a, s), true};
  }
}

Lift lift_transvection(const Form& fm, uint32_t v_index, const Fe& lambda,
                       const Fe& a, uint32_t s) {
  const FieldCtx& f = *fm.f;
  uint32_t n = fm.n;
  if (v_index >= 2 * n) throw std::invalid_argument("basis index out of range");
  LiftSolution sol = solve_F(f, lambda, a, s);
  LMat phi = LMat::identity(fm.f, 2 * n);
  if (!sol.F.is_zero()) {
    if (v_index < n) {
      // beta(x, e_j) = x_{f_j}
      phi.set(v_index, n + v_index, sol.F);
    } else {
      // beta(x, f_j) = t * x_{e_j}
      phi.set(v_index, v_index - n, sol.F.shifted(1));
    }
  }
  return {phi, sol.F, sol.used_fallback};
}

TrivialSpecReport trivial_specializations(const LMat& g, uint64_t q, uint32_t s_max,
                                          uint64_t size_bound) {
  if (g.is_identity())
    throw std::invalid_argument("trivial_specializations needs a nonidentity matrix");
  TrivialSpecReport rep;
  int64_t best = -1;
  const FieldCtx* f = g.field();
  for (uint32_t i = 0; i < g.dim(); ++i)
    for (uint32_t j = 0; j < g.dim(); ++j) {
      LPoly d = g.at(i, j);
      if (i == j) d = d - LPoly::constant(f->one());
      if (d.is_zero()) continue;
      int64_t w = d.hi() - d.lo();
      if (best < 0 || w < best) best = w;
    }
  rep.root_bound = best;
  for (uint32_t s = 1; s <= s_max; ++s) {
    RootCtx rc = unit_root(q, s, size_bound);
    LMat gs = g.transport(rc.field.get());
    bool trivial = true;
    for (uint32_t i = 0; i < gs.dim() && trivial; ++i)
      for (uint32_t j = 0; j < gs.dim() && trivial; ++j) {
        Fe v = gs.at(i, j).is_zero() ? rc.field->zero() : gs.at(i, j).eval(rc.a);
        Fe want = (i == j) ? rc.field->one() : rc.field->zero();
        if (!(v == want)) trivial = false;
      }
    if (trivial) rep.trivial_s.push_back(s);
  }
  return rep;
}

}  // namespace ctexp
