#include "ctexp/specialize.hpp"

#include <sstream>
#include <stdexcept>

namespace ctexp {

namespace {

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(uint8_t(v >> (8 * i)));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(uint8_t(v >> (8 * i)));
}

}  // namespace

FMat::FMat(const FieldCtx* f, uint32_t dim)
    : f_(f), dim_(dim), e_(size_t(dim) * dim, f->zero()) {}

FMat FMat::identity(const FieldCtx* f, uint32_t dim) {
  FMat m(f, dim);
  for (uint32_t i = 0; i < dim; ++i) m.set(i, i, f->one());
  return m;
}

FMat FMat::operator*(const FMat& o) const {
  if (dim_ != o.dim_ || f_ != o.f_) throw std::invalid_argument("dim mismatch");
  FMat r(f_, dim_);
  for (uint32_t i = 0; i < dim_; ++i)
    for (uint32_t k = 0; k < dim_; ++k) {
      const Fe& a = at(i, k);
      if (f_->is_zero(a)) continue;
      for (uint32_t j = 0; j < dim_; ++j) {
        const Fe& b = o.at(k, j);
        if (f_->is_zero(b)) continue;
        r.set(i, j, f_->add(r.at(i, j), f_->mul(a, b)));
      }
    }
  return r;
}

bool FMat::operator==(const FMat& o) const {
  if (dim_ != o.dim_ || f_ != o.f_) return false;
  return e_ == o.e_;
}

FMat FMat::transpose() const {
  FMat r(f_, dim_);
  for (uint32_t i = 0; i < dim_; ++i)
    for (uint32_t j = 0; j < dim_; ++j) r.set(j, i, at(i, j));
  return r;
}

FMat FMat::conj_entrywise() const {
  FMat r(f_, dim_);
  for (uint32_t i = 0; i < dim_; ++i)
    for (uint32_t j = 0; j < dim_; ++j) r.set(i, j, f_->conj(at(i, j)));
  return r;
}

FMat FMat::scaled(const Fe& c) const {
  FMat r(f_, dim_);
  for (uint32_t i = 0; i < dim_; ++i)
    for (uint32_t j = 0; j < dim_; ++j) r.set(i, j, f_->mul(at(i, j), c));
  return r;
}

Fe FMat::det() const {
  // fraction-free enough for a field: plain Gaussian elimination
  std::vector<Fe> w = e_;
  auto wat = [&](uint32_t r, uint32_t c) -> Fe& { return w[r * dim_ + c]; };
  Fe d = f_->one();
  for (uint32_t col = 0; col < dim_; ++col) {
    uint32_t piv = col;
    while (piv < dim_ && f_->is_zero(wat(piv, col))) ++piv;
    if (piv == dim_) return f_->zero();
    if (piv != col) {
      for (uint32_t j = 0; j < dim_; ++j) std::swap(wat(piv, j), wat(col, j));
      d = f_->neg(d);
    }
    d = f_->mul(d, wat(col, col));
    Fe inv = f_->inv(wat(col, col));
    for (uint32_t r = col + 1; r < dim_; ++r) {
      if (f_->is_zero(wat(r, col))) continue;
      Fe factor = f_->mul(wat(r, col), inv);
      for (uint32_t j = col; j < dim_; ++j)
        wat(r, j) = f_->sub(wat(r, j), f_->mul(factor, wat(col, j)));
    }
  }
  return d;
}

FMat FMat::inverse() const {
  std::vector<Fe> w = e_;
  FMat out = identity(f_, dim_);
  auto wat = [&](uint32_t r, uint32_t c) -> Fe& { return w[r * dim_ + c]; };
  for (uint32_t col = 0; col < dim_; ++col) {
    uint32_t piv = col;
    while (piv < dim_ && f_->is_zero(wat(piv, col))) ++piv;
    if (piv == dim_) throw std::domain_error("singular matrix");
    if (piv != col)
      for (uint32_t j = 0; j < dim_; ++j) {
        std::swap(wat(piv, j), wat(col, j));
        Fe tmp = out.at(piv, j);
        out.set(piv, j, out.at(col, j));
        out.set(col, j, tmp);
      }
    Fe inv = f_->inv(wat(col, col));
    for (uint32_t j = 0; j < dim_; ++j) {
      wat(col, j) = f_->mul(wat(col, j), inv);
      out.set(col, j, f_->mul(out.at(col, j), inv));
    }
    for (uint32_t r = 0; r < dim_; ++r) {
      if (r == col || f_->is_zero(wat(r, col))) continue;
      Fe factor = wat(r, col);
      for (uint32_t j = 0; j < dim_; ++j) {
        wat(r, j) = f_->sub(wat(r, j), f_->mul(factor, wat(col, j)));
        out.set(r, j, f_->sub(out.at(r, j), f_->mul(factor, out.at(col, j))));
      }
    }
  }
  return out;
}

bool FMat::is_identity() const {
  for (uint32_t i = 0; i < dim_; ++i)
    for (uint32_t j = 0; j < dim_; ++j) {
      const Fe& v = at(i, j);
      if (i == j ? !f_->is_one(v) : !f_->is_zero(v)) return false;
    }
  return true;
}

std::string FMat::to_text() const {
  std::ostringstream os;
  for (uint32_t i = 0; i < dim_; ++i) {
    for (uint32_t j = 0; j < dim_; ++j) {
      if (j) os << " ; ";
      os << f_->to_string(at(i, j));
    }
    os << "\n";
  }
  return os.str();
}

size_t fmat_encoded_size(const FieldCtx& f, uint32_t dim) {
  size_t digits = size_t(dim) * dim * f.k();
  if (f.p() == 2) return (digits + 7) / 8;
  if (f.p() <= 255) return digits;
  return digits * 4;
}

void fmat_encode_into(const FMat& m, uint8_t* out) {
  const FieldCtx& f = *m.field();
  uint32_t k = f.k();
  if (f.p() == 2) {
    size_t nbytes = fmat_encoded_size(f, m.dim());
    std::fill(out, out + nbytes, uint8_t(0));
    size_t bit = 0;
    for (uint32_t i = 0; i < m.dim(); ++i)
      for (uint32_t j = 0; j < m.dim(); ++j) {
        const Fe& v = m.at(i, j);
        for (uint32_t d = 0; d < k; ++d, ++bit)
          if (v.d[d]) out[bit / 8] |= uint8_t(1u << (bit % 8));
      }
    return;
  }
  size_t pos = 0;
  for (uint32_t i = 0; i < m.dim(); ++i)
    for (uint32_t j = 0; j < m.dim(); ++j) {
      const Fe& v = m.at(i, j);
      for (uint32_t d = 0; d < k; ++d) {
        if (f.p() <= 255) {
          out[pos++] = uint8_t(v.d[d]);
        } else {
          for (int b = 0; b < 4; ++b) out[pos++] = uint8_t(v.d[d] >> (8 * b));
        }
      }
    }
}

std::vector<uint8_t> fmat_encode(const FMat& m) {
  std::vector<uint8_t> out(fmat_encoded_size(*m.field(), m.dim()));
  fmat_encode_into(m, out.data());
  return out;
}

FMat fmat_decode(const FieldCtx* f, uint32_t dim, const uint8_t* data,
                 size_t len) {
  if (len != fmat_encoded_size(*f, dim))
    throw std::invalid_argument("encoded matrix has the wrong length");
  FMat m(f, dim);
  uint32_t k = f->k();
  if (f->p() == 2) {
    size_t bit = 0;
    for (uint32_t i = 0; i < dim; ++i)
      for (uint32_t j = 0; j < dim; ++j) {
        std::vector<uint32_t> digits(k, 0);
        for (uint32_t d = 0; d < k; ++d, ++bit)
          digits[d] = (data[bit / 8] >> (bit % 8)) & 1u;
        m.set(i, j, f->from_digits(digits));
      }
    return m;
  }
  size_t pos = 0;
  for (uint32_t i = 0; i < dim; ++i)
    for (uint32_t j = 0; j < dim; ++j) {
      std::vector<uint32_t> digits(k, 0);
      for (uint32_t d = 0; d < k; ++d) {
        if (f->p() <= 255) {
          digits[d] = data[pos++];
        } else {
          uint32_t v = 0;
          for (int b = 0; b < 4; ++b) v |= uint32_t(data[pos++]) << (8 * b);
          digits[d] = v;
        }
      }
      m.set(i, j, f->from_digits(digits));
    }
  return m;
}

std::vector<uint8_t> SpecContext::header_bytes() const {
  std::vector<uint8_t> out;
  const FieldCtx& f = *field;
  put_u64(out, f.p());
  put_u32(out, f.k());
  put_u32(out, f.base_degree());
  put_u64(out, f.q());
  put_u32(out, s);
  put_u32(out, n);
  put_u32(out, f.conj_frob());
  put_u32(out, uint32_t(f.modulus().size()));
  for (uint32_t c : f.modulus()) put_u32(out, c);
  put_u32(out, f.k());
  for (uint32_t d = 0; d < f.k(); ++d) put_u32(out, a.d[d]);
  put_u32(out, gram.dim());
  std::vector<uint8_t> g = fmat_encode(gram);
  put_u32(out, uint32_t(g.size()));
  out.insert(out.end(), g.begin(), g.end());
  return out;
}

SpecContext make_spec_context(const RootCtx& rc, uint32_t s, uint32_t n) {
  SpecContext ctx;
  ctx.field = rc.field;
  ctx.a = rc.a;
  ctx.s = s;
  ctx.n = n;
  Form fm = make_form(rc.field.get(), n);
  ctx.gram = specialize(fm.gram, rc.a);
  return ctx;
}

FMat specialize(const LMat& g, const Fe& a) {
  const FieldCtx* f = g.field();
  if (f->is_zero(a)) throw std::invalid_argument("evaluation point must be nonzero");
  FMat m(f, g.dim());
  for (uint32_t i = 0; i < g.dim(); ++i)
    for (uint32_t j = 0; j < g.dim(); ++j) {
      const LPoly& e = g.at(i, j);
      m.set(i, j, e.is_zero() ? f->zero() : e.eval(a));
    }
  return m;
}

bool is_unitary(const FMat& m, const FMat& gram) {
  if (m.dim() != gram.dim() || m.field() != gram.field())
    throw std::invalid_argument("dim mismatch");
  return m.transpose() * gram * m.conj_entrywise() == gram;
}

FMat finite_transvection(const SpecContext& ctx, uint32_t v_index,
                         const Fe& lambda) {
  const FieldCtx& f = *ctx.field;
  uint32_t d = 2 * ctx.n;
  if (v_index >= d) throw std::invalid_argument("basis index out of range");
  if (!f.is_zero(f.add(f.conj(lambda), f.mul(ctx.a, lambda))))
    throw std::invalid_argument("lambda fails conj(lambda) + a*lambda = 0");
  FMat t = FMat::identity(&f, d);
  for (uint32_t j = 0; j < d; ++j) {
    const Fe& b = ctx.gram.at(j, v_index);
    if (f.is_zero(b)) continue;
    t.set(v_index, j, f.add(t.at(v_index, j), f.mul(lambda, b)));
  }
  return t;
}

Fe find_hermitian_scalar(const FieldCtx& f, const Fe& a, uint32_t s) {
  uint64_t qs = 1;
  for (uint32_t i = 0; i < s; ++i) qs *= f.q();
  for (uint64_t idx = 1; idx < f.size(); ++idx) {
    Fe c = f.from_index(idx);
    if (f.pow(c, qs - 1) == a) return c;
  }
  throw std::logic_error("no hermitian rescaling scalar exists");
}

BilinearReport bilinear_specialize_check(const Form& fm, const LMat& g,
                                         const Fe& a) {
  const FieldCtx& f = *fm.f;
  if (!f.is_one(f.mul(a, a)))
    throw std::invalid_argument("bilinear specialization needs a = +1 or -1");
  BilinearReport rep;
  FMat gram = specialize(fm.gram, a);
  FMat m = specialize(g, a);
  uint32_t d = gram.dim();

  bool alt = true, sym = true;
  for (uint32_t i = 0; i < d && (alt || sym); ++i)
    for (uint32_t j = 0; j < d; ++j) {
      if (!(gram.at(i, j) == f.neg(gram.at(j, i)))) alt = false;
      if (!(gram.at(i, j) == gram.at(j, i))) sym = false;
    }
  for (uint32_t i = 0; i < d; ++i)
    if (!f.is_zero(gram.at(i, i))) alt = false;
  rep.alternating = alt;
  rep.symmetric = sym;
  rep.preserves_form = (m.transpose() * gram * m == gram);
  rep.det_one = f.is_one(m.det());
  return rep;
}

BigInt classical_order(Family fam, uint32_t m, uint64_t qhat) {
  if (m == 0 || qhat < 2) throw std::invalid_argument("bad classical group parameters");
  BigInt q(qhat);
  if (fam == Family::Sp) {
    if (m % 2 != 0) throw std::invalid_argument("Sp needs even dimension");
    uint32_t h = m / 2;
    BigInt r = boost::multiprecision::pow(q, h * h);
    for (uint32_t i = 1; i <= h; ++i)
      r *= boost::multiprecision::pow(q, 2 * i) - 1;
    return r;
  }
  BigInt r = boost::multiprecision::pow(q, m * (m - 1) / 2);
  for (uint32_t i = 2; i <= m; ++i) {
    BigInt term = boost::multiprecision::pow(q, i);
    r *= (i % 2 == 0) ? BigInt(term - 1) : BigInt(term + 1);
  }
  if (fam == Family::GU) r *= q + 1;
  return r;
}

}  // namespace ctexp
