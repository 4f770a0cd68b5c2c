#include "ctexp/finite_field.hpp"

#include <algorithm>
#include <stdexcept>

namespace ctexp {

uint64_t mod_inverse(uint64_t a, uint64_t p) {
  // extended gcd; p prime, a != 0 mod p
  int64_t t = 0, nt = 1;
  int64_t r = int64_t(p), nr = int64_t(a % p);
  while (nr != 0) {
    int64_t qq = r / nr;
    std::swap(t -= qq * nt, nt);
    std::swap(r -= qq * nr, nr);
  }
  if (r != 1) throw std::invalid_argument("mod_inverse: not invertible");
  if (t < 0) t += int64_t(p);
  return uint64_t(t);
}

namespace {

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<uint64_t> prime_factors(uint64_t n) {
  std::vector<uint64_t> out;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// --- dense polynomial helpers over F_p (coefficients ascending) ---

using Poly = std::vector<uint32_t>;

void poly_trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mul_mod(const Poly& a, const Poly& b, const Poly& f, uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = uint32_t((c[i + j] + uint64_t(a[i]) * b[j]) % p);
  }
  // reduce mod monic f
  size_t df = f.size() - 1;
  for (size_t i = c.size(); i-- > df;) {
    if (c[i] == 0) continue;
    uint64_t coef = c[i];
    c[i] = 0;
    for (size_t j = 0; j < df; ++j)
      c[i - df + j] = uint32_t((c[i - df + j] + (p - f[j]) * coef) % p);
  }
  c.resize(std::min(c.size(), df));
  poly_trim(c);
  return c;
}

Poly poly_pow_mod(Poly base, uint64_t e, const Poly& f, uint64_t p) {
  Poly r = {1};
  while (e) {
    if (e & 1) r = poly_mul_mod(r, base, f, p);
    base = poly_mul_mod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, uint64_t p) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    // a mod b
    uint64_t lead_inv = mod_inverse(b.back(), p);
    while (a.size() >= b.size()) {
      if (a.back() == 0) {
        a.pop_back();
        continue;
      }
      uint64_t c = a.back() * lead_inv % p;
      size_t shift = a.size() - b.size();
      for (size_t j = 0; j < b.size(); ++j)
        a[shift + j] = uint32_t((a[shift + j] + (p - b[j]) * c % p) % p);
      poly_trim(a);
    }
    std::swap(a, b);
  }
  return a;
}

bool rabin_irreducible(const Poly& f, uint64_t p) {
  // f monic of degree k: irreducible iff x^(p^k) == x mod f and
  // gcd(x^(p^(k/r)) - x, f) = 1 for every prime r | k.
  uint32_t k = uint32_t(f.size() - 1);
  Poly x = {0, 1};
  if (k == 1) return true;
  uint64_t pk = 1;
  for (uint32_t i = 0; i < k; ++i) pk *= p;
  Poly xpk = poly_pow_mod(x, pk, f, p);
  Poly diff = xpk;
  diff.resize(std::max<size_t>(diff.size(), 2), 0);
  diff[1] = uint32_t((diff[1] + p - 1) % p);
  poly_trim(diff);
  if (!diff.empty()) return false;
  for (uint64_t r : prime_factors(k)) {
    uint64_t pd = 1;
    for (uint32_t i = 0; i < k / r; ++i) pd *= p;
    Poly xp = poly_pow_mod(x, pd, f, p);
    Poly g = xp;
    g.resize(std::max<size_t>(g.size(), 2), 0);
    g[1] = uint32_t((g[1] + p - 1) % p);
    Poly gg = poly_gcd(g, f, p);
    if (!(gg.size() == 1)) return false;  // gcd must be a nonzero constant
  }
  return true;
}

Poly first_irreducible(uint64_t p, uint32_t k) {
  // monic x^k + sum c_i x^i, lower coefficients enumerated in counting order
  uint64_t count = 1;
  for (uint32_t i = 0; i < k; ++i) {
    count *= p;
    if (count > (uint64_t(1) << 40)) throw std::invalid_argument("field too large");
  }
  for (uint64_t idx = 0; idx < count; ++idx) {
    Poly f(k + 1, 0);
    uint64_t v = idx;
    for (uint32_t i = 0; i < k; ++i) {
      f[i] = uint32_t(v % p);
      v /= p;
    }
    f[k] = 1;
    if (rabin_irreducible(f, p)) return f;
  }
  throw std::logic_error("no irreducible polynomial found");
}

}  // namespace

std::unique_ptr<const FieldCtx> FieldCtx::create(uint64_t p, uint32_t k,
                                                 uint32_t base_degree,
                                                 uint32_t conj_frob,
                                                 uint64_t size_bound) {
  if (!is_prime_u64(p)) throw std::invalid_argument("p must be prime");
  if (k == 0 || k > kMaxFieldDegree) throw std::invalid_argument("bad degree");
  if (base_degree == 0 || k % base_degree != 0)
    throw std::invalid_argument("base degree must divide degree");
  uint64_t size = 1;
  for (uint32_t i = 0; i < k; ++i) {
    size *= p;
    if (size > size_bound) throw std::invalid_argument("field size exceeds bound");
  }
  auto ctx = std::unique_ptr<FieldCtx>(new FieldCtx());
  ctx->p_ = p;
  ctx->k_ = k;
  ctx->size_ = size;
  ctx->base_deg_ = base_degree;
  ctx->q_ = 1;
  for (uint32_t i = 0; i < base_degree; ++i) ctx->q_ *= p;
  ctx->conj_frob_ = conj_frob;
  ctx->modulus_ = first_irreducible(p, k);
  ctx->unit_factors_ = prime_factors(size - 1);

  // first primitive element in counting order
  const FieldCtx* c = ctx.get();
  Fe g;
  bool found = false;
  for (uint64_t idx = 1; idx < size; ++idx) {
    Fe cand = c->from_index(idx);
    if (c->order(cand) == size - 1) {
      g = cand;
      found = true;
      break;
    }
  }
  if (!found) throw std::logic_error("no primitive element");
  ctx->gen_ = g;
  ctx->subgen_ = c->pow(g, (size - 1) / (ctx->q_ - 1));
  return ctx;
}

Fe FieldCtx::zero() const {
  Fe r;
  r.f = this;
  return r;
}

Fe FieldCtx::one() const { return from_int(1); }

Fe FieldCtx::from_int(int64_t cval) const {
  Fe r;
  r.f = this;
  int64_t m = cval % int64_t(p_);
  if (m < 0) m += int64_t(p_);
  r.d[0] = uint32_t(m);
  return r;
}

Fe FieldCtx::from_digits(const std::vector<uint32_t>& digits) const {
  if (digits.size() > k_) throw std::invalid_argument("too many digits");
  Fe r;
  r.f = this;
  for (size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] >= p_) throw std::invalid_argument("digit out of range");
    r.d[i] = digits[i];
  }
  return r;
}

Fe FieldCtx::from_index(uint64_t idx) const {
  if (idx >= size_) throw std::invalid_argument("index out of range");
  Fe r;
  r.f = this;
  for (uint32_t i = 0; i < k_ && idx; ++i) {
    r.d[i] = uint32_t(idx % p_);
    idx /= p_;
  }
  return r;
}

uint64_t FieldCtx::to_index(const Fe& a) const {
  uint64_t v = 0;
  for (uint32_t i = k_; i-- > 0;) v = v * p_ + a.d[i];
  return v;
}

Fe FieldCtx::add(const Fe& a, const Fe& b) const {
  Fe r;
  r.f = this;
  for (uint32_t i = 0; i < k_; ++i) r.d[i] = (a.d[i] + b.d[i]) % uint32_t(p_);
  return r;
}

Fe FieldCtx::sub(const Fe& a, const Fe& b) const {
  Fe r;
  r.f = this;
  for (uint32_t i = 0; i < k_; ++i)
    r.d[i] = uint32_t((a.d[i] + p_ - b.d[i]) % p_);
  return r;
}

Fe FieldCtx::neg(const Fe& a) const { return sub(zero(), a); }

Fe FieldCtx::mul(const Fe& a, const Fe& b) const {
  std::array<uint64_t, 2 * kMaxFieldDegree> c{};
  for (uint32_t i = 0; i < k_; ++i) {
    if (a.d[i] == 0) continue;
    for (uint32_t j = 0; j < k_; ++j)
      c[i + j] = (c[i + j] + uint64_t(a.d[i]) * b.d[j]) % p_;
  }
  for (uint32_t i = 2 * k_ - 1; i >= k_; --i) {
    if (c[i] == 0) continue;
    uint64_t coef = c[i];
    c[i] = 0;
    for (uint32_t j = 0; j < k_; ++j)
      c[i - k_ + j] = (c[i - k_ + j] + (p_ - modulus_[j]) * coef) % p_;
    if (i == k_) break;
  }
  Fe r;
  r.f = this;
  for (uint32_t i = 0; i < k_; ++i) r.d[i] = uint32_t(c[i]);
  return r;
}

Fe FieldCtx::inv(const Fe& a) const {
  if (is_zero(a)) throw std::invalid_argument("division by zero");
  // extended Euclid in F_p[x] against the modulus
  Poly r0(modulus_.begin(), modulus_.end());
  Poly r1(a.d.begin(), a.d.begin() + k_);
  poly_trim(r1);
  Poly s0 = {}, s1 = {1};
  while (!r1.empty()) {
    // divide r0 by r1
    Poly quo;
    uint64_t lead_inv = mod_inverse(r1.back(), p_);
    Poly rem = r0;
    poly_trim(rem);
    if (rem.size() >= r1.size()) quo.assign(rem.size() - r1.size() + 1, 0);
    while (rem.size() >= r1.size() && !rem.empty()) {
      if (rem.back() == 0) {
        rem.pop_back();
        continue;
      }
      uint64_t cf = rem.back() * lead_inv % p_;
      size_t shift = rem.size() - r1.size();
      quo[shift] = uint32_t(cf);
      for (size_t j = 0; j < r1.size(); ++j)
        rem[shift + j] = uint32_t((rem[shift + j] + (p_ - r1[j]) * cf % p_) % p_);
      poly_trim(rem);
    }
    // s_next = s0 - quo * s1
    Poly qs;
    if (!quo.empty() && !s1.empty()) {
      qs.assign(quo.size() + s1.size() - 1, 0);
      for (size_t i = 0; i < quo.size(); ++i)
        for (size_t j = 0; j < s1.size(); ++j)
          qs[i + j] = uint32_t((qs[i + j] + uint64_t(quo[i]) * s1[j]) % p_);
    }
    Poly snext(std::max(s0.size(), qs.size()), 0);
    for (size_t i = 0; i < snext.size(); ++i) {
      uint64_t v = (i < s0.size() ? s0[i] : 0) + p_ - (i < qs.size() ? qs[i] : 0) % p_;
      snext[i] = uint32_t(v % p_);
    }
    poly_trim(snext);
    r0 = r1;
    r1 = rem;
    s0 = s1;
    s1 = snext;
  }
  // r0 = gcd (nonzero constant), inverse = s0 / r0
  if (r0.size() != 1) throw std::logic_error("inv: gcd not constant");
  uint64_t scale = mod_inverse(r0[0], p_);
  Fe out;
  out.f = this;
  for (size_t i = 0; i < s0.size() && i < k_; ++i)
    out.d[i] = uint32_t(s0[i] * scale % p_);
  return out;
}

Fe FieldCtx::div(const Fe& a, const Fe& b) const { return mul(a, inv(b)); }

Fe FieldCtx::pow(const Fe& a, uint64_t e) const {
  Fe r = one();
  Fe base = a;
  while (e) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

Fe FieldCtx::pow_signed(const Fe& a, int64_t e) const {
  if (e >= 0) return pow(a, uint64_t(e));
  return pow(inv(a), uint64_t(-e));
}

Fe FieldCtx::frobenius(const Fe& a, uint32_t times) const {
  Fe r = a;
  for (uint32_t i = 0; i < times; ++i) r = pow(r, p_);
  return r;
}

Fe FieldCtx::conj(const Fe& a) const {
  if (conj_frob_ == 0) return a;
  return frobenius(a, conj_frob_);
}

bool FieldCtx::is_zero(const Fe& a) const {
  for (uint32_t i = 0; i < k_; ++i)
    if (a.d[i]) return false;
  return true;
}

bool FieldCtx::is_one(const Fe& a) const {
  if (a.d[0] != 1) return false;
  for (uint32_t i = 1; i < k_; ++i)
    if (a.d[i]) return false;
  return true;
}

bool FieldCtx::is_constant(const Fe& a) const {
  for (uint32_t i = 1; i < k_; ++i)
    if (a.d[i]) return false;
  return true;
}

uint64_t FieldCtx::order(const Fe& a) const {
  if (is_zero(a)) throw std::invalid_argument("order of zero");
  uint64_t ord = size_ - 1;
  for (uint64_t r : unit_factors_) {
    while (ord % r == 0 && is_one(pow(a, ord / r))) ord /= r;
  }
  return ord;
}

bool FieldCtx::in_subfield(const Fe& a) const { return pow(a, q_) == a; }

std::vector<Fe> FieldCtx::subfield_elements() const {
  std::vector<Fe> out;
  out.reserve(size_t(q_));
  for (uint64_t idx = 0; idx < size_; ++idx) {
    Fe x = from_index(idx);
    if (in_subfield(x)) out.push_back(x);
    if (out.size() == q_) break;
  }
  return out;
}

std::vector<Fe> FieldCtx::min_poly(const Fe& a) const {
  // orbit of a under x -> x^q
  std::vector<Fe> orbit = {a};
  Fe cur = pow(a, q_);
  while (!(cur == a)) {
    orbit.push_back(cur);
    cur = pow(cur, q_);
    if (orbit.size() > k_) throw std::logic_error("min_poly: orbit too long");
  }
  // product of (t - o) over the orbit
  std::vector<Fe> poly = {one()};
  for (const Fe& o : orbit) {
    std::vector<Fe> next(poly.size() + 1, zero());
    for (size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] = add(next[i + 1], poly[i]);
      next[i] = sub(next[i], mul(o, poly[i]));
    }
    poly = next;
  }
  for (const Fe& c : poly)
    if (!in_subfield(c)) throw std::logic_error("min_poly: coefficient outside subfield");
  return poly;
}

std::string FieldCtx::to_string(const Fe& a) const {
  std::string s = "[";
  for (uint32_t i = 0; i < k_; ++i) {
    if (i) s += ",";
    s += std::to_string(a.d[i]);
  }
  s += "]";
  return s;
}

Fe FieldCtx::parse(const std::string& s) const {
  if (s.empty()) throw std::invalid_argument("empty field element");
  if (s.front() != '[') return from_int(std::stoll(s));
  if (s.back() != ']') throw std::invalid_argument("bad field element: " + s);
  std::vector<uint32_t> digits;
  size_t pos = 1;
  while (pos < s.size() - 1) {
    size_t comma = s.find(',', pos);
    if (comma == std::string::npos || comma > s.size() - 1) comma = s.size() - 1;
    digits.push_back(uint32_t(std::stoul(s.substr(pos, comma - pos))));
    pos = comma + 1;
  }
  return from_digits(digits);
}

void prime_power_decompose(uint64_t q, uint64_t& p, uint32_t& e) {
  if (q < 2) throw std::invalid_argument("q must be a prime power >= 2");
  uint64_t d = 2;
  while (d * d <= q && q % d != 0) ++d;
  p = (d * d <= q) ? d : q;
  uint64_t v = q;
  e = 0;
  while (v % p == 0) {
    v /= p;
    ++e;
  }
  if (v != 1) throw std::invalid_argument("q is not a prime power");
}

RootCtx unit_root(uint64_t q, uint32_t s, uint64_t size_bound) {
  if (s == 0) throw std::invalid_argument("s must be >= 1");
  uint64_t p;
  uint32_t e;
  prime_power_decompose(q, p, e);
  auto ctx = FieldCtx::create(p, 2 * s * e, e, s * e, size_bound);
  const FieldCtx* f = ctx.get();
  uint64_t qs = 1;
  for (uint32_t i = 0; i < s; ++i) qs *= q;
  uint64_t target = qs + 1;
  Fe a = f->pow(f->generator(), (f->size() - 1) / target);
  if (f->order(a) != target) throw std::logic_error("unit root has wrong order");
  RootCtx rc;
  rc.field = std::shared_ptr<const FieldCtx>(std::move(ctx));
  rc.a = a;
  return rc;
}

RootCtx bilinear_root(uint64_t q, int sign, uint64_t size_bound) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  uint64_t p;
  uint32_t e;
  prime_power_decompose(q, p, e);
  auto ctx = FieldCtx::create(p, e, e, 0, size_bound);
  RootCtx rc;
  rc.a = ctx->from_int(sign);
  rc.field = std::shared_ptr<const FieldCtx>(std::move(ctx));
  return rc;
}

std::vector<Fe> admissible_lambdas(const FieldCtx& f, const Fe& a) {
  std::vector<Fe> out;
  for (uint64_t idx = 0; idx < f.size(); ++idx) {
    Fe x = f.from_index(idx);
    if (f.is_zero(f.add(f.conj(x), f.mul(a, x)))) out.push_back(x);
  }
  return out;
}

}  // namespace ctexp
