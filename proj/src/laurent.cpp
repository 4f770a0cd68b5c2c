#include "ctexp/laurent.hpp"

#include <algorithm>
#include <stdexcept>

namespace ctexp {
namespace {

void check_window(int64_t e) {
  if (e > kMaxWindow || e < -kMaxWindow)
    throw std::domain_error("exponent window out of range");
}

void check_same(const FieldCtx* a, const FieldCtx* b) {
  if (a != b) throw std::invalid_argument("mixed field contexts");
}

}  // namespace

void LPoly::normalize() {
  size_t lead = 0;
  while (lead < c_.size() && f_->is_zero(c_[lead])) ++lead;
  if (lead == c_.size()) {
    c_.clear();
    lo_ = 0;
    return;
  }
  size_t tail = c_.size();
  while (f_->is_zero(c_[tail - 1])) --tail;
  if (lead > 0) c_.erase(c_.begin(), c_.begin() + int64_t(lead));
  c_.resize(tail - lead);
  lo_ += int64_t(lead);
  check_window(lo_);
  check_window(lo_ + int64_t(c_.size()) - 1);
}

LPoly LPoly::zero(const FieldCtx* f) {
  LPoly r;
  r.f_ = f;
  return r;
}

LPoly LPoly::constant(const Fe& c) {
  LPoly r;
  r.f_ = c.f;
  r.lo_ = 0;
  r.c_ = {c};
  r.normalize();
  return r;
}

LPoly LPoly::monomial(const Fe& c, int64_t e) {
  check_window(e);
  LPoly r;
  r.f_ = c.f;
  r.lo_ = e;
  r.c_ = {c};
  r.normalize();
  return r;
}

LPoly LPoly::t_power(const FieldCtx* f, int64_t e) {
  return monomial(f->one(), e);
}

LPoly LPoly::from_coeffs(const FieldCtx* f, int64_t lo, std::vector<Fe> coeffs) {
  LPoly r;
  r.f_ = f;
  r.lo_ = lo;
  r.c_ = std::move(coeffs);
  r.normalize();
  return r;
}

Fe LPoly::coeff(int64_t e) const {
  if (c_.empty() || e < lo_ || e >= lo_ + int64_t(c_.size())) return f_->zero();
  return c_[size_t(e - lo_)];
}

bool LPoly::is_constant() const {
  return c_.empty() || (c_.size() == 1 && lo_ == 0);
}

LPoly LPoly::operator+(const LPoly& o) const {
  check_same(f_, o.f_);
  if (c_.empty()) return o;
  if (o.c_.empty()) return *this;
  int64_t nlo = std::min(lo_, o.lo_);
  int64_t nhi = std::max(hi(), o.hi());
  std::vector<Fe> out(size_t(nhi - nlo + 1), f_->zero());
  for (size_t i = 0; i < c_.size(); ++i)
    out[size_t(lo_ + int64_t(i) - nlo)] = c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) {
    size_t j = size_t(o.lo_ + int64_t(i) - nlo);
    out[j] = f_->add(out[j], o.c_[i]);
  }
  return from_coeffs(f_, nlo, std::move(out));
}

LPoly LPoly::operator-() const {
  LPoly r = *this;
  for (Fe& c : r.c_) c = f_->neg(c);
  return r;
}

LPoly LPoly::operator-(const LPoly& o) const { return *this + (-o); }

LPoly LPoly::operator*(const LPoly& o) const {
  check_same(f_, o.f_);
  if (c_.empty() || o.c_.empty()) return zero(f_);
  std::vector<Fe> out(c_.size() + o.c_.size() - 1, f_->zero());
  for (size_t i = 0; i < c_.size(); ++i) {
    if (f_->is_zero(c_[i])) continue;
    for (size_t j = 0; j < o.c_.size(); ++j)
      out[i + j] = f_->add(out[i + j], f_->mul(c_[i], o.c_[j]));
  }
  return from_coeffs(f_, lo_ + o.lo_, std::move(out));
}

bool LPoly::operator==(const LPoly& o) const {
  if (f_ != o.f_) return false;
  if (c_.empty() || o.c_.empty()) return c_.empty() && o.c_.empty();
  return lo_ == o.lo_ && c_ == o.c_;
}

LPoly LPoly::scaled(const Fe& c) const {
  if (f_->is_zero(c)) return zero(f_);
  LPoly r = *this;
  for (Fe& x : r.c_) x = f_->mul(x, c);
  r.normalize();
  return r;
}

LPoly LPoly::shifted(int64_t e) const {
  if (c_.empty()) return *this;
  LPoly r = *this;
  r.lo_ += e;
  check_window(r.lo_);
  check_window(r.hi());
  return r;
}

LPoly LPoly::sigma() const {
  if (c_.empty()) return *this;
  LPoly r;
  r.f_ = f_;
  r.lo_ = -hi();
  r.c_.assign(c_.rbegin(), c_.rend());
  return r;
}

Fe LPoly::eval(const Fe& a) const {
  if (f_->is_zero(a)) throw std::invalid_argument("eval at zero");
  if (c_.empty()) return f_->zero();
  Fe acc = f_->zero();
  for (size_t i = c_.size(); i-- > 0;) acc = f_->add(f_->mul(acc, a), c_[i]);
  return f_->mul(acc, f_->pow_signed(a, lo_));
}

LPoly LPoly::divide_exact(const LPoly& g) const {
  check_same(f_, g.f_);
  if (g.c_.empty()) throw std::invalid_argument("division by zero polynomial");
  if (c_.empty()) return zero(f_);
  // strip t powers: both now ordinary with nonzero constant term
  if (c_.size() < g.c_.size())
    throw std::domain_error("not divisible in the Laurent ring");
  std::vector<Fe> rem = c_;
  std::vector<Fe> quo(c_.size() - g.c_.size() + 1, f_->zero());
  Fe lead_inv = f_->inv(g.c_.back());
  const size_t dg = g.c_.size() - 1;
  for (size_t ii = rem.size(); ii > dg; --ii) {
    size_t i = ii - 1;
    if (f_->is_zero(rem[i])) continue;
    Fe cf = f_->mul(rem[i], lead_inv);
    size_t shift = i - dg;
    quo[shift] = cf;
    for (size_t j = 0; j <= dg; ++j)
      rem[shift + j] = f_->sub(rem[shift + j], f_->mul(cf, g.c_[j]));
  }
  for (const Fe& r : rem)
    if (!f_->is_zero(r)) throw std::domain_error("not divisible in the Laurent ring");
  return from_coeffs(f_, lo_ - g.lo_, std::move(quo));
}

bool LPoly::in_subfield() const {
  for (const Fe& c : c_)
    if (!f_->in_subfield(c)) return false;
  return true;
}

LPoly LPoly::transport(const FieldCtx* target) const {
  if (target == f_) return *this;
  if (target->p() != f_->p())
    throw std::invalid_argument("transport across different characteristics");
  LPoly r;
  r.f_ = target;
  r.lo_ = lo_;
  r.c_.reserve(c_.size());
  for (const Fe& c : c_) {
    if (!f_->is_constant(c))
      throw std::invalid_argument("transport of non-prime-field coefficient");
    r.c_.push_back(target->from_int(int64_t(c.d[0])));
  }
  r.normalize();
  return r;
}

std::string LPoly::to_string() const {
  if (c_.empty()) return "0";
  std::string s;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (f_->is_zero(c_[i])) continue;
    if (!s.empty()) s += " + ";
    if (f_->is_constant(c_[i]))
      s += std::to_string(c_[i].d[0]);
    else
      s += f_->to_string(c_[i]);
    s += "*t^" + std::to_string(lo_ + int64_t(i));
  }
  return s;
}

}  // namespace ctexp
