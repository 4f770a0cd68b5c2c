#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace ctexp {

// Hard cap on the extension degree over the prime field. The default size
// bound p^k <= 2^20 keeps every planned run far below this.
inline constexpr uint32_t kMaxFieldDegree = 24;

inline constexpr uint64_t kDefaultFieldBound = uint64_t(1) << 20;

class FieldCtx;

// Field element: digit i is the coefficient of x^i in F_p[x]/(modulus).
// Digits at positions >= k are kept zero. Elements only make sense together
// with the FieldCtx that created them; the context must outlive its elements.
struct Fe {
  const FieldCtx* f = nullptr;
  std::array<uint32_t, kMaxFieldDegree> d{};

  bool operator==(const Fe& o) const { return f == o.f && d == o.d; }
  bool operator!=(const Fe& o) const { return !(*this == o); }
};

// Immutable description of F_{p^k} with a distinguished subfield F_q,
// q = p^base_degree. conj_frob = j means conj(x) = x^(p^j); 0 means the
// involution is trivial (bilinear specializations).
class FieldCtx {
 public:
  static std::unique_ptr<const FieldCtx> create(
      uint64_t p, uint32_t k, uint32_t base_degree = 1,
      uint32_t conj_frob = 0, uint64_t size_bound = kDefaultFieldBound);

  uint64_t p() const { return p_; }
  uint32_t k() const { return k_; }
  uint64_t size() const { return size_; }            // p^k
  uint32_t base_degree() const { return base_deg_; }
  uint64_t q() const { return q_; }                  // p^base_degree
  uint32_t conj_frob() const { return conj_frob_; }
  const std::vector<uint32_t>& modulus() const { return modulus_; }

  Fe zero() const;
  Fe one() const;
  Fe from_int(int64_t c) const;                     // constant c mod p
  Fe from_digits(const std::vector<uint32_t>& digits) const;
  Fe from_index(uint64_t idx) const;                // counting order, idx < size
  uint64_t to_index(const Fe& a) const;

  Fe add(const Fe& a, const Fe& b) const;
  Fe sub(const Fe& a, const Fe& b) const;
  Fe neg(const Fe& a) const;
  Fe mul(const Fe& a, const Fe& b) const;
  Fe inv(const Fe& a) const;
  Fe div(const Fe& a, const Fe& b) const;
  Fe pow(const Fe& a, uint64_t e) const;
  Fe pow_signed(const Fe& a, int64_t e) const;
  Fe frobenius(const Fe& a, uint32_t times = 1) const;  // x -> x^(p^times)
  Fe conj(const Fe& a) const;                           // x -> x^(p^conj_frob)

  bool is_zero(const Fe& a) const;
  bool is_one(const Fe& a) const;
  bool is_constant(const Fe& a) const;
  uint64_t order(const Fe& a) const;                // multiplicative order
  bool in_subfield(const Fe& a) const;              // a^q == a

  Fe generator() const { return gen_; }              // first primitive element
  Fe subfield_generator() const { return subgen_; }  // generates F_q^*
  std::vector<Fe> subfield_elements() const;         // counting order

  // Minimal polynomial of a over F_q, monic, coefficients ascending.
  // Throws if the coefficients fail the subfield check.
  std::vector<Fe> min_poly(const Fe& a) const;

  std::string to_string(const Fe& a) const;          // "[d0,d1,...]"
  Fe parse(const std::string& s) const;

 private:
  FieldCtx() = default;

  uint64_t p_ = 0;
  uint32_t k_ = 0;
  uint64_t size_ = 0;
  uint32_t base_deg_ = 1;
  uint64_t q_ = 0;
  uint32_t conj_frob_ = 0;
  std::vector<uint32_t> modulus_;        // length k+1, monic
  std::vector<uint64_t> unit_factors_;   // distinct primes of size-1
  Fe gen_;
  Fe subgen_;
};

struct RootCtx {
  std::shared_ptr<const FieldCtx> field;
  Fe a;
};

// Deterministic root of unity of order q^s + 1 inside F_{q^{2s}}, built as
// g^((q^{2s}-1)/(q^s+1)) for the first primitive element g in counting order.
RootCtx unit_root(uint64_t q, uint32_t s, uint64_t size_bound = kDefaultFieldBound);

// F_q itself with trivial involution, plus the constant +1 or -1.
RootCtx bilinear_root(uint64_t q, int sign, uint64_t size_bound = kDefaultFieldBound);

// q = p^e with p prime; throws std::invalid_argument otherwise.
void prime_power_decompose(uint64_t q, uint64_t& p, uint32_t& e);

// All lambda with conj(lambda) + a*lambda = 0, in counting order.
std::vector<Fe> admissible_lambdas(const FieldCtx& f, const Fe& a);

// inverse of a modulo prime p
uint64_t mod_inverse(uint64_t a, uint64_t p);

}  // namespace ctexp
