#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ctexp/ct_core.hpp"

namespace ctexp {

using BigInt = boost::multiprecision::cpp_int;

// Dense matrix over a finite field. Entries row-major.
class FMat {
 public:
  FMat() = default;
  FMat(const FieldCtx* f, uint32_t dim);
  static FMat identity(const FieldCtx* f, uint32_t dim);

  uint32_t dim() const { return dim_; }
  const FieldCtx* field() const { return f_; }
  const Fe& at(uint32_t r, uint32_t c) const { return e_[r * dim_ + c]; }
  void set(uint32_t r, uint32_t c, const Fe& v) { e_[r * dim_ + c] = v; }

  FMat operator*(const FMat& o) const;
  bool operator==(const FMat& o) const;
  bool operator!=(const FMat& o) const { return !(*this == o); }

  FMat transpose() const;
  FMat conj_entrywise() const;
  FMat scaled(const Fe& c) const;
  Fe det() const;
  FMat inverse() const;  // throws std::domain_error on a singular matrix
  bool is_identity() const;

  std::string to_text() const;  // one row per line, entries joined by " ; "

 private:
  const FieldCtx* f_ = nullptr;
  uint32_t dim_ = 0;
  std::vector<Fe> e_;
};

// Canonical byte encoding: row-major entries, each as little-endian base-p
// digits; bit-packed when p = 2, one byte per digit for p <= 255, four
// little-endian bytes otherwise. Used as the hash key and the cache format.
size_t fmat_encoded_size(const FieldCtx& f, uint32_t dim);
std::vector<uint8_t> fmat_encode(const FMat& m);
void fmat_encode_into(const FMat& m, uint8_t* out);
FMat fmat_decode(const FieldCtx* f, uint32_t dim, const uint8_t* data,
                 size_t len);

// Everything a finite specialization needs to travel with: the field, the
// evaluation point and the evaluated gram matrix. Serializes to the canonical
// header embedded in cache files and reports.
struct SpecContext {
  std::shared_ptr<const FieldCtx> field;
  Fe a;
  uint32_t s = 0;  // 0 marks a bilinear specialization (a = +-1)
  uint32_t n = 0;
  FMat gram;  // evaluated form

  std::vector<uint8_t> header_bytes() const;
};

SpecContext make_spec_context(const RootCtx& rc, uint32_t s, uint32_t n);

// Entrywise evaluation at t = a; multiplicative in g. a must be nonzero.
FMat specialize(const LMat& g, const Fe& a);

// m^T * gram * conj(m) == gram
bool is_unitary(const FMat& m, const FMat& gram);

// T_v(lambda): x -> x + lambda * beta(x, v) * v over the evaluated form.
// Requires conj(lambda) + a*lambda = 0.
FMat finite_transvection(const SpecContext& ctx, uint32_t v_index,
                         const Fe& lambda);

// First c in counting order with c^(q^s - 1) = a; c * gram is hermitian.
Fe find_hermitian_scalar(const FieldCtx& f, const Fe& a, uint32_t s);

struct BilinearReport {
  bool alternating = false;    // gram^T = -gram with zero diagonal
  bool symmetric = false;      // gram^T = gram
  bool preserves_form = false; // m^T * gram * m = gram
  bool det_one = false;
};

// Specialization at a = +1 or -1 over F_q with trivial conjugation.
BilinearReport bilinear_specialize_check(const Form& fm, const LMat& g,
                                         const Fe& a);

enum class Family { SU, GU, Sp };

// Exact orders: |SU_m(q)| = q^(m(m-1)/2) * prod_{i=2}^m (q^i - (-1)^i),
// |GU_m(q)| = (q+1)|SU_m(q)|, |Sp_m(q)| = q^((m/2)^2) * prod_{i=1}^{m/2} (q^{2i} - 1).
BigInt classical_order(Family fam, uint32_t m, uint64_t qhat);

}  // namespace ctexp
