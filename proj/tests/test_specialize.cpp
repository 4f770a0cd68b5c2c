#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ctexp/specialize.hpp"
#include "doctest.h"

using namespace ctexp;

namespace {

struct Lcg {
  uint64_t s;
  explicit Lcg(uint64_t seed) : s(seed) {}
  uint64_t next() {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return s >> 33;
  }
};

LMat random_word(const GenSet& gs, Lcg& rng, int len) {
  LMat w = LMat::identity(gs.gens[0].m.field(), gs.gens[0].m.dim());
  for (int i = 0; i < len; ++i) w = w * gs.gens[rng.next() % gs.gens.size()].m;
  return w;
}

}  // namespace

TEST_CASE("specialization of the shift generator") {
  RootCtx rc = unit_root(2, 1);
  const FieldCtx& f = *rc.field;
  Form fm = make_form(rc.field.get(), 2);
  FMat m = specialize(shift_generator(fm), rc.a);
  CHECK(m.at(1, 0) == f.one());
  CHECK(m.at(2, 1) == f.one());
  CHECK(m.at(3, 2) == f.one());
  CHECK(m.at(0, 3) == f.inv(rc.a));
  CHECK(m.at(0, 3) == f.pow(rc.a, 2));
  int nonzero = 0;
  for (uint32_t i = 0; i < 4; ++i)
    for (uint32_t j = 0; j < 4; ++j)
      if (!f.is_zero(m.at(i, j))) ++nonzero;
  CHECK(nonzero == 4);

  CHECK(specialize(LMat::identity(rc.field.get(), 4), rc.a).is_identity());
  CHECK_THROWS_AS(specialize(shift_generator(fm), f.zero()), std::invalid_argument);
}

TEST_CASE("specialization is multiplicative and commutes with sigma") {
  for (uint32_t s = 1; s <= 2; ++s) {
    RootCtx rc = unit_root(2, s);
    Form fm = make_form(rc.field.get(), 2);
    GenSet gs = build_generating_set(fm);
    Lcg rng(2024 + s);
    for (int trial = 0; trial < 100; ++trial) {
      LMat g = random_word(gs, rng, 1 + int(rng.next() % 5));
      LMat h = random_word(gs, rng, 1 + int(rng.next() % 5));
      CHECK(specialize(g * h, rc.a) == specialize(g, rc.a) * specialize(h, rc.a));
      CHECK(specialize(g.sigma_entrywise(), rc.a) ==
            specialize(g, rc.a).conj_entrywise());
      CHECK(specialize(g, rc.a).det() == g.det().eval(rc.a));
    }
  }
}

TEST_CASE("unitarity of specialized generators and lifts") {
  struct Case {
    uint64_t q;
    uint32_t s;
  };
  for (Case c : {Case{2, 1}, Case{3, 1}, Case{2, 2}}) {
    RootCtx rc = unit_root(c.q, c.s);
    const FieldCtx& f = *rc.field;
    SpecContext ctx = make_spec_context(rc, c.s, 2);
    Form fm = make_form(rc.field.get(), 2);

    CHECK(is_unitary(FMat::identity(rc.field.get(), 4), ctx.gram));

    FMat sh = specialize(shift_generator(fm), rc.a);
    CHECK(is_unitary(sh, ctx.gram));
    CHECK_FALSE(f.is_one(sh.det()));

    FMat bad = FMat::identity(rc.field.get(), 4);
    bad.set(0, 0, rc.a);
    CHECK_FALSE(is_unitary(bad, ctx.gram));

    for (uint32_t v = 0; v < 4; ++v)
      for (const Fe& lam : admissible_lambdas(f, rc.a)) {
        Lift lift = lift_transvection(fm, v, lam, rc.a, c.s);
        FMat img = specialize(lift.phi, rc.a);
        CHECK(is_unitary(img, ctx.gram));
        CHECK(f.is_one(img.det()));
        CHECK(img == finite_transvection(ctx, v, lam));
      }
  }
}

TEST_CASE("finite transvections directly") {
  RootCtx rc = unit_root(2, 1);
  const FieldCtx& f = *rc.field;
  SpecContext ctx = make_spec_context(rc, 1, 2);

  CHECK(finite_transvection(ctx, 0, f.zero()).is_identity());

  FMat t = finite_transvection(ctx, 0, rc.a);
  FMat want = FMat::identity(rc.field.get(), 4);
  want.set(0, 2, rc.a);
  CHECK(t == want);
  CHECK(f.is_one(t.det()));
  CHECK(is_unitary(t, ctx.gram));

  // products and inverses of unitary matrices stay unitary
  FMat u = t * finite_transvection(ctx, 1, rc.a) * finite_transvection(ctx, 3, rc.a);
  CHECK(is_unitary(u, ctx.gram));
  CHECK(is_unitary(u.inverse(), ctx.gram));
  CHECK((u * u.inverse()).is_identity());

  CHECK_THROWS_AS(finite_transvection(ctx, 0, f.one()), std::invalid_argument);
  CHECK_THROWS_AS(finite_transvection(ctx, 9, f.zero()), std::invalid_argument);
}

TEST_CASE("hermitian rescaling certifies the unitary predicate") {
  for (uint64_t q : {uint64_t(2), uint64_t(3)}) {
    RootCtx rc = unit_root(q, 1);
    const FieldCtx& f = *rc.field;
    SpecContext ctx = make_spec_context(rc, 1, 2);
    Fe c = find_hermitian_scalar(f, rc.a, 1);
    CHECK(f.pow(c, f.q() - 1) == rc.a);
    FMat h = ctx.gram.scaled(c);
    CHECK(h.transpose() == h.conj_entrywise());

    Form fm = make_form(rc.field.get(), 2);
    auto lams = admissible_lambdas(f, rc.a);
    REQUIRE(lams.size() >= 2);
    std::vector<FMat> sample{specialize(shift_generator(fm), rc.a),
                             finite_transvection(ctx, 1, lams[1]),
                             FMat::identity(rc.field.get(), 4)};
    FMat bad = FMat::identity(rc.field.get(), 4);
    bad.set(1, 1, rc.a);
    sample.push_back(bad);
    for (const FMat& m : sample) CHECK(is_unitary(m, ctx.gram) == is_unitary(m, h));
  }
  RootCtx rc2 = unit_root(2, 1);
  CHECK(find_hermitian_scalar(*rc2.field, rc2.a, 1) == rc2.a);
  RootCtx rc3 = unit_root(3, 1);
  CHECK(find_hermitian_scalar(*rc3.field, rc3.a, 1) == rc3.field->generator());
}

TEST_CASE("bilinear specializations at plus and minus one") {
  RootCtx rc = bilinear_root(3, -1);
  const FieldCtx& f = *rc.field;
  Form fm = make_form(rc.field.get(), 2);
  FMat gram = specialize(fm.gram, rc.a);
  for (uint32_t i = 0; i < 2; ++i)
    for (uint32_t j = 0; j < 2; ++j) {
      CHECK(gram.at(i, 2 + j) == (i == j ? f.neg(f.one()) : f.zero()));
      CHECK(gram.at(2 + i, j) == (i == j ? f.one() : f.zero()));
    }

  BilinearReport rep = bilinear_specialize_check(fm, shift_generator(fm), rc.a);
  CHECK(rep.alternating);
  CHECK_FALSE(rep.symmetric);
  CHECK(rep.preserves_form);
  CHECK(rep.det_one);

  GenSet gs = build_generating_set(fm);
  for (const auto& g : gs.gens) {
    BilinearReport r = bilinear_specialize_check(fm, g.m, rc.a);
    CHECK(r.preserves_form);
    CHECK(r.det_one);
  }

  RootCtx rp = bilinear_root(3, 1);
  Form fmp = make_form(rp.field.get(), 2);
  BilinearReport rep1 = bilinear_specialize_check(fmp, shift_generator(fmp), rp.a);
  CHECK(rep1.symmetric);
  CHECK_FALSE(rep1.alternating);
  CHECK(rep1.preserves_form);

  // char 2: +1 = -1, the form is both symmetric and alternating
  RootCtx r2 = bilinear_root(2, -1);
  Form fm2 = make_form(r2.field.get(), 2);
  BilinearReport rep2 = bilinear_specialize_check(fm2, shift_generator(fm2), r2.a);
  CHECK(rep2.symmetric);
  CHECK(rep2.alternating);
  CHECK(rep2.preserves_form);

  CHECK_THROWS_AS(bilinear_specialize_check(fm, shift_generator(fm), f.zero()),
                  std::invalid_argument);
  RootCtx r5 = bilinear_root(5, 1);
  Form fm5 = make_form(r5.field.get(), 2);
  CHECK_THROWS_AS(bilinear_specialize_check(fm5, shift_generator(fm5),
                                            r5.field->from_int(2)),
                  std::invalid_argument);
}

TEST_CASE("classical group orders") {
  CHECK(classical_order(Family::SU, 4, 2) == BigInt(25920));
  CHECK(classical_order(Family::GU, 4, 2) == BigInt(77760));
  CHECK(classical_order(Family::Sp, 4, 3) == BigInt(51840));
  CHECK(classical_order(Family::SU, 1, 2) == BigInt(1));
  CHECK(classical_order(Family::SU, 2, 2) == BigInt(6));
  CHECK(classical_order(Family::GU, 2, 2) == BigInt(18));
  CHECK(classical_order(Family::Sp, 4, 2) == BigInt(720));
  CHECK(classical_order(Family::SU, 4, 3) == BigInt(13063680));
  CHECK(classical_order(Family::Sp, 2, 5) == BigInt(120));
  CHECK_THROWS_AS(classical_order(Family::Sp, 3, 2), std::invalid_argument);
  CHECK_THROWS_AS(classical_order(Family::SU, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(classical_order(Family::SU, 4, 1), std::invalid_argument);
}

TEST_CASE("matrix byte encoding round trips") {
  struct Case {
    uint64_t q;
    uint32_t s;
    size_t bytes;
  };
  for (Case c : {Case{2, 1, 4}, Case{3, 1, 32}, Case{5, 1, 32}}) {
    RootCtx rc = unit_root(c.q, c.s);
    const FieldCtx& f = *rc.field;
    CHECK(fmat_encoded_size(f, 4) == c.bytes);
    Form fm = make_form(rc.field.get(), 2);
    GenSet gs = build_generating_set(fm);
    Lcg rng(7 * c.q + c.s);
    for (int trial = 0; trial < 25; ++trial) {
      FMat m = specialize(random_word(gs, rng, 1 + int(rng.next() % 6)), rc.a);
      auto bytes = fmat_encode(m);
      REQUIRE(bytes.size() == c.bytes);
      CHECK(fmat_decode(rc.field.get(), 4, bytes.data(), bytes.size()) == m);
    }
    CHECK_THROWS_AS(fmat_decode(rc.field.get(), 4, nullptr, 0), std::invalid_argument);
  }
}

TEST_CASE("matrix inverse and determinant over a finite field") {
  RootCtx rc = unit_root(3, 1);
  const FieldCtx& f = *rc.field;
  Lcg rng(99);
  int invertible = 0;
  for (int trial = 0; trial < 40; ++trial) {
    FMat m(rc.field.get(), 3);
    for (uint32_t i = 0; i < 3; ++i)
      for (uint32_t j = 0; j < 3; ++j)
        m.set(i, j, f.from_index(rng.next() % f.size()));
    Fe d = m.det();
    if (f.is_zero(d)) {
      CHECK_THROWS_AS(m.inverse(), std::domain_error);
      continue;
    }
    ++invertible;
    CHECK((m * m.inverse()).is_identity());
    CHECK((m.inverse() * m).is_identity());
    FMat m2(rc.field.get(), 3);
    for (uint32_t i = 0; i < 3; ++i)
      for (uint32_t j = 0; j < 3; ++j)
        m2.set(i, j, f.from_index(rng.next() % f.size()));
    CHECK((m * m2).det() == f.mul(d, m2.det()));
  }
  CHECK(invertible > 10);
}

TEST_CASE("context headers are canonical") {
  RootCtx rc = unit_root(2, 1);
  SpecContext c1 = make_spec_context(rc, 1, 2);
  SpecContext c2 = make_spec_context(unit_root(2, 1), 1, 2);
  CHECK(c1.header_bytes() == c2.header_bytes());
  SpecContext c3 = make_spec_context(unit_root(2, 2), 2, 2);
  CHECK(c1.header_bytes() != c3.header_bytes());
  SpecContext c4 = make_spec_context(rc, 1, 3);
  CHECK(c1.header_bytes() != c4.header_bytes());
  CHECK_FALSE(c1.header_bytes().empty());
}
