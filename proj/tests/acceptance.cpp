// Acceptance harness: one line per criterion, exit 0 only when all pass.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ctexp/pipeline.hpp"

using namespace ctexp;
namespace fs = std::filesystem;

namespace {

// Regression snapshots. No external numeric exists for these; the values were
// frozen from the first successful run and guard against drift.
constexpr double kFullLambda2Snapshot = 4.825661577841915;    // (2,2,1) full image
constexpr double kSliceLambda2Snapshot = 4.8256615778419167;  // det-1 slice
constexpr uint64_t kPlusOneOrderSnapshot = 576;               // q=3, a=+1 image

int g_pass = 0;
int g_fail = 0;
std::ostringstream g_notes;

template <typename Fn>
void criterion(int idx, const char* what, Fn&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = fn();
  } catch (const std::exception& e) {
    g_notes << "criterion " << idx << " threw: " << e.what() << "\n";
  }
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::cout << (ok ? "PASS" : "FAIL") << " " << std::setw(2) << idx << "  "
            << what << "  [" << std::fixed << std::setprecision(2) << secs
            << "s]" << std::endl;
  if (ok)
    ++g_pass;
  else
    ++g_fail;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream o;
  o << in.rdbuf();
  return o.str();
}

bool lift_conditions_hold(const FieldCtx& f, const LPoly& F, const Fe& lam,
                          const Fe& a) {
  if (!(F.sigma() + F.shifted(1) == LPoly::zero(&f))) return false;
  return F.eval(a) == lam;
}

struct GridPoint {
  uint64_t q;
  uint32_t s;
};
const GridPoint kGrid[] = {{2, 1}, {2, 2}, {3, 1}, {5, 1}};

// shared between criteria 5 and 7
std::optional<GroupBundle> g_full;
std::vector<FMat> g_slice_gens;
std::optional<GroupTable> g_slice;

bool c1_lift_round_trip() {
  for (const auto& [q, s] : kGrid)
    for (uint32_t n : {2u, 3u}) {
      RootCtx rc = unit_root(q, s);
      const FieldCtx& f = *rc.field;
      Form fm = make_form(rc.field.get(), n);
      std::vector<Fe> lams = admissible_lambdas(f, rc.a);  // q^s <= 16: all
      for (uint32_t v = 0; v < 2 * n; ++v)
        for (const Fe& lam : lams) {
          Lift lf = lift_transvection(fm, v, lam, rc.a, s);
          if (!lift_conditions_hold(f, lf.F, lam, rc.a)) return false;
          MembershipReport mr = gtau_membership(fm, lf.phi);
          if (!mr.form_preserving || !mr.det_one) return false;
        }
    }
  return true;
}

bool c2_dual_route() {
  std::ostringstream fallbacks;
  bool ok = true;
  for (const auto& [q, s] : kGrid) {
    RootCtx rc = unit_root(q, s);
    const FieldCtx& f = *rc.field;
    for (const Fe& lam : admissible_lambdas(f, rc.a)) {
      LiftSolution sol = solve_F(f, lam, rc.a, s);
      LPoly w = solve_F_window(f, lam, rc.a, s);
      ok = ok && lift_conditions_hold(f, sol.F, lam, rc.a) &&
           lift_conditions_hold(f, w, lam, rc.a);
      if (sol.used_fallback)
        fallbacks << "q=" << q << " s=" << s << " lambda=" << f.to_string(lam)
                  << "\n";
    }
  }
  fs::create_directories("acceptance_artifacts");
  std::ofstream out("acceptance_artifacts/fallback-activations.txt",
                    std::ios::trunc);
  out << fallbacks.str();
  return ok && out.good();
}

bool c3_min_poly_identities() {
  for (const auto& [q, s] : kGrid) {
    RootCtx rc = unit_root(q, s);
    const FieldCtx& f = *rc.field;
    LPoly fa = LPoly::from_coeffs(&f, 0, f.min_poly(rc.a));
    if (!(fa.sigma() == fa.shifted(-int64_t(2 * s)))) return false;
    if (!f.is_one(fa.coeff(0))) return false;
    if (fa.hi() != int64_t(2 * s)) return false;
  }
  return true;
}

bool c4_generator_sanity() {
  for (uint64_t q : {uint64_t(2), uint64_t(3)})
    for (uint32_t n : {2u, 3u, 4u}) {
      RootCtx rc = unit_root(q, 1);
      const FieldCtx& f = *rc.field;
      Form fm = make_form(rc.field.get(), n);
      LMat sh = shift_generator(fm);
      if (!is_form_preserving(fm, sh)) return false;
      if (!(sh.det() == LPoly::monomial(f.neg(f.one()), -1))) return false;
      std::vector<Fe> sub = f.subfield_elements();
      for (const Fe& a : sub)
        for (const Fe& b : sub)
          for (const Fe& c : sub)
            for (const Fe& d : sub) {
              if (!f.is_one(f.sub(f.mul(a, d), f.mul(b, c)))) continue;
              LMat g = l0_embed(fm, Mat2{a, b, c, d});
              MembershipReport mr = gtau_membership(fm, g);
              if (!mr.form_preserving || !mr.det_one) return false;
            }
    }
  return true;
}

bool c5_desk_scale_surjectivity() {
  RunConfig cfg;  // full-report defaults: n=2, q=2, s=1
  cfg.use_cache = false;
  g_full = build_group(cfg);
  const GroupBundle& b = *g_full;

  BigInt su = classical_order(Family::SU, 4, 2);
  BigInt gu = classical_order(Family::GU, 4, 2);
  BigInt ord(b.table.size());
  if (ord % su != 0) return false;
  if (gu % ord != 0) return false;

  g_slice_gens = det_one_generators(b.ctx, b.gen_images);
  EnumerateOptions opt;
  opt.limit = uint64_t(1) << 20;
  g_slice = enumerate(g_slice_gens, opt);
  if (BigInt(g_slice->size()) != su) return false;

  const FieldCtx& f = *b.ctx.field;
  for (uint32_t v = 0; v < 4; ++v) {
    int nontrivial = 0;
    for (const Fe& lam : admissible_lambdas(f, b.ctx.a)) {
      if (f.is_zero(lam)) continue;
      ++nontrivial;
      FMat t = finite_transvection(b.ctx, v, lam);
      if (!membership(b.table, t)) return false;
      if (!membership(*g_slice, t)) return false;
    }
    if (nontrivial != 1) return false;  // q^s - 1
  }
  return true;
}

bool c6_bilinear_evaluations() {
  RootCtx rm = bilinear_root(3, -1);
  Form fmm = make_form(rm.field.get(), 2);
  for (const auto& g : build_generating_set(fmm).gens) {
    BilinearReport br = bilinear_specialize_check(fmm, g.m, rm.a);
    if (!br.alternating || !br.preserves_form) return false;
  }
  RunConfig cfg;
  cfg.n = 2;
  cfg.q = 3;
  cfg.s = 0;
  cfg.a_sign = -1;
  cfg.use_cache = false;
  GroupBundle bm = build_group(cfg);
  if (BigInt(bm.table.size()) != classical_order(Family::Sp, 4, 3)) return false;

  RootCtx rp = bilinear_root(3, +1);
  Form fmp = make_form(rp.field.get(), 2);
  for (const auto& g : build_generating_set(fmp).gens) {
    BilinearReport br = bilinear_specialize_check(fmp, g.m, rp.a);
    if (!br.symmetric || !br.preserves_form) return false;
  }
  cfg.a_sign = +1;
  GroupBundle bp = build_group(cfg);
  return bp.table.size() == kPlusOneOrderSnapshot;
}

uint32_t distinct_images(const std::vector<FMat>& gens) {
  std::set<std::vector<uint8_t>> enc;
  for (const FMat& g : gens) enc.insert(fmat_encode(g));
  return uint32_t(enc.size());
}

bool c7_cayley_expansion() {
  if (!g_full || !g_slice) return false;

  CayleyGraph cgf = group_graph(*g_full);
  if (cgf.k != distinct_images(g_full->gen_images)) return false;
  Graph gf = graph_from_cayley(cgf);
  if (!is_connected(gf)) return false;
  IterativeReport itf = lambda2_iterative(gf, 1e-6, 300, 1);
  if (!(itf.residual2 <= 1e-6)) return false;
  if (!(itf.lambda2 <= double(gf.k) - 0.05)) return false;
  if (std::abs(itf.lambda2 - kFullLambda2Snapshot) > 1e-6) return false;

  CayleyGraph cgs = build_cayley(*g_slice, g_slice_gens, g_full->gen_labels);
  if (cgs.k != distinct_images(g_slice_gens)) return false;
  Graph gs = graph_from_cayley(cgs);
  if (!is_connected(gs)) return false;
  IterativeReport its = lambda2_iterative(gs, 1e-6, 300, 1);
  if (!(its.residual2 <= 1e-6)) return false;
  if (!(its.lambda2 <= double(gs.k) - 0.05)) return false;
  return std::abs(its.lambda2 - kSliceLambda2Snapshot) <= 1e-6;
}

Graph from_edges(uint64_t n,
                 const std::vector<std::pair<uint32_t, uint32_t>>& edges) {
  std::vector<std::vector<uint32_t>> adj(n);
  for (const auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  Graph g;
  g.n = n;
  g.k = uint32_t(adj[0].size());
  g.neighbors.resize(n * g.k);
  for (uint64_t i = 0; i < n; ++i) {
    if (adj[i].size() != g.k) throw std::logic_error("not regular");
    std::sort(adj[i].begin(), adj[i].end());
    std::copy(adj[i].begin(), adj[i].end(), g.neighbors.begin() + i * g.k);
  }
  return g;
}

Graph complete_graph(uint32_t n) {
  std::vector<std::pair<uint32_t, uint32_t>> e;
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = i + 1; j < n; ++j) e.push_back({i, j});
  return from_edges(n, e);
}

Graph cycle_graph(uint32_t n) {
  std::vector<std::pair<uint32_t, uint32_t>> e;
  for (uint32_t i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
  return from_edges(n, e);
}

Graph petersen_graph() {
  std::vector<std::pair<uint32_t, uint32_t>> e;
  for (uint32_t i = 0; i < 5; ++i) {
    e.push_back({i, (i + 1) % 5});
    e.push_back({i, i + 5});
    e.push_back({i + 5, ((i + 2) % 5) + 5});
  }
  return from_edges(10, e);
}

struct Lcg {
  uint64_t state;
  explicit Lcg(uint64_t seed) : state(seed * 0x9e3779b97f4a7c15ull + 1) {}
  uint64_t next() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return state >> 11;
  }
};

// pairing model; retries until simple and connected
Graph random_regular(uint32_t n, uint32_t k, uint64_t seed) {
  for (uint64_t attempt = 0;; ++attempt) {
    Lcg rng(seed + attempt * 1000003);
    std::vector<uint32_t> stubs;
    stubs.reserve(size_t(n) * k);
    for (uint32_t v = 0; v < n; ++v)
      for (uint32_t j = 0; j < k; ++j) stubs.push_back(v);
    for (size_t i = stubs.size(); i > 1; --i)
      std::swap(stubs[i - 1], stubs[rng.next() % i]);
    std::set<std::pair<uint32_t, uint32_t>> seen;
    bool good = true;
    for (size_t i = 0; i + 1 < stubs.size() && good; i += 2) {
      uint32_t u = stubs[i], v = stubs[i + 1];
      if (u == v) good = false;
      if (good && !seen.insert({std::min(u, v), std::max(u, v)}).second)
        good = false;
    }
    if (!good) continue;
    Graph g = from_edges(
        n, std::vector<std::pair<uint32_t, uint32_t>>(seen.begin(), seen.end()));
    if (is_connected(g)) return g;
  }
}

bool spectrum_matches(const Graph& g, std::vector<double> expected) {
  std::vector<double> got = spectrum_dense(g);
  std::sort(expected.rbegin(), expected.rend());
  if (got.size() != expected.size()) return false;
  for (size_t i = 0; i < got.size(); ++i)
    if (std::abs(got[i] - expected[i]) > 1e-8) return false;
  return true;
}

bool c8_spectral_oracles() {
  if (!spectrum_matches(complete_graph(6), {5, -1, -1, -1, -1, -1}))
    return false;
  if (!spectrum_matches(cycle_graph(6), {2, 1, 1, -1, -1, -2})) return false;
  if (!spectrum_matches(petersen_graph(),
                        {3, 1, 1, 1, 1, 1, -2, -2, -2, -2}))
    return false;

  Lcg rng(777);
  for (int i = 0; i < 10; ++i) {
    uint32_t k = 3 + uint32_t(rng.next() % 3);
    uint32_t n = 24 + uint32_t(rng.next() % 489);
    if ((uint64_t(n) * k) % 2 != 0) ++n;
    Graph g = random_regular(n, k, 1000 + i);
    std::vector<double> dense = spectrum_dense(g);
    IterativeReport it = lambda2_iterative(g, 1e-6, 300, 7);
    if (!it.converged) return false;
    if (std::abs(it.lambda2 - dense[1]) > 1e-6) return false;
    if (std::abs(it.lambda_min - dense.back()) > 1e-6) return false;
  }

  return vertex_expansion_exact(complete_graph(6)) == Rational(6, 5);
}

bool c9_growth_cross_check() {
  for (uint32_t m : {2u, 3u, 4u}) {
    GrowthEnum e = coxeter_growth_enumerate(m, 12);
    SeriesCoeffs f = poincare_formula(m - 1, 12);
    for (size_t d = 0; d <= 12; ++d)
      if (e.counts.coeffs[d] != f.coeffs[d]) return false;
    for (size_t i = 0; i < e.elements.size(); ++i)
      if (length_by_inversions(e.elements[i]) != e.depth[i]) return false;
  }
  return true;
}

bool c10_covolume_bounds() {
  for (uint32_t n : {1u, 2u, 3u})
    for (uint64_t q : {uint64_t(2), uint64_t(3)}) {
      std::vector<Rational> sums = covolume_partial_sums(n, q, 40);
      Rational bound = covolume_closed_form(n, q);
      for (size_t d = 0; d < sums.size(); ++d) {
        if (d > 0 && !(sums[d] > sums[d - 1])) return false;
        if (!(sums[d] < bound)) return false;
      }
    }
  return true;
}

bool c11_eventually_faithful() {
  RootCtx rc = unit_root(2, 1);
  Form fm = make_form(rc.field.get(), 2);
  GenSet gs = build_generating_set(fm);
  Lcg rng(42);
  int made = 0;
  while (made < 20) {
    uint32_t len = 1 + uint32_t(rng.next() % 8);
    LMat g = LMat::identity(rc.field.get(), 4);
    for (uint32_t i = 0; i < len; ++i)
      g = g * gs.gens[rng.next() % gs.gens.size()].m;
    if (g.is_identity()) continue;
    TrivialSpecReport tr = trivial_specializations(g, 2, 4);
    if (!tr.trivial_s.empty()) return false;
    // entries of a length <= 8 word live in t^[-8, 8], so the count of
    // evaluation points that kill any entry is finite and at most 16
    if (tr.root_bound < 0 || tr.root_bound > 16) return false;
    ++made;
  }
  return true;
}

bool c12_determinism() {
  auto run_once = [](unsigned threads, const std::string& leaf) {
    RunConfig cfg;  // full-report at (2, 2, 1)
    cfg.threads = threads;
    cfg.out_dir = "acceptance_artifacts/det-" + leaf;
    cfg.cache_dir = cfg.out_dir + "-cache";
    cfg.use_cache = true;
    fs::remove_all(cfg.out_dir);
    fs::remove_all(cfg.cache_dir);
    return run_or_throw(cfg);
  };
  RunResult r1 = run_once(1, "t1");
  RunResult r2 = run_once(4, "t4");
  RunResult r3 = run_once(1, "t1b");
  if (r1.artifacts.size() != 3 || r2.artifacts.size() != 3 ||
      r3.artifacts.size() != 3)
    return false;
  for (size_t i = 0; i < 3; ++i) {
    std::string a = slurp(r1.artifacts[i]);
    if (a.empty()) return false;
    if (a != slurp(r2.artifacts[i])) return false;
    if (a != slurp(r3.artifacts[i])) return false;
  }
  std::string t1 = slurp(r1.values.at("cache_path"));
  return !t1.empty() && t1 == slurp(r2.values.at("cache_path")) &&
         t1 == slurp(r3.values.at("cache_path"));
}

}  // namespace

int main() {
  criterion(1, "transvection lift round trip on the (q, s) grid",
            c1_lift_round_trip);
  criterion(2, "chain and window solvers agree; fallbacks listed",
            c2_dual_route);
  criterion(3, "minimal polynomial identities", c3_min_poly_identities);
  criterion(4, "generator sanity across n and q", c4_generator_sanity);
  criterion(5, "finite image order and determinant-one slice at (2, 2, 1)",
            c5_desk_scale_surjectivity);
  criterion(6, "alternating and symmetric evaluations at q = 3",
            c6_bilinear_evaluations);
  criterion(7, "Cayley expansion at (2, 2, 1)", c7_cayley_expansion);
  criterion(8, "spectral oracles and exact expansion constant",
            c8_spectral_oracles);
  criterion(9, "affine growth counts match the series formula",
            c9_growth_cross_check);
  criterion(10, "covolume partial sums bounded by the closed form",
            c10_covolume_bounds);
  criterion(11, "random words stay nontrivial under evaluation",
            c11_eventually_faithful);
  criterion(12, "byte-identical artifacts across reruns and thread counts",
            c12_determinism);

  std::cout << g_pass << "/12 criteria passed" << std::endl;
  if (!g_notes.str().empty()) std::cout << "notes:\n" << g_notes.str();
  return g_fail == 0 ? 0 : 1;
}
