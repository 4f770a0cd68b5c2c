#include "ctexp/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace ctexp {

namespace {

const char* kModes[] = {"lift",    "specialize", "enumerate",
                        "graph",   "spectrum",   "cheeger",
                        "growth",  "covolume",   "full-report"};

bool is_group_mode(const std::string& mode) {
  return mode == "specialize" || mode == "enumerate" || mode == "graph" ||
         mode == "spectrum" || mode == "cheeger" || mode == "full-report";
}

std::string run_tag(const RunConfig& cfg) {
  std::ostringstream o;
  o << "n" << cfg.n << "-q" << cfg.q << "-s" << cfg.s;
  if (cfg.s == 0) o << (cfg.a_sign >= 0 ? "p" : "m");
  return o.str();
}

std::string fmt(double v) {
  std::ostringstream o;
  o << std::setprecision(17) << v;
  return o.str();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

struct Setup {
  SpecContext ctx;
  Form fm;
  std::vector<GenSet::Gen> gens;  // Laurent-ring generators
  std::vector<FMat> images;
  std::vector<std::string> labels;
};

Setup build_setup(const RunConfig& cfg) {
  RootCtx rc = cfg.s >= 1 ? unit_root(cfg.q, cfg.s)
                          : bilinear_root(cfg.q, cfg.a_sign >= 0 ? 1 : -1);
  Setup st;
  st.ctx = make_spec_context(rc, cfg.s, cfg.n);
  st.fm = make_form(rc.field.get(), cfg.n);
  GenSet gs = build_generating_set(st.fm);
  st.gens = std::move(gs.gens);
  for (const auto& g : st.gens) {
    st.images.push_back(specialize(g.m, rc.a));
    st.labels.push_back(g.label);
  }
  return st;
}

std::string enumerate_summary(const GroupBundle& b) {
  std::ostringstream o;
  o << "order = " << b.table.size() << "\n";
  std::vector<uint64_t> hist;
  for (uint32_t d : b.table.word_lengths()) {
    if (d >= hist.size()) hist.resize(d + 1, 0);
    ++hist[d];
  }
  o << "depth,count\n";
  for (size_t d = 0; d < hist.size(); ++d) o << d << "," << hist[d] << "\n";
  return o.str();
}

SpectralOptions spectral_options(const RunConfig& cfg) {
  SpectralOptions opt;
  opt.tol = cfg.tol;
  opt.max_iter = cfg.max_iter;
  opt.seed = cfg.seed;
  opt.dense_bound = cfg.dense_bound;
  opt.exact_bound = cfg.exact_bound;
  return opt;
}

}  // namespace

void validate(const RunConfig& cfg) {
  if (std::find_if(std::begin(kModes), std::end(kModes), [&](const char* m) {
        return cfg.mode == m;
      }) == std::end(kModes))
    throw std::invalid_argument("unknown mode: " + cfg.mode);
  uint64_t p = 0;
  uint32_t e = 0;
  prime_power_decompose(cfg.q, p, e);
  if (is_group_mode(cfg.mode) && cfg.n < 2)
    throw std::invalid_argument("group runs need n >= 2");
  if (cfg.mode == "lift") {
    if (cfg.n < 1) throw std::invalid_argument("lift runs need n >= 1");
    if (cfg.s < 1) throw std::invalid_argument("lift runs need s >= 1");
  }
  if (cfg.s == 0 && cfg.a_sign != 1 && cfg.a_sign != -1)
    throw std::invalid_argument("evaluation sign must be +1 or -1");
  if (cfg.mode == "growth" && cfg.m < 2)
    throw std::invalid_argument("growth runs need period m >= 2");
  if (cfg.mode == "covolume" && cfg.n < 1)
    throw std::invalid_argument("covolume runs need n >= 1");
  if (cfg.limit == 0 || cfg.max_iter == 0 || cfg.threads == 0 ||
      cfg.dense_bound == 0)
    throw std::invalid_argument("caps must be positive");
  if (!(cfg.tol > 0)) throw std::invalid_argument("tolerance must be positive");
}

std::string resolve_cache_dir(const std::string& flag_dir, bool no_cache) {
  if (no_cache) return {};
  if (!flag_dir.empty()) return flag_dir;
  const char* env = std::getenv("CTX_CACHE_DIR");
  return env ? std::string(env) : std::string();
}

GroupBundle build_group(const RunConfig& cfg) {
  Setup st = build_setup(cfg);
  GroupBundle b;
  b.ctx = std::move(st.ctx);
  b.gen_images = std::move(st.images);
  b.gen_labels = std::move(st.labels);

  if (cfg.use_cache && !cfg.cache_dir.empty()) {
    ensure_dir(cfg.cache_dir);
    std::string prefix =
        cfg.s == 0 ? (cfg.a_sign >= 0 ? "ctexp-p1" : "ctexp-m1") : "ctexp";
    b.cache_path =
        (fs::path(cfg.cache_dir) / cache_file_name(prefix, cfg.n, cfg.q, cfg.s))
            .string();
    if (auto t = load_group_cache(b.cache_path, b.ctx)) {
      b.table = std::move(*t);
      b.from_cache = true;
      return b;
    }
  }

  EnumerateOptions opt;
  opt.limit = cfg.limit;
  opt.threads = cfg.threads;
  b.table = enumerate(b.gen_images, opt);
  if (!b.cache_path.empty()) {
    try {
      save_group_cache(b.cache_path, b.table, b.ctx);
    } catch (const std::exception& e) {
      throw IoError(e.what());
    }
  }
  return b;
}

CayleyGraph group_graph(const GroupBundle& b) {
  return build_cayley(b.table, b.gen_images, b.gen_labels);
}

std::vector<FMat> det_one_generators(const SpecContext& ctx,
                                     const std::vector<FMat>& gens) {
  const FieldCtx& f = *ctx.field;
  uint32_t dim = 2 * ctx.n;
  uint64_t ord = f.order(ctx.a);
  std::vector<FMat> out;
  for (const FMat& g : gens) {
    Fe d = g.det();
    bool found = false;
    Fe c = f.one();
    for (uint64_t j = 0; j < ord; ++j) {
      if (f.is_one(f.mul(f.pow(c, dim), d))) {
        out.push_back(g.scaled(c));
        found = true;
        break;
      }
      c = f.mul(c, ctx.a);
    }
    if (!found)
      throw std::invalid_argument(
          "no scalar multiple of the generator has determinant one");
  }
  // rescaling must not break the symmetric-set property
  for (const FMat& g : out) {
    bool has_inverse = false;
    for (const FMat& h : out)
      if ((g * h).is_identity()) {
        has_inverse = true;
        break;
      }
    if (!has_inverse)
      throw std::invalid_argument(
          "determinant correction breaks the symmetric set");
  }
  return out;
}

std::string snapshot_id(const SpecContext& ctx) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (uint8_t b : ctx.header_bytes()) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 15]);
  }
  return out;
}

std::string report_json(const RunConfig& cfg, const SpecContext& ctx,
                        const SpectralReport& rep) {
  Json j;
  j["n"] = cfg.n;
  j["q"] = cfg.q;
  j["s"] = cfg.s;
  j["N"] = rep.N;
  j["k"] = rep.k;
  j["lambda2"] = rep.lambda2;
  j["residual"] = rep.residual;
  j["gap"] = rep.gap;
  j["two_sided_gap"] = rep.two_sided_gap;
  j["bipartite"] = rep.bipartite;
  if (rep.c_exact)
    j["c_exact"] = rep.c_exact->convert_to<double>();
  else
    j["c_exact"] = nullptr;
  j["snapshot_id"] = snapshot_id(ctx);
  return j.dump(2) + "\n";
}

std::string growth_csv(uint32_t m, uint32_t L, uint64_t max_elements) {
  GrowthEnum e = coxeter_growth_enumerate(m, L, max_elements);
  SeriesCoeffs f = poincare_formula(m - 1, L);
  std::ostringstream o;
  o << "rank,degree,bfs_count,formula_count,match\n";
  for (uint32_t d = 0; d <= L; ++d)
    o << (m - 1) << "," << d << "," << e.counts.coeffs[d] << ","
      << f.coeffs[d] << ","
      << (e.counts.coeffs[d] == f.coeffs[d] ? "true" : "false") << "\n";
  return o.str();
}

std::string covolume_csv(uint32_t n, uint64_t q, uint32_t L) {
  std::vector<Rational> sums = covolume_partial_sums(n, q, L);
  Rational bound = covolume_closed_form(n, q);
  std::ostringstream o;
  o << "n,q,degree,partial_sum,closed_form\n";
  for (uint32_t d = 0; d <= L; ++d)
    o << n << "," << q << "," << d << "," << sums[d] << "," << bound << "\n";
  return o.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    if (!o) throw IoError("cannot open " + tmp);
    o.write(content.data(), std::streamsize(content.size()));
    o.flush();
    if (!o) {
      std::remove(tmp.c_str());
      throw IoError("short write to " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw IoError("cannot move " + tmp + " into place");
  }
}

RunResult run_or_throw(const RunConfig& cfg) {
  validate(cfg);
  ensure_dir(cfg.out_dir);
  RunResult r;
  const std::string tag = run_tag(cfg);
  auto emit = [&](const std::string& name, const std::string& content) {
    std::string p = (fs::path(cfg.out_dir) / name).string();
    write_atomic(p, content);
    r.artifacts.push_back(p);
  };

  if (cfg.mode == "growth") {
    std::string csv = growth_csv(cfg.m, cfg.L, cfg.limit);
    emit("growth-m" + std::to_string(cfg.m) + "-L" + std::to_string(cfg.L) +
             ".csv",
         csv);
    r.values["all_match"] =
        csv.find(",false") == std::string::npos ? "true" : "false";
    return r;
  }

  if (cfg.mode == "covolume") {
    emit("covolume-n" + std::to_string(cfg.n) + "-q" + std::to_string(cfg.q) +
             "-L" + std::to_string(cfg.L) + ".csv",
         covolume_csv(cfg.n, cfg.q, cfg.L));
    r.values["closed_form"] =
        covolume_closed_form(cfg.n, cfg.q).str();
    return r;
  }

  if (cfg.mode == "lift") {
    RootCtx rc = unit_root(cfg.q, cfg.s);
    Form fm = make_form(rc.field.get(), cfg.n);
    uint32_t v = basis_index(fm, cfg.v_label);
    const FieldCtx& f = *rc.field;
    Fe lam = f.zero();
    if (cfg.lambda_spec == "a") {
      std::vector<Fe> lams = admissible_lambdas(f, rc.a);
      bool set = false;
      for (const Fe& l : lams)
        if (l == rc.a) {
          lam = l;
          set = true;
        }
      if (!set)
        for (const Fe& l : lams)
          if (!f.is_zero(l)) {
            lam = l;
            set = true;
            break;
          }
      if (!set) throw std::invalid_argument("no nonzero admissible lambda");
    } else {
      try {
        lam = f.from_index(std::stoull(cfg.lambda_spec));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad lambda selector: " + cfg.lambda_spec);
      }
    }
    Lift lf = lift_transvection(fm, v, lam, rc.a, cfg.s);
    MembershipReport mr = gtau_membership(fm, lf.phi);
    std::ostringstream o;
    o << "lift " << cfg.v_label << " n=" << cfg.n << " q=" << cfg.q
      << " s=" << cfg.s << "\n";
    o << "a = " << f.to_string(rc.a) << "\n";
    o << "lambda = " << f.to_string(lam) << "\n";
    o << "F = " << lf.F.to_string() << "\n";
    o << "fallback = " << (lf.used_fallback ? "true" : "false") << "\n";
    o << "form_preserving = " << (mr.form_preserving ? "true" : "false")
      << "\n";
    o << "det_one = " << (mr.det_one ? "true" : "false") << "\n";
    o << "phi:\n" << lf.phi.to_text();
    emit("lift-" + tag + "-" + cfg.v_label + ".txt", o.str());
    r.values["fallback"] = lf.used_fallback ? "true" : "false";
    r.values["form_preserving"] = mr.form_preserving ? "true" : "false";
    r.values["det_one"] = mr.det_one ? "true" : "false";
    return r;
  }

  if (cfg.mode == "specialize") {
    Setup st = build_setup(cfg);
    const FieldCtx& f = *st.ctx.field;
    std::ostringstream o;
    o << "specialize " << tag << "\n";
    o << "a = " << f.to_string(st.ctx.a) << "\n";
    bool all_ok = true;
    for (size_t i = 0; i < st.images.size(); ++i) {
      o << "generator " << st.labels[i] << "\n";
      o << st.images[i].to_text();
      o << "det = " << f.to_string(st.images[i].det()) << "\n";
      if (cfg.s >= 1) {
        bool u = is_unitary(st.images[i], st.ctx.gram);
        all_ok = all_ok && u;
        o << "unitary = " << (u ? "true" : "false") << "\n";
      } else {
        BilinearReport br =
            bilinear_specialize_check(st.fm, st.gens[i].m, st.ctx.a);
        all_ok = all_ok && br.preserves_form;
        o << "preserves_form = " << (br.preserves_form ? "true" : "false")
          << " alternating = " << (br.alternating ? "true" : "false")
          << " symmetric = " << (br.symmetric ? "true" : "false")
          << " det_one = " << (br.det_one ? "true" : "false") << "\n";
      }
    }
    emit("specialize-" + tag + ".txt", o.str());
    r.values["all_form_preserving"] = all_ok ? "true" : "false";
    r.values["generators"] = std::to_string(st.images.size());
    return r;
  }

  // the remaining modes enumerate the finite group
  GroupBundle b = build_group(cfg);
  r.values["order"] = std::to_string(b.table.size());
  r.values["from_cache"] = b.from_cache ? "true" : "false";
  if (!b.cache_path.empty()) r.values["cache_path"] = b.cache_path;

  if (cfg.mode == "enumerate") {
    emit("enumerate-" + tag + ".txt", enumerate_summary(b));
    return r;
  }

  CayleyGraph cg = group_graph(b);
  r.values["k"] = std::to_string(cg.k);

  if (cfg.mode == "graph") {
    emit("edges-" + tag + ".txt", export_edge_list(cg));
    emit("cayley-" + tag + ".dot", export_dot(cg));
    return r;
  }

  Graph g = graph_from_cayley(cg);
  SpectralReport rep = expansion_report(g, spectral_options(cfg));
  r.values["lambda2"] = fmt(rep.lambda2);
  r.values["gap"] = fmt(rep.gap);
  r.values["method"] = rep.method;

  if (cfg.mode == "cheeger") {
    std::ostringstream o;
    o << "N = " << rep.N << "\n";
    o << "k = " << rep.k << "\n";
    if (rep.c_exact)
      o << "c_exact = " << rep.c_exact->str() << "\n";
    else
      o << "c_exact = none (graph larger than the exhaustive bound)\n";
    o << "edge_expansion_lower = " << fmt(rep.edge_expansion_lower) << "\n";
    o << "gap = " << fmt(rep.gap) << "\n";
    emit("cheeger-" + tag + ".txt", o.str());
    r.values["c_exact"] = rep.c_exact ? rep.c_exact->str() : "none";
    r.values["edge_expansion_lower"] = fmt(rep.edge_expansion_lower);
    return r;
  }

  if (cfg.mode == "spectrum") {
    emit("report-" + tag + ".json", report_json(cfg, b.ctx, rep));
    return r;
  }

  // full-report
  emit("enumerate-" + tag + ".txt", enumerate_summary(b));
  emit("edges-" + tag + ".txt", export_edge_list(cg));
  emit("report-" + tag + ".json", report_json(cfg, b.ctx, rep));
  return r;
}

int run(const RunConfig& cfg) {
  try {
    RunResult r = run_or_throw(cfg);
    for (const std::string& a : r.artifacts) std::cout << "artifact " << a << "\n";
    for (const auto& [key, v] : r.values) std::cout << key << " = " << v << "\n";
    return 0;
  } catch (const CapExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ctexp
