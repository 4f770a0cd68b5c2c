#include "CLI11.hpp"
#include "ctexp/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Finite specializations, Cayley graphs, spectral reports and growth "
      "series for the twisted Laurent matrix group family"};

  ctexp::RunConfig cfg;
  std::string cache_flag;
  bool no_cache = false;

  app.add_option("--mode", cfg.mode,
                 "lift | specialize | enumerate | graph | spectrum | cheeger | "
                 "growth | covolume | full-report");
  app.add_option("--n", cfg.n, "block rank for group runs, series parameter otherwise");
  app.add_option("--q", cfg.q, "prime power");
  app.add_option("--s", cfg.s, "extension degree; 0 evaluates at +-1 over F_q");
  app.add_option("--a", cfg.a_sign, "evaluation sign for s = 0 runs (+1 or -1)");
  app.add_option("--m", cfg.m, "affine period for growth runs");
  app.add_option("--L", cfg.L, "series truncation degree");
  app.add_option("--limit", cfg.limit, "element cap for enumerations");
  app.add_option("--tol", cfg.tol, "eigenvalue residual tolerance");
  app.add_option("--max-iter", cfg.max_iter, "iteration cap for the eigensolver");
  app.add_option("--seed", cfg.seed, "seed for iterative solves");
  app.add_option("--threads", cfg.threads, "worker threads for enumeration");
  app.add_option("--out", cfg.out_dir, "artifact directory");
  app.add_option("--cache-dir", cache_flag,
                 "group table cache directory (default: CTX_CACHE_DIR)");
  app.add_flag("--no-cache", no_cache, "disable the group table cache");
  app.add_option("--v", cfg.v_label, "basis vector for lift runs (e1..en, f1..fn)");
  app.add_option("--lambda", cfg.lambda_spec,
                 "transvection parameter: 'a' or an element index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  cfg.cache_dir = ctexp::resolve_cache_dir(cache_flag, no_cache);
  cfg.use_cache = !cfg.cache_dir.empty();
  return ctexp::run(cfg);
}
