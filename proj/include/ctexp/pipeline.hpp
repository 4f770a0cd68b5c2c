#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctexp/cayley.hpp"
#include "ctexp/spectral.hpp"
#include "ctexp/weyl.hpp"

namespace ctexp {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string mode = "full-report";
  uint32_t n = 2;       // block rank for group runs; series parameter otherwise
  uint64_t q = 2;       // prime power
  uint32_t s = 1;       // extension degree; 0 = evaluation at +-1 over F_q
  int64_t a_sign = -1;  // evaluation sign when s = 0
  uint32_t m = 3;       // affine period for growth runs
  uint32_t L = 40;      // truncation degree for series runs
  uint64_t limit = uint64_t(1) << 27;
  double tol = 1e-6;
  uint32_t max_iter = 300;
  uint64_t seed = 1;
  unsigned threads = 1;
  std::string out_dir = ".";
  std::string cache_dir;  // empty disables the cache
  bool use_cache = true;
  std::string v_label = "e1";     // lift runs
  std::string lambda_spec = "a";  // "a" or an element index
  uint64_t dense_bound = 4096;
  uint64_t exact_bound = 24;
};

struct RunResult {
  std::vector<std::string> artifacts;         // paths written, in order
  std::map<std::string, std::string> values;  // headline findings
};

// Exit codes: 0 success, 2 invalid config, 3 cap exceeded, 4 I/O failure.
int run(const RunConfig& cfg);

// Same work, errors propagate instead of mapping to exit codes.
RunResult run_or_throw(const RunConfig& cfg);

void validate(const RunConfig& cfg);  // throws std::invalid_argument

// --cache-dir wins, else CTX_CACHE_DIR, else empty; no_cache forces empty.
std::string resolve_cache_dir(const std::string& flag_dir, bool no_cache);

// Specialized generator images plus the enumerated closure, cache-aware.
struct GroupBundle {
  SpecContext ctx;
  std::vector<FMat> gen_images;
  std::vector<std::string> gen_labels;
  GroupTable table;
  bool from_cache = false;
  std::string cache_path;  // empty when caching is off
};

GroupBundle build_group(const RunConfig& cfg);
CayleyGraph group_graph(const GroupBundle& b);

// Generators rescaled into the determinant-one subgroup by powers of the
// evaluation point; throws std::invalid_argument when no power works.
std::vector<FMat> det_one_generators(const SpecContext& ctx,
                                     const std::vector<FMat>& gens);

// Lowercase hex of the canonical context header.
std::string snapshot_id(const SpecContext& ctx);

std::string report_json(const RunConfig& cfg, const SpecContext& ctx,
                        const SpectralReport& rep);
std::string growth_csv(uint32_t m, uint32_t L, uint64_t max_elements);
std::string covolume_csv(uint32_t n, uint64_t q, uint32_t L);

// write-temp-then-rename; throws IoError
void write_atomic(const std::string& path, const std::string& content);

}  // namespace ctexp
