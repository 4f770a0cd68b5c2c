#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctexp/errors.hpp"
#include "ctexp/specialize.hpp"

namespace ctexp {

// The enumerated finite group. Elements are stored by canonical byte
// encoding; indices are BFS discovery order with lexicographic tie-breaking
// inside each layer, so the table is independent of thread count.
class GroupTable {
 public:
  GroupTable() = default;
  GroupTable(const FieldCtx* f, uint32_t dim, uint32_t gen_count);

  uint64_t size() const { return count_; }
  uint32_t dim() const { return dim_; }
  uint32_t gen_count() const { return gen_count_; }
  const FieldCtx* field() const { return f_; }
  size_t elem_bytes() const { return elem_bytes_; }

  FMat element(uint64_t index) const;
  const uint8_t* encoding(uint64_t index) const;
  uint32_t word_length(uint64_t index) const { return word_length_[index]; }
  const std::vector<uint32_t>& word_lengths() const { return word_length_; }
  const std::vector<uint8_t>& blob() const { return enc_; }

  std::optional<uint64_t> find(const FMat& m) const;
  std::optional<uint64_t> find_encoded(const uint8_t* enc) const;

  // append assumes the caller keeps BFS order; finalize builds the lookup
  void append(const uint8_t* enc, uint32_t depth);
  void finalize();

  bool operator==(const GroupTable& o) const {
    return dim_ == o.dim_ && gen_count_ == o.gen_count_ && enc_ == o.enc_ &&
           word_length_ == o.word_length_;
  }

 private:
  const FieldCtx* f_ = nullptr;
  uint32_t dim_ = 0;
  uint32_t gen_count_ = 0;
  size_t elem_bytes_ = 0;
  uint64_t count_ = 0;
  std::vector<uint8_t> enc_;
  std::vector<uint32_t> word_length_;
  std::vector<uint64_t> sorted_;  // indices ordered by encoding
};

struct EnumerateOptions {
  uint64_t limit = uint64_t(1) << 27;
  bool allow_identity = false;
  unsigned threads = 1;
};

// Full BFS closure of the generated group. Throws CapExceededError when the
// group outgrows opt.limit.
GroupTable enumerate(const std::vector<FMat>& gens,
                     const EnumerateOptions& opt = {});

std::optional<uint64_t> membership(const GroupTable& table, const FMat& m);

// Undirected k-regular Cayley graph on the enumerated group, k = number of
// distinct generators. Neighbor lists sorted ascending.
struct CayleyGraph {
  uint64_t n = 0;
  uint32_t k = 0;
  std::vector<uint32_t> neighbors;          // n*k entries, vertex-major
  std::vector<uint8_t> edge_gen;            // generator index per entry
  std::vector<std::string> gen_labels;      // distinct generators, in order
  std::vector<std::string> merged_labels;   // dropped as coincident images

  const uint32_t* row(uint64_t v) const { return neighbors.data() + v * k; }
};

CayleyGraph build_cayley(const GroupTable& table, const std::vector<FMat>& gens,
                         const std::vector<std::string>& labels);

// "u v" per line, u < v, ascending
std::string export_edge_list(const CayleyGraph& g);
// graphviz text with generator labels on edges
std::string export_dot(const CayleyGraph& g);

// Versioned cache image: magic, version, context header, then the table.
std::vector<uint8_t> group_cache_bytes(const GroupTable& table,
                                       const SpecContext& ctx);
// Throws std::runtime_error on malformed bytes or a context mismatch.
GroupTable parse_group_cache(const std::vector<uint8_t>& bytes,
                             const SpecContext& expect);

// Atomic write (temp file + rename). Throws std::runtime_error on I/O failure.
void save_group_cache(const std::string& path, const GroupTable& table,
                      const SpecContext& ctx);
// Missing file or stale/mismatched header -> nullopt.
std::optional<GroupTable> load_group_cache(const std::string& path,
                                           const SpecContext& expect);

std::string cache_file_name(const std::string& prefix, uint32_t n, uint64_t q,
                            uint32_t s);

}  // namespace ctexp
