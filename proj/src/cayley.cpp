#include "ctexp/cayley.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

namespace ctexp {

namespace {

constexpr char kMagic[4] = {'C', 'T', 'G', 'T'};
constexpr uint8_t kVersion = 1;

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(uint8_t(v >> (8 * i)));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(uint8_t(v >> (8 * i)));
}

struct ByteReader {
  const uint8_t* p;
  size_t left;
  void need(size_t n) const {
    if (left < n) throw std::runtime_error("truncated cache image");
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(p[i]) << (8 * i);
    p += 4;
    left -= 4;
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= uint64_t(p[i]) << (8 * i);
    p += 8;
    left -= 8;
    return v;
  }
  const uint8_t* bytes(size_t n) {
    need(n);
    const uint8_t* r = p;
    p += n;
    left -= n;
    return r;
  }
};

}  // namespace

GroupTable::GroupTable(const FieldCtx* f, uint32_t dim, uint32_t gen_count)
    : f_(f),
      dim_(dim),
      gen_count_(gen_count),
      elem_bytes_(fmat_encoded_size(*f, dim)) {}

FMat GroupTable::element(uint64_t index) const {
  return fmat_decode(f_, dim_, encoding(index), elem_bytes_);
}

const uint8_t* GroupTable::encoding(uint64_t index) const {
  return enc_.data() + index * elem_bytes_;
}

void GroupTable::append(const uint8_t* enc, uint32_t depth) {
  enc_.insert(enc_.end(), enc, enc + elem_bytes_);
  word_length_.push_back(depth);
  ++count_;
}

void GroupTable::finalize() {
  sorted_.resize(count_);
  for (uint64_t i = 0; i < count_; ++i) sorted_[i] = i;
  std::sort(sorted_.begin(), sorted_.end(), [&](uint64_t a, uint64_t b) {
    return std::memcmp(encoding(a), encoding(b), elem_bytes_) < 0;
  });
}

std::optional<uint64_t> GroupTable::find_encoded(const uint8_t* enc) const {
  auto it = std::lower_bound(
      sorted_.begin(), sorted_.end(), enc, [&](uint64_t idx, const uint8_t* key) {
        return std::memcmp(encoding(idx), key, elem_bytes_) < 0;
      });
  if (it == sorted_.end() ||
      std::memcmp(encoding(*it), enc, elem_bytes_) != 0)
    return std::nullopt;
  return *it;
}

std::optional<uint64_t> GroupTable::find(const FMat& m) const {
  if (m.field() != f_ || m.dim() != dim_) return std::nullopt;
  std::vector<uint8_t> enc = fmat_encode(m);
  return find_encoded(enc.data());
}

GroupTable enumerate(const std::vector<FMat>& gens, const EnumerateOptions& opt) {
  if (gens.empty()) throw std::invalid_argument("need at least one generator");
  const FieldCtx* f = gens[0].field();
  uint32_t dim = gens[0].dim();
  for (const FMat& g : gens) {
    if (g.field() != f || g.dim() != dim)
      throw std::invalid_argument("generators live in different spaces");
    if (f->is_zero(g.det()))
      throw std::invalid_argument("generator is not invertible");
    if (!opt.allow_identity && g.is_identity())
      throw std::invalid_argument("identity generator (pass allow_identity to permit)");
  }

  GroupTable table(f, dim, uint32_t(gens.size()));
  size_t eb = table.elem_bytes();
  std::vector<uint8_t> id_enc = fmat_encode(FMat::identity(f, dim));
  table.append(id_enc.data(), 0);
  table.finalize();

  uint64_t layer_lo = 0, layer_hi = 1;
  uint32_t depth = 0;
  while (layer_lo < layer_hi) {
    ++depth;
    uint64_t width = layer_hi - layer_lo;
    unsigned nt = std::max(1u, opt.threads);
    nt = unsigned(std::min<uint64_t>(nt, width));
    std::vector<std::vector<uint8_t>> found(nt);
    auto work = [&](unsigned t) {
      uint64_t chunk = (width + nt - 1) / nt;
      uint64_t lo = layer_lo + t * chunk;
      uint64_t hi = std::min(layer_hi, lo + chunk);
      std::vector<uint8_t> enc(eb);
      for (uint64_t i = lo; i < hi; ++i) {
        FMat m = table.element(i);
        for (const FMat& g : gens) {
          FMat p = m * g;
          fmat_encode_into(p, enc.data());
          if (!table.find_encoded(enc.data()))
            found[t].insert(found[t].end(), enc.begin(), enc.end());
        }
      }
    };
    if (nt == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < nt; ++t) pool.emplace_back(work, t);
      for (auto& th : pool) th.join();
    }

    // merge candidates: sort lexicographically, drop duplicates
    std::vector<const uint8_t*> cand;
    for (const auto& blob : found)
      for (size_t off = 0; off < blob.size(); off += eb)
        cand.push_back(blob.data() + off);
    std::sort(cand.begin(), cand.end(), [&](const uint8_t* a, const uint8_t* b) {
      return std::memcmp(a, b, eb) < 0;
    });
    layer_lo = layer_hi;
    for (size_t i = 0; i < cand.size(); ++i) {
      if (i && std::memcmp(cand[i - 1], cand[i], eb) == 0) continue;
      if (table.size() >= opt.limit) throw CapExceededError(table.size());
      table.append(cand[i], depth);
    }
    layer_hi = table.size();
    table.finalize();
  }
  return table;
}

std::optional<uint64_t> membership(const GroupTable& table, const FMat& m) {
  return table.find(m);
}

CayleyGraph build_cayley(const GroupTable& table, const std::vector<FMat>& gens,
                         const std::vector<std::string>& labels) {
  if (gens.size() != labels.size())
    throw std::invalid_argument("one label per generator required");
  if (gens.empty()) throw std::invalid_argument("need at least one generator");

  // drop coincident images, keep first label
  std::vector<FMat> distinct;
  CayleyGraph g;
  for (size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].is_identity())
      throw std::invalid_argument("identity generator makes a self-loop");
    bool dup = false;
    for (const FMat& d : distinct) dup = dup || d == gens[i];
    if (dup) {
      g.merged_labels.push_back(labels[i]);
    } else {
      distinct.push_back(gens[i]);
      g.gen_labels.push_back(labels[i]);
    }
  }
  // symmetric as a set
  for (const FMat& d : distinct) {
    FMat inv = d.inverse();
    bool has = false;
    for (const FMat& e : distinct) has = has || e == inv;
    if (!has) throw std::invalid_argument("generator set is not symmetric");
  }

  g.n = table.size();
  g.k = uint32_t(distinct.size());
  if (g.n > uint64_t(UINT32_MAX))
    throw std::invalid_argument("vertex count exceeds index width");
  g.neighbors.resize(g.n * g.k);
  g.edge_gen.resize(g.n * g.k);
  for (uint64_t v = 0; v < g.n; ++v) {
    FMat m = table.element(v);
    std::vector<std::pair<uint32_t, uint8_t>> row;
    row.reserve(g.k);
    for (uint32_t j = 0; j < g.k; ++j) {
      auto idx = table.find(m * distinct[j]);
      if (!idx) throw std::logic_error("group table is not closed");
      row.emplace_back(uint32_t(*idx), uint8_t(j));
    }
    std::sort(row.begin(), row.end());
    for (uint32_t j = 0; j < g.k; ++j) {
      g.neighbors[v * g.k + j] = row[j].first;
      g.edge_gen[v * g.k + j] = row[j].second;
    }
  }
  return g;
}

std::string export_edge_list(const CayleyGraph& g) {
  std::ostringstream os;
  for (uint64_t v = 0; v < g.n; ++v)
    for (uint32_t j = 0; j < g.k; ++j) {
      uint32_t w = g.row(v)[j];
      if (v < w) os << v << " " << w << "\n";
    }
  return os.str();
}

std::string export_dot(const CayleyGraph& g) {
  std::ostringstream os;
  os << "graph cayley {\n";
  for (uint64_t v = 0; v < g.n; ++v)
    for (uint32_t j = 0; j < g.k; ++j) {
      uint32_t w = g.row(v)[j];
      if (v < w)
        os << "  " << v << " -- " << w << " [label=\""
           << g.gen_labels[g.edge_gen[v * g.k + j]] << "\"];\n";
    }
  os << "}\n";
  return os.str();
}

std::vector<uint8_t> group_cache_bytes(const GroupTable& table,
                                       const SpecContext& ctx) {
  std::vector<uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(kVersion);
  std::vector<uint8_t> hdr = ctx.header_bytes();
  put_u32(out, uint32_t(hdr.size()));
  out.insert(out.end(), hdr.begin(), hdr.end());
  put_u32(out, table.dim());
  put_u32(out, table.gen_count());
  put_u64(out, table.size());
  put_u64(out, table.elem_bytes());
  out.insert(out.end(), table.blob().begin(), table.blob().end());
  for (uint64_t i = 0; i < table.size(); ++i) put_u32(out, table.word_length(i));
  return out;
}

GroupTable parse_group_cache(const std::vector<uint8_t>& bytes,
                             const SpecContext& expect) {
  ByteReader r{bytes.data(), bytes.size()};
  const uint8_t* magic = r.bytes(4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("bad cache magic");
  if (*r.bytes(1) != kVersion) throw std::runtime_error("bad cache version");
  uint32_t hlen = r.u32();
  const uint8_t* hdr = r.bytes(hlen);
  std::vector<uint8_t> want = expect.header_bytes();
  if (hlen != want.size() || std::memcmp(hdr, want.data(), hlen) != 0)
    throw std::runtime_error("cache context mismatch");

  uint32_t dim = r.u32();
  uint32_t gen_count = r.u32();
  uint64_t count = r.u64();
  uint64_t eb = r.u64();
  GroupTable table(expect.field.get(), dim, gen_count);
  if (eb != table.elem_bytes()) throw std::runtime_error("cache element width mismatch");
  const uint8_t* blob = r.bytes(size_t(count * eb));
  std::vector<uint32_t> depths(count);
  for (uint64_t i = 0; i < count; ++i) depths[i] = r.u32();
  if (r.left != 0) throw std::runtime_error("trailing bytes in cache image");
  for (uint64_t i = 0; i < count; ++i)
    table.append(blob + i * eb, depths[i]);
  table.finalize();
  return table;
}

void save_group_cache(const std::string& path, const GroupTable& table,
                      const SpecContext& ctx) {
  std::vector<uint8_t> bytes = group_cache_bytes(table, ctx);
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              std::streamsize(bytes.size()));
    if (!out) throw std::runtime_error("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot move cache into place at " + path);
  }
}

std::optional<GroupTable> load_group_cache(const std::string& path,
                                           const SpecContext& expect) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  try {
    return parse_group_cache(bytes, expect);
  } catch (const std::runtime_error&) {
    return std::nullopt;
  }
}

std::string cache_file_name(const std::string& prefix, uint32_t n, uint64_t q,
                            uint32_t s) {
  std::ostringstream os;
  os << prefix << "-n" << n << "-q" << q << "-s" << s << ".grp";
  return os.str();
}

}  // namespace ctexp
