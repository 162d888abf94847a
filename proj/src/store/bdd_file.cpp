#include "c4/store/bdd_file.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <functional>
#include <unordered_map>

namespace c4::store {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t off) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{b[off + i]} << (8 * i);
  return v;
}

std::uint64_t get_u64(std::span<const std::uint8_t> b, std::size_t off) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[off + i]} << (8 * i);
  return v;
}

}  // namespace

CorruptFile::CorruptFile(std::size_t offset_, const std::string& what)
    : std::runtime_error("corrupt BDD file at byte " + std::to_string(offset_) + ": " + what),
      offset(offset_) {}

UnsupportedVersion::UnsupportedVersion(std::uint32_t v)
    : std::runtime_error("unsupported BDD file version " + std::to_string(v)), version(v) {}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::uint8_t> serialize_bdd(const bdd::BddManager& m, bdd::NodeRef root,
                                        const BddFileMeta& meta) {
  // Post-order walk, low child first; gives a canonical numbering for a
  // given function and variable order.
  std::unordered_map<std::uint32_t, std::uint32_t> file_index;
  std::vector<FlatBdd::Record> records;
  struct Frame {
    bdd::NodeRef node;
    bool expanded;
  };
  std::vector<Frame> stack;
  if (!root.is_terminal()) stack.push_back({root, false});
  while (!stack.empty()) {
    Frame& top = stack.back();
    const bdd::NodeRef n = top.node;
    if (file_index.contains(n.index)) {
      stack.pop_back();
      continue;
    }
    if (!top.expanded) {
      top.expanded = true;
      const bdd::NodeRef hi = m.high(n);
      const bdd::NodeRef lo = m.low(n);
      if (!hi.is_terminal() && !file_index.contains(hi.index)) stack.push_back({hi, false});
      if (!lo.is_terminal() && !file_index.contains(lo.index)) stack.push_back({lo, false});
      continue;
    }
    auto ref_of = [&](bdd::NodeRef c) {
      return c.is_terminal() ? c.index : file_index.at(c.index);
    };
    records.push_back({m.var_of(n), ref_of(m.low(n)), ref_of(m.high(n))});
    file_index.emplace(n.index, static_cast<std::uint32_t>(records.size() + 1));
    stack.pop_back();
  }

  std::vector<std::uint8_t> out(kBddMagic.begin(), kBddMagic.end());
  out.reserve(kBddHeaderSize + records.size() * kBddRecordSize + kBddChecksumSize);
  put_u32(out, kBddFormatVersion);
  put_u32(out, meta.width);
  put_u32(out, meta.height);
  put_u32(out, meta.ply);
  put_u32(out, meta.encoding_kind);
  put_u32(out, meta.var_count);
  put_u32(out, static_cast<std::uint32_t>(records.size()));
  put_u32(out, root.is_terminal() ? root.index : file_index.at(root.index));
  for (const auto& r : records) {
    put_u32(out, r.var);
    put_u32(out, r.low);
    put_u32(out, r.high);
  }
  put_u64(out, fnv1a64(out));
  return out;
}

FlatBdd parse_bdd(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kBddHeaderSize) throw CorruptFile(bytes.size(), "truncated header");
  if (!std::equal(kBddMagic.begin(), kBddMagic.end(), bytes.begin())) {
    throw CorruptFile(0, "bad magic");
  }
  const std::uint32_t version = get_u32(bytes, 8);
  if (version != kBddFormatVersion) throw UnsupportedVersion(version);

  FlatBdd flat;
  flat.meta.width = get_u32(bytes, 12);
  flat.meta.height = get_u32(bytes, 16);
  flat.meta.ply = get_u32(bytes, 20);
  flat.meta.encoding_kind = get_u32(bytes, 24);
  flat.meta.var_count = get_u32(bytes, 28);
  const std::uint32_t count = get_u32(bytes, 32);
  flat.root = get_u32(bytes, 36);

  const std::size_t body_end = kBddHeaderSize + std::size_t{count} * kBddRecordSize;
  if (bytes.size() < body_end + kBddChecksumSize) {
    throw CorruptFile(bytes.size(), "truncated body");
  }
  if (bytes.size() > body_end + kBddChecksumSize) {
    throw CorruptFile(body_end + kBddChecksumSize, "trailing bytes");
  }
  if (fnv1a64(bytes.first(body_end)) != get_u64(bytes, body_end)) {
    throw CorruptFile(body_end, "checksum mismatch");
  }

  flat.records.resize(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::size_t off = kBddHeaderSize + std::size_t{i} * kBddRecordSize;
    FlatBdd::Record r{get_u32(bytes, off), get_u32(bytes, off + 4), get_u32(bytes, off + 8)};
    const std::uint32_t self = i + 2;
    if (r.var >= flat.meta.var_count) throw CorruptFile(off, "variable out of range");
    if (r.low >= self || r.high >= self) throw CorruptFile(off, "forward reference");
    if (r.low == r.high) throw CorruptFile(off, "redundant node");
    for (std::uint32_t c : {r.low, r.high}) {
      if (c >= 2 && flat.records[c - 2].var <= r.var) throw CorruptFile(off, "order violation");
    }
    flat.records[i] = r;
  }
  const bool root_ok = count == 0 ? flat.root < 2 : flat.root == count + 1;
  if (!root_ok) throw CorruptFile(36, "root is not the last record");
  return flat;
}

bool FlatBdd::eval(std::span<const std::uint8_t> assignment) const {
  std::uint32_t n = root;
  while (n >= 2) {
    const Record& r = records[n - 2];
    n = assignment[r.var] ? r.high : r.low;
  }
  return n == 1;
}

bdd::BigCount FlatBdd::satcount(const bdd::VarSet& vars) const {
  const auto k = static_cast<std::uint32_t>(vars.size());
  std::vector<std::uint32_t> pos(meta.var_count, 0xFFFFFFFFu);
  for (std::uint32_t i = 0; i < k; ++i) {
    if (vars.vars()[i] < meta.var_count) pos[vars.vars()[i]] = i;
  }
  auto level = [&](std::uint32_t n) -> std::uint32_t {
    if (n < 2) return k;
    const std::uint32_t p = pos[records[n - 2].var];
    if (p == 0xFFFFFFFFu) throw bdd::DependsOutsideVarSet("stored BDD tests a variable outside the set");
    return p;
  };
  std::vector<bdd::BigCount> count(records.size() + 2);
  count[0] = 0;
  count[1] = 1;
  for (std::uint32_t i = 0; i < records.size(); ++i) {
    const Record& r = records[i];
    const std::uint32_t here = level(i + 2);
    count[i + 2] = (count[r.low] << (level(r.low) - here - 1)) +
                   (count[r.high] << (level(r.high) - here - 1));
  }
  return count[root] << level(root);
}

std::size_t FlatBdd::node_count() const {
  if (root < 2) return 1;
  bool has[2] = {false, false};
  for (const auto& r : records) {
    if (r.low < 2) has[r.low] = true;
    if (r.high < 2) has[r.high] = true;
  }
  return records.size() + (has[0] ? 1 : 0) + (has[1] ? 1 : 0);
}

void save_bdd(const bdd::BddManager& m, bdd::NodeRef root, const BddFileMeta& meta,
              const std::filesystem::path& path) {
  const auto bytes = serialize_bdd(m, root, meta);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

FlatBdd read_flat_bdd(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return parse_bdd(bytes);
}

bdd::Bdd load_bdd(bdd::BddManager& m, const FlatBdd& flat) {
  if (flat.meta.var_count > m.num_vars()) {
    throw std::invalid_argument("stored BDD uses more variables than the manager holds");
  }
  // Every rebuilt node stays referenced until the root is, so a collection
  // triggered mid-load cannot reclaim it.
  std::vector<bdd::NodeRef> built(flat.records.size() + 2);
  built[0] = bdd::kFalse;
  built[1] = bdd::kTrue;
  struct Release {
    bdd::BddManager& m;
    std::vector<bdd::NodeRef>& nodes;
    std::size_t done = 2;
    ~Release() {
      for (std::size_t i = 2; i < done; ++i) m.deref(nodes[i]);
    }
  } release{m, built};
  for (std::size_t i = 0; i < flat.records.size(); ++i) {
    const auto& r = flat.records[i];
    built[i + 2] = m.node(r.var, built[r.low], built[r.high]);
    m.ref(built[i + 2]);
    release.done = i + 3;
  }
  return bdd::Bdd(m, built[flat.root]);
}

bdd::Bdd load_bdd(bdd::BddManager& m, const std::filesystem::path& path, BddFileMeta* meta) {
  const FlatBdd flat = read_flat_bdd(path);
  if (meta) *meta = flat.meta;
  return load_bdd(m, flat);
}

}  // namespace c4::store
