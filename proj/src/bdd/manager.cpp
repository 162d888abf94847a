#include "c4/bdd/manager.hpp"

#include <unistd.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace c4::bdd {

namespace {

constexpr std::uint32_t kTagAnd = 1;
constexpr std::uint32_t kTagOr = 2;
constexpr std::uint32_t kTagXor = 3;
constexpr std::uint32_t kTagDiff = 4;
constexpr std::uint32_t kTagNot = 5;
constexpr std::uint32_t kTagExists = 6;
constexpr std::uint32_t kTagAndExists = 7;

std::uint32_t op_tag(Op op) {
  switch (op) {
    case Op::And: return kTagAnd;
    case Op::Or: return kTagOr;
    case Op::Xor: return kTagXor;
    case Op::Diff: return kTagDiff;
  }
  return 0;
}

inline std::uint64_t mix(std::uint64_t h) {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

inline std::uint64_t hash3(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  return mix((std::uint64_t{a} << 40) ^ (std::uint64_t{b} << 20) ^ c ^
             (std::uint64_t{b} >> 44) ^ (std::uint64_t{a} * 0x9e3779b97f4a7c15ULL));
}

inline bool test_bit(const std::vector<std::uint64_t>& bits, std::uint32_t i) {
  return (bits[i >> 6] >> (i & 63)) & 1u;
}
inline void set_bit(std::vector<std::uint64_t>& bits, std::uint32_t i) {
  bits[i >> 6] |= std::uint64_t{1} << (i & 63);
}

std::size_t physical_memory_bytes() {
  const long pages = ::sysconf(_SC_PHYS_PAGES);
  const long page_size = ::sysconf(_SC_PAGE_SIZE);
  if (pages <= 0 || page_size <= 0) return static_cast<std::size_t>(-1);
  return static_cast<std::size_t>(pages) * static_cast<std::size_t>(page_size);
}

}  // namespace

VarSet::VarSet(std::vector<std::uint32_t> vars) : vars_(std::move(vars)) {
  for (std::size_t i = 1; i < vars_.size(); ++i) {
    if (vars_[i - 1] >= vars_[i]) {
      throw BddError("VarSet must be strictly increasing");
    }
  }
}

bool VarSet::contains(std::uint32_t v) const {
  return std::binary_search(vars_.begin(), vars_.end(), v);
}

PoolExhausted::PoolExhausted(std::size_t capacity_, std::size_t high_water_)
    : BddError("BDD node pool exhausted (capacity " + std::to_string(capacity_) +
               ", high-water mark " + std::to_string(high_water_) + ")"),
      capacity(capacity_),
      high_water(high_water_) {}

AllocationFailure::AllocationFailure(std::size_t bytes)
    : BddError("cannot preallocate BDD node pool: " + std::to_string(bytes) +
               " bytes requested"),
      requested_bytes(bytes) {}

BddManager::BddManager(std::size_t capacity, std::uint32_t num_vars,
                       double cache_fraction)
    : capacity_(capacity), num_vars_(num_vars) {
  if (capacity < 2) throw BddError("capacity must be at least 2");
  if (num_vars < 1) throw BddError("num_vars must be at least 1");
  if (capacity > 0xFFFFFFF0u) throw BddError("capacity exceeds 32-bit indexing");

  const std::size_t unique_size = std::bit_ceil(capacity * 2);
  const std::size_t cache_size = std::bit_ceil(std::max<std::size_t>(
      1024, static_cast<std::size_t>(static_cast<double>(capacity) * cache_fraction)));
  const std::size_t bytes = capacity * (sizeof(Node) + sizeof(std::uint32_t)) +
                            unique_size * sizeof(std::uint32_t) +
                            cache_size * sizeof(CacheEntry);
  if (bytes > physical_memory_bytes()) throw AllocationFailure(bytes);

  try {
    nodes_.reset(new Node[capacity]);
    refcount_.assign(capacity, 0);
    unique_.assign(unique_size, 0);
    cache_.assign(cache_size, CacheEntry{0, 0, 0, 0});
  } catch (const std::bad_alloc&) {
    throw AllocationFailure(bytes);
  }
  unique_mask_ = unique_size - 1;
  cache_mask_ = cache_size - 1;

  nodes_[0] = Node{kTerminalVar, 0, 0};
  nodes_[1] = Node{kTerminalVar, 1, 1};
  next_fresh_ = 2;
  allocated_ = 2;
  high_water_ = 2;
  allocated_at_last_gc_ = 0;
}

BddManager::~BddManager() = default;

// ---------------------------------------------------------------------------
// Node allocation and the unique table

std::uint32_t BddManager::allocate_slot() {
  std::uint32_t slot;
  if (!free_list_.empty()) {
    slot = free_list_.back();
    free_list_.pop_back();
  } else if (next_fresh_ < capacity_) {
    slot = next_fresh_++;
  } else {
    throw PoolExhausted(capacity_, high_water_);
  }
  ++allocated_;
  ++allocated_at_last_gc_;
  high_water_ = std::max(high_water_, allocated_);
  return slot;
}

NodeRef BddManager::make(std::uint32_t var, NodeRef low, NodeRef high) {
  if (low == high) return low;
  std::size_t pos = hash3(var, low.index, high.index) & unique_mask_;
  while (true) {
    const std::uint32_t idx = unique_[pos];
    if (idx == 0) break;
    const Node& n = nodes_[idx];
    if (n.var == var && n.low == low.index && n.high == high.index) {
      return NodeRef{idx};
    }
    pos = (pos + 1) & unique_mask_;
  }
  const std::uint32_t slot = allocate_slot();
  nodes_[slot] = Node{var, low.index, high.index};
  unique_[pos] = slot;
  return NodeRef{slot};
}

void BddManager::rebuild_unique_table() {
  std::fill(unique_.begin(), unique_.end(), 0);
  for (std::uint32_t i = 2; i < next_fresh_; ++i) {
    const Node& n = nodes_[i];
    if (n.var == kFreeVar) continue;
    std::size_t pos = hash3(n.var, n.low, n.high) & unique_mask_;
    while (unique_[pos] != 0) pos = (pos + 1) & unique_mask_;
    unique_[pos] = i;
  }
}

// ---------------------------------------------------------------------------
// Garbage collection

void BddManager::mark_from(std::uint32_t index,
                           std::vector<std::uint64_t>& marks) const {
  if (test_bit(marks, index)) return;
  set_bit(marks, index);
  if (index < 2) return;
  mark_from(nodes_[index].low, marks);
  mark_from(nodes_[index].high, marks);
}

void BddManager::collect() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::uint64_t> marks((capacity_ + 63) / 64, 0);
  set_bit(marks, 0);
  set_bit(marks, 1);
  for (std::uint32_t i = 2; i < next_fresh_; ++i) {
    if (refcount_[i] > 0 && nodes_[i].var != kFreeVar) mark_from(i, marks);
  }
  free_list_.clear();
  allocated_ = 2;
  for (std::uint32_t i = next_fresh_; i-- > 2;) {
    if (test_bit(marks, i)) {
      ++allocated_;
    } else {
      nodes_[i].var = kFreeVar;
      free_list_.push_back(i);
    }
  }
  rebuild_unique_table();
  std::fill(cache_.begin(), cache_.end(), CacheEntry{0, 0, 0, 0});
  allocated_at_last_gc_ = 0;
  ++gc_runs_;
  gc_seconds_ += std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - start)
                     .count();
}

void BddManager::maybe_collect() {
  const std::size_t available = capacity_ - allocated_;
  if (available < capacity_ / 8 && allocated_at_last_gc_ > capacity_ / 8) {
    collect();
  }
}

template <class F>
NodeRef BddManager::with_retry(F&& f) {
  maybe_collect();
  try {
    return f();
  } catch (const PoolExhausted&) {
  }
  collect();
  return f();
}

std::size_t BddManager::live_node_count() const {
  std::vector<std::uint64_t> marks((capacity_ + 63) / 64, 0);
  set_bit(marks, 0);
  set_bit(marks, 1);
  for (std::uint32_t i = 2; i < next_fresh_; ++i) {
    if (refcount_[i] > 0 && nodes_[i].var != kFreeVar) mark_from(i, marks);
  }
  std::size_t count = 0;
  for (auto w : marks) count += static_cast<std::size_t>(std::popcount(w));
  return count;
}

bool BddManager::is_allocated(NodeRef f) const {
  if (f.index < 2) return true;
  return f.index < next_fresh_ && nodes_[f.index].var != kFreeVar;
}

void BddManager::ref(NodeRef f) {
  if (f.index < 2) return;
  ++refcount_[f.index];
}

void BddManager::deref(NodeRef f) {
  if (f.index < 2) return;
  if (refcount_[f.index] == 0) {
    throw DoubleFree("deref of node " + std::to_string(f.index) +
                     " with reference count 0");
  }
  --refcount_[f.index];
}

std::uint32_t BddManager::refcount(NodeRef f) const {
  return refcount_[f.index];
}

// ---------------------------------------------------------------------------
// Operation cache

bool BddManager::cache_lookup(std::uint32_t tag, NodeRef a, NodeRef b,
                              NodeRef& out) const {
  const CacheEntry& e = cache_[hash3(tag, a.index, b.index) & cache_mask_];
  if (e.tag == tag && e.a == a.index && e.b == b.index) {
    out = NodeRef{e.result};
    return true;
  }
  return false;
}

void BddManager::cache_store(std::uint32_t tag, NodeRef a, NodeRef b,
                             NodeRef result) {
  cache_[hash3(tag, a.index, b.index) & cache_mask_] =
      CacheEntry{a.index, b.index, tag, result.index};
}

std::uint32_t BddManager::quantifier_id(const VarSet& vars) {
  auto it = quantifier_ids_.find(vars.vars());
  if (it != quantifier_ids_.end()) return it->second;
  Quantifier q;
  q.member.assign(num_vars_, 0);
  q.last_var = 0;
  for (auto v : vars.vars()) {
    if (v >= num_vars_) throw BddError("quantified variable out of range");
    q.member[v] = 1;
    q.last_var = v;
  }
  const auto id = static_cast<std::uint32_t>(quantifiers_.size());
  if (id >= (1u << 27)) throw BddError("too many distinct quantifier sets");
  quantifiers_.push_back(std::move(q));
  quantifier_ids_.emplace(vars.vars(), id);
  return id;
}

// ---------------------------------------------------------------------------
// Operations

NodeRef BddManager::mk_var(std::uint32_t var) {
  if (var >= num_vars_) throw BddError("variable id out of range");
  return with_retry([&] { return make(var, kFalse, kTrue); });
}

NodeRef BddManager::mk_nvar(std::uint32_t var) {
  if (var >= num_vars_) throw BddError("variable id out of range");
  return with_retry([&] { return make(var, kTrue, kFalse); });
}

NodeRef BddManager::node(std::uint32_t var, NodeRef low, NodeRef high) {
  if (var >= num_vars_) throw BddError("variable id out of range");
  if (!is_allocated(low) || !is_allocated(high)) {
    throw BddError("child is not an allocated node");
  }
  if ((!low.is_terminal() && nodes_[low.index].var <= var) ||
      (!high.is_terminal() && nodes_[high.index].var <= var)) {
    throw BddError("child variable does not follow the parent in the order");
  }
  return with_retry([&] { return make(var, low, high); });
}

NodeRef BddManager::apply(Op op, NodeRef f, NodeRef g) {
  return with_retry([&] { return apply_rec(op, f, g); });
}

NodeRef BddManager::not_(NodeRef f) {
  return with_retry([&] { return not_rec(f); });
}

NodeRef BddManager::ite(NodeRef c, NodeRef t, NodeRef e) {
  return with_retry([&] {
    const NodeRef ct = apply_rec(Op::And, c, t);
    // `ct` is unreferenced; no collection can happen inside this attempt.
    const NodeRef ce = apply_rec(Op::Diff, e, c);
    return apply_rec(Op::Or, ct, ce);
  });
}

NodeRef BddManager::exists(NodeRef f, const VarSet& vars) {
  if (vars.empty()) return f;
  const std::uint32_t qid = quantifier_id(vars);
  return with_retry([&] { return exists_rec(f, qid); });
}

NodeRef BddManager::and_exists(NodeRef f, NodeRef g, const VarSet& vars) {
  const std::uint32_t qid = quantifier_id(vars);
  return with_retry([&] { return and_exists_rec(f, g, qid); });
}

NodeRef BddManager::rename(NodeRef f, std::span<const std::uint32_t> mapping) {
  if (mapping.size() != num_vars_) {
    throw BddError("rename mapping must cover every variable");
  }
  std::vector<std::uint8_t> seen(num_vars_, 0);
  for (auto v : mapping) {
    if (v >= num_vars_ || seen[v]) throw BddError("rename mapping is not a permutation");
    seen[v] = 1;
  }
  return with_retry([&] {
    std::vector<std::uint32_t> memo(next_fresh_, 0xFFFFFFFFu);
    return rename_rec(f, mapping, memo);
  });
}

NodeRef BddManager::apply_rec(Op op, NodeRef f, NodeRef g) {
  switch (op) {
    case Op::And:
      if (f == kFalse || g == kFalse) return kFalse;
      if (f == kTrue) return g;
      if (g == kTrue || f == g) return f;
      if (g < f) std::swap(f, g);
      break;
    case Op::Or:
      if (f == kTrue || g == kTrue) return kTrue;
      if (f == kFalse) return g;
      if (g == kFalse || f == g) return f;
      if (g < f) std::swap(f, g);
      break;
    case Op::Xor:
      if (f == g) return kFalse;
      if (f == kFalse) return g;
      if (g == kFalse) return f;
      if (f == kTrue) return not_rec(g);
      if (g == kTrue) return not_rec(f);
      if (g < f) std::swap(f, g);
      break;
    case Op::Diff:
      if (f == kFalse || g == kTrue || f == g) return kFalse;
      if (g == kFalse) return f;
      if (f == kTrue) return not_rec(g);
      break;
  }
  const std::uint32_t tag = op_tag(op);
  NodeRef cached;
  if (cache_lookup(tag, f, g, cached)) return cached;

  const Node nf = nodes_[f.index];
  const Node ng = nodes_[g.index];
  const std::uint32_t v = std::min(nf.var, ng.var);
  const NodeRef f0 = nf.var == v ? NodeRef{nf.low} : f;
  const NodeRef f1 = nf.var == v ? NodeRef{nf.high} : f;
  const NodeRef g0 = ng.var == v ? NodeRef{ng.low} : g;
  const NodeRef g1 = ng.var == v ? NodeRef{ng.high} : g;
  const NodeRef lo = apply_rec(op, f0, g0);
  const NodeRef hi = apply_rec(op, f1, g1);
  const NodeRef r = make(v, lo, hi);
  cache_store(tag, f, g, r);
  return r;
}

NodeRef BddManager::not_rec(NodeRef f) {
  if (f == kFalse) return kTrue;
  if (f == kTrue) return kFalse;
  NodeRef cached;
  if (cache_lookup(kTagNot, f, kFalse, cached)) return cached;
  const Node n = nodes_[f.index];
  const NodeRef lo = not_rec(NodeRef{n.low});
  const NodeRef hi = not_rec(NodeRef{n.high});
  const NodeRef r = make(n.var, lo, hi);
  cache_store(kTagNot, f, kFalse, r);
  return r;
}

NodeRef BddManager::exists_rec(NodeRef f, std::uint32_t qid) {
  if (f.is_terminal()) return f;
  const Quantifier& q = quantifiers_[qid];
  const Node n = nodes_[f.index];
  if (n.var > q.last_var) return f;
  const std::uint32_t tag = kTagExists | (qid << 4);
  NodeRef cached;
  if (cache_lookup(tag, f, kFalse, cached)) return cached;
  NodeRef r;
  const NodeRef lo = exists_rec(NodeRef{n.low}, qid);
  if (q.member[n.var]) {
    r = lo == kTrue ? kTrue : apply_rec(Op::Or, lo, exists_rec(NodeRef{n.high}, qid));
  } else {
    r = make(n.var, lo, exists_rec(NodeRef{n.high}, qid));
  }
  cache_store(tag, f, kFalse, r);
  return r;
}

NodeRef BddManager::and_exists_rec(NodeRef f, NodeRef g, std::uint32_t qid) {
  if (f == kFalse || g == kFalse) return kFalse;
  if (f == kTrue && g == kTrue) return kTrue;
  if (f == kTrue || f == g) return exists_rec(g, qid);
  if (g == kTrue) return exists_rec(f, qid);
  if (g < f) std::swap(f, g);

  const Quantifier& q = quantifiers_[qid];
  const Node nf = nodes_[f.index];
  const Node ng = nodes_[g.index];
  const std::uint32_t v = std::min(nf.var, ng.var);
  if (v > q.last_var) return apply_rec(Op::And, f, g);

  const std::uint32_t tag = kTagAndExists | (qid << 4);
  NodeRef cached;
  if (cache_lookup(tag, f, g, cached)) return cached;

  const NodeRef f0 = nf.var == v ? NodeRef{nf.low} : f;
  const NodeRef f1 = nf.var == v ? NodeRef{nf.high} : f;
  const NodeRef g0 = ng.var == v ? NodeRef{ng.low} : g;
  const NodeRef g1 = ng.var == v ? NodeRef{ng.high} : g;
  NodeRef r;
  const NodeRef lo = and_exists_rec(f0, g0, qid);
  if (q.member[v]) {
    r = lo == kTrue ? kTrue : apply_rec(Op::Or, lo, and_exists_rec(f1, g1, qid));
  } else {
    r = make(v, lo, and_exists_rec(f1, g1, qid));
  }
  cache_store(tag, f, g, r);
  return r;
}

NodeRef BddManager::rename_rec(NodeRef f, std::span<const std::uint32_t> mapping,
                               std::vector<std::uint32_t>& memo) {
  if (f.is_terminal()) return f;
  if (memo[f.index] != 0xFFFFFFFFu) return NodeRef{memo[f.index]};
  const Node n = nodes_[f.index];
  const NodeRef lo = rename_rec(NodeRef{n.low}, mapping, memo);
  const NodeRef hi = rename_rec(NodeRef{n.high}, mapping, memo);
  const NodeRef x = make(mapping[n.var], kFalse, kTrue);
  const NodeRef t = apply_rec(Op::And, x, hi);
  const NodeRef e = apply_rec(Op::Diff, lo, x);
  const NodeRef r = apply_rec(Op::Or, t, e);
  memo[f.index] = r.index;
  return r;
}

// ---------------------------------------------------------------------------
// Queries

BigCount BddManager::satcount(NodeRef f, const VarSet& vars) const {
  const auto k = static_cast<std::uint32_t>(vars.size());
  std::vector<std::uint32_t> pos(num_vars_, 0xFFFFFFFFu);
  for (std::uint32_t i = 0; i < k; ++i) {
    if (vars.vars()[i] >= num_vars_) throw BddError("variable id out of range");
    pos[vars.vars()[i]] = i;
  }
  auto level = [&](NodeRef n) -> std::uint32_t {
    if (n.is_terminal()) return k;
    const std::uint32_t p = pos[nodes_[n.index].var];
    if (p == 0xFFFFFFFFu) {
      throw DependsOutsideVarSet("BDD tests variable " +
                                 std::to_string(nodes_[n.index].var) +
                                 " outside the counted set");
    }
    return p;
  };

  std::unordered_map<std::uint32_t, BigCount> memo;
  std::function<BigCount(NodeRef)> count = [&](NodeRef n) -> BigCount {
    if (n == kFalse) return 0;
    if (n == kTrue) return 1;
    if (auto it = memo.find(n.index); it != memo.end()) return it->second;
    const std::uint32_t here = level(n);
    const NodeRef lo{nodes_[n.index].low};
    const NodeRef hi{nodes_[n.index].high};
    BigCount c = count(lo) << (level(lo) - here - 1);
    c += count(hi) << (level(hi) - here - 1);
    memo.emplace(n.index, c);
    return c;
  };
  return count(f) << level(f);
}

bool BddManager::eval(NodeRef f, std::span<const std::uint8_t> assignment) const {
  while (!f.is_terminal()) {
    const Node& n = nodes_[f.index];
    f = NodeRef{assignment[n.var] ? n.high : n.low};
  }
  return f == kTrue;
}

std::size_t BddManager::node_count(NodeRef f) const {
  return node_count(std::span<const NodeRef>(&f, 1));
}

std::size_t BddManager::node_count(std::span<const NodeRef> roots) const {
  std::vector<std::uint64_t> marks((capacity_ + 63) / 64, 0);
  for (auto r : roots) mark_from(r.index, marks);
  std::size_t count = 0;
  for (auto w : marks) count += static_cast<std::size_t>(std::popcount(w));
  return count;
}

void BddManager::for_each_sat(
    NodeRef f, const VarSet& vars,
    const std::function<bool(const Assignment&)>& fn) const {
  Assignment a(num_vars_, 0);
  const auto& vs = vars.vars();
  std::function<bool(NodeRef, std::size_t)> rec = [&](NodeRef n,
                                                      std::size_t i) -> bool {
    if (n == kFalse) return true;
    if (i == vs.size()) {
      if (n != kTrue) {
        throw DependsOutsideVarSet("BDD tests variables outside the enumerated set");
      }
      return fn(a);
    }
    const std::uint32_t v = vs[i];
    const std::uint32_t nv = nodes_[n.index].var;
    if (!n.is_terminal() && nv < v) {
      throw DependsOutsideVarSet("BDD tests variable " + std::to_string(nv) +
                                 " outside the enumerated set");
    }
    const bool decides = !n.is_terminal() && nv == v;
    a[v] = 0;
    if (!rec(decides ? NodeRef{nodes_[n.index].low} : n, i + 1)) return false;
    a[v] = 1;
    const bool go_on = rec(decides ? NodeRef{nodes_[n.index].high} : n, i + 1);
    a[v] = 0;
    return go_on;
  };
  rec(f, 0);
}

ManagerStats BddManager::stats() const {
  return ManagerStats{capacity_, allocated_, high_water_, gc_runs_, gc_seconds_,
                      cache_.size()};
}

std::vector<std::string> BddManager::audit() const {
  std::vector<std::string> problems;
  auto report = [&](std::uint32_t i, const std::string& what) {
    problems.push_back("node " + std::to_string(i) + ": " + what);
  };
  std::size_t allocated = 2;
  for (std::uint32_t i = 2; i < next_fresh_; ++i) {
    const Node& n = nodes_[i];
    if (n.var == kFreeVar) {
      if (refcount_[i] != 0) report(i, "free slot with nonzero refcount");
      continue;
    }
    ++allocated;
    if (n.var >= num_vars_) report(i, "variable out of range");
    if (n.low == n.high) report(i, "redundant test (low == high)");
    for (std::uint32_t child : {n.low, n.high}) {
      if (!is_allocated(NodeRef{child})) {
        report(i, "child " + std::to_string(child) + " is free");
      } else if (child >= 2 && nodes_[child].var <= n.var) {
        report(i, "child " + std::to_string(child) + " violates the order");
      }
    }
    std::size_t pos = hash3(n.var, n.low, n.high) & unique_mask_;
    std::uint32_t found = 0;
    while (unique_[pos] != 0) {
      const Node& c = nodes_[unique_[pos]];
      if (c.var == n.var && c.low == n.low && c.high == n.high) {
        found = unique_[pos];
        break;
      }
      pos = (pos + 1) & unique_mask_;
    }
    if (found != i) report(i, "unique table does not resolve to this slot");
  }
  if (allocated != allocated_) {
    problems.push_back("allocated counter " + std::to_string(allocated_) +
                       " disagrees with arena scan " + std::to_string(allocated));
  }
  for (auto slot : free_list_) {
    if (slot >= next_fresh_ || nodes_[slot].var != kFreeVar) {
      report(slot, "free-list entry is not a free slot");
    }
  }
  if (allocated_ > capacity_) problems.push_back("arena exceeds capacity");
  return problems;
}

void BddManager::write_dot(std::ostream& os, NodeRef f) const {
  std::vector<std::uint64_t> marks((capacity_ + 63) / 64, 0);
  mark_from(f.index, marks);
  os << "digraph bdd {\n";
  for (std::uint32_t i = 0; i < next_fresh_; ++i) {
    if (!test_bit(marks, i)) continue;
    const Node& n = nodes_[i];
    if (i < 2) {
      os << "  n" << i << " [shape=box,label=\"" << i << "\"];\n";
      continue;
    }
    os << "  n" << i << " [label=\"" << i << ' ' << n.var << ' ' << n.low << ' '
       << n.high << "\"];\n";
    os << "  n" << i << " -> n" << n.low << " [style=dashed];\n";
    os << "  n" << i << " -> n" << n.high << ";\n";
  }
  os << "}\n";
}

// ---------------------------------------------------------------------------
// Bdd handle

Bdd::Bdd(BddManager& m, NodeRef n) : manager_(&m), node_(n) { m.ref(n); }

Bdd::Bdd(const Bdd& other) : manager_(other.manager_), node_(other.node_) {
  if (manager_) manager_->ref(node_);
}

Bdd::Bdd(Bdd&& other) noexcept : manager_(other.manager_), node_(other.node_) {
  other.manager_ = nullptr;
}

Bdd& Bdd::operator=(const Bdd& other) {
  if (this != &other) {
    if (other.manager_) other.manager_->ref(other.node_);
    reset();
    manager_ = other.manager_;
    node_ = other.node_;
  }
  return *this;
}

Bdd& Bdd::operator=(Bdd&& other) noexcept {
  if (this != &other) {
    reset();
    manager_ = other.manager_;
    node_ = other.node_;
    other.manager_ = nullptr;
  }
  return *this;
}

Bdd::~Bdd() { reset(); }

void Bdd::reset() {
  if (manager_) manager_->deref(node_);
  manager_ = nullptr;
  node_ = kFalse;
}

Bdd Bdd::exists(const VarSet& vars) const {
  return {*manager_, manager_->exists(node_, vars)};
}

Bdd Bdd::and_exists(const Bdd& g, const VarSet& vars) const {
  return {*manager_, manager_->and_exists(node_, g.node_, vars)};
}

BigCount Bdd::satcount(const VarSet& vars) const {
  return manager_->satcount(node_, vars);
}

std::size_t Bdd::node_count() const { return manager_->node_count(node_); }

bool Bdd::eval(std::span<const std::uint8_t> assignment) const {
  return manager_->eval(node_, assignment);
}

Bdd operator&(const Bdd& a, const Bdd& b) {
  return {*a.manager_, a.manager_->apply(Op::And, a.node_, b.node_)};
}
Bdd operator|(const Bdd& a, const Bdd& b) {
  return {*a.manager_, a.manager_->apply(Op::Or, a.node_, b.node_)};
}
Bdd operator^(const Bdd& a, const Bdd& b) {
  return {*a.manager_, a.manager_->apply(Op::Xor, a.node_, b.node_)};
}
Bdd operator-(const Bdd& a, const Bdd& b) {
  return {*a.manager_, a.manager_->apply(Op::Diff, a.node_, b.node_)};
}
Bdd Bdd::operator~() const { return {*manager_, manager_->not_(node_)}; }

}  // namespace c4::bdd
