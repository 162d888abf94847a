#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace c4::bdd {

using BigCount = boost::multiprecision::cpp_int;

/// One bit per variable id; entries are 0 or 1.
using Assignment = std::vector<std::uint8_t>;

/// Handle into the node arena of a BddManager. Slots 0 and 1 are the FALSE and
/// TRUE terminals.
struct NodeRef {
  std::uint32_t index = 0;

  constexpr bool is_terminal() const noexcept { return index < 2; }
  friend constexpr bool operator==(NodeRef, NodeRef) = default;
  friend constexpr auto operator<=>(NodeRef, NodeRef) = default;
};

inline constexpr NodeRef kFalse{0};
inline constexpr NodeRef kTrue{1};

/// Strictly increasing list of variable ids.
class VarSet {
 public:
  VarSet() = default;
  explicit VarSet(std::vector<std::uint32_t> vars);

  const std::vector<std::uint32_t>& vars() const noexcept { return vars_; }
  std::size_t size() const noexcept { return vars_.size(); }
  bool empty() const noexcept { return vars_.empty(); }
  bool contains(std::uint32_t v) const;

  friend bool operator==(const VarSet&, const VarSet&) = default;

 private:
  std::vector<std::uint32_t> vars_;
};

enum class Op : std::uint8_t { And, Or, Xor, Diff };

class BddError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class PoolExhausted : public BddError {
 public:
  PoolExhausted(std::size_t capacity, std::size_t high_water);
  std::size_t capacity;
  std::size_t high_water;
};

class DoubleFree : public BddError {
  using BddError::BddError;
};

class DependsOutsideVarSet : public BddError {
  using BddError::BddError;
};

class AllocationFailure : public BddError {
 public:
  explicit AllocationFailure(std::size_t requested_bytes);
  std::size_t requested_bytes;
};

struct ManagerStats {
  std::size_t capacity = 0;
  std::size_t allocated = 0;   // non-free slots, terminals included
  std::size_t high_water = 0;  // max of `allocated` over the manager lifetime
  std::size_t gc_runs = 0;
  double gc_seconds = 0.0;
  std::size_t cache_entries = 0;
};

/// Reduced ordered BDD engine over a preallocated node arena.
///
/// Reference counts track external handles only. A node is reclaimable when it
/// is not reachable from any node with a positive count; reclamation happens in
/// collect(), which every public operation runs before a single retry when the
/// arena runs out of slots. Operands passed to an operation must therefore be
/// referenced (directly or through a referenced ancestor).
///
/// Single-threaded. Distinct managers share nothing.
class BddManager {
 public:
  BddManager(std::size_t capacity, std::uint32_t num_vars,
             double cache_fraction = 0.25);
  ~BddManager();
  BddManager(const BddManager&) = delete;
  BddManager& operator=(const BddManager&) = delete;

  std::uint32_t num_vars() const noexcept { return num_vars_; }
  std::size_t capacity() const noexcept { return capacity_; }

  NodeRef mk_var(std::uint32_t var);
  NodeRef mk_nvar(std::uint32_t var);
  /// Canonical node (var, low, high); validates ordering.
  NodeRef node(std::uint32_t var, NodeRef low, NodeRef high);

  NodeRef apply(Op op, NodeRef f, NodeRef g);
  NodeRef not_(NodeRef f);
  NodeRef ite(NodeRef c, NodeRef t, NodeRef e);
  NodeRef exists(NodeRef f, const VarSet& vars);
  /// Relational product: exists(vars, f AND g) in one pass.
  NodeRef and_exists(NodeRef f, NodeRef g, const VarSet& vars);
  /// Substitutes variable v by mapping[v]; mapping must be a permutation.
  NodeRef rename(NodeRef f, std::span<const std::uint32_t> mapping);

  /// Number of assignments to exactly `vars` that satisfy f.
  BigCount satcount(NodeRef f, const VarSet& vars) const;
  bool eval(NodeRef f, std::span<const std::uint8_t> assignment) const;
  /// Distinct nodes reachable from f, terminals included.
  std::size_t node_count(NodeRef f) const;
  std::size_t node_count(std::span<const NodeRef> roots) const;

  /// Calls `fn` once per satisfying assignment over `vars` (other variables
  /// left 0). Stops early when fn returns false.
  void for_each_sat(NodeRef f, const VarSet& vars,
                    const std::function<bool(const Assignment&)>& fn) const;

  void ref(NodeRef f);
  void deref(NodeRef f);
  std::uint32_t refcount(NodeRef f) const;

  /// Reclaims every slot not reachable from a referenced node and clears the
  /// operation cache.
  void collect();
  /// Nodes reachable from referenced roots, terminals included.
  std::size_t live_node_count() const;
  bool is_allocated(NodeRef f) const;

  std::uint32_t var_of(NodeRef f) const { return nodes_[f.index].var; }
  NodeRef low(NodeRef f) const { return NodeRef{nodes_[f.index].low}; }
  NodeRef high(NodeRef f) const { return NodeRef{nodes_[f.index].high}; }

  ManagerStats stats() const;

  /// Checks orderedness, reducedness, unique-table consistency and the free
  /// list. Returns a description of every violation found.
  std::vector<std::string> audit() const;

  void write_dot(std::ostream& os, NodeRef f) const;

  static constexpr std::uint32_t kTerminalVar = 0xFFFFFFFFu;

 private:
  struct Node {
    std::uint32_t var;
    std::uint32_t low;
    std::uint32_t high;
  };
  struct CacheEntry {
    std::uint32_t a;
    std::uint32_t b;
    std::uint32_t tag;  // 0 = empty
    std::uint32_t result;
  };
  struct Quantifier {
    std::vector<std::uint8_t> member;
    std::uint32_t last_var;
  };

  static constexpr std::uint32_t kFreeVar = 0xFFFFFFFEu;

  template <class F>
  NodeRef with_retry(F&& f);
  void maybe_collect();

  NodeRef make(std::uint32_t var, NodeRef low, NodeRef high);
  std::uint32_t allocate_slot();
  std::uint32_t quantifier_id(const VarSet& vars);

  NodeRef apply_rec(Op op, NodeRef f, NodeRef g);
  NodeRef not_rec(NodeRef f);
  NodeRef exists_rec(NodeRef f, std::uint32_t qid);
  NodeRef and_exists_rec(NodeRef f, NodeRef g, std::uint32_t qid);
  NodeRef rename_rec(NodeRef f, std::span<const std::uint32_t> mapping,
                     std::vector<std::uint32_t>& memo);

  bool cache_lookup(std::uint32_t tag, NodeRef a, NodeRef b,
                    NodeRef& out) const;
  void cache_store(std::uint32_t tag, NodeRef a, NodeRef b, NodeRef result);

  void mark_from(std::uint32_t index, std::vector<std::uint64_t>& marks) const;
  void rebuild_unique_table();

  std::size_t capacity_;
  std::uint32_t num_vars_;
  std::unique_ptr<Node[]> nodes_;
  std::vector<std::uint32_t> refcount_;
  std::vector<std::uint32_t> unique_;  // open addressing, 0 = empty
  std::size_t unique_mask_;
  std::vector<CacheEntry> cache_;
  std::size_t cache_mask_;
  std::vector<std::uint32_t> free_list_;
  std::uint32_t next_fresh_;
  std::size_t allocated_;
  std::size_t high_water_;
  std::size_t allocated_at_last_gc_;
  std::size_t gc_runs_ = 0;
  double gc_seconds_ = 0.0;

  std::map<std::vector<std::uint32_t>, std::uint32_t> quantifier_ids_;
  std::vector<Quantifier> quantifiers_;
};

/// Owning handle: references its node for as long as it lives.
class Bdd {
 public:
  Bdd() = default;
  Bdd(BddManager& m, NodeRef n);
  Bdd(const Bdd& other);
  Bdd(Bdd&& other) noexcept;
  Bdd& operator=(const Bdd& other);
  Bdd& operator=(Bdd&& other) noexcept;
  ~Bdd();

  static Bdd var(BddManager& m, std::uint32_t v) { return {m, m.mk_var(v)}; }
  static Bdd nvar(BddManager& m, std::uint32_t v) { return {m, m.mk_nvar(v)}; }
  static Bdd constant(BddManager& m, bool value) {
    return {m, value ? kTrue : kFalse};
  }

  NodeRef node() const noexcept { return node_; }
  BddManager* manager() const noexcept { return manager_; }
  bool valid() const noexcept { return manager_ != nullptr; }
  bool is_false() const noexcept { return node_ == kFalse; }
  bool is_true() const noexcept { return node_ == kTrue; }
  void reset();

  Bdd exists(const VarSet& vars) const;
  Bdd and_exists(const Bdd& g, const VarSet& vars) const;
  BigCount satcount(const VarSet& vars) const;
  std::size_t node_count() const;
  bool eval(std::span<const std::uint8_t> assignment) const;

  friend Bdd operator&(const Bdd& a, const Bdd& b);
  friend Bdd operator|(const Bdd& a, const Bdd& b);
  friend Bdd operator^(const Bdd& a, const Bdd& b);
  /// a AND NOT b
  friend Bdd operator-(const Bdd& a, const Bdd& b);
  Bdd operator~() const;
  Bdd& operator&=(const Bdd& b) { return *this = *this & b; }
  Bdd& operator|=(const Bdd& b) { return *this = *this | b; }
  Bdd& operator-=(const Bdd& b) { return *this = *this - b; }

  friend bool operator==(const Bdd& a, const Bdd& b) {
    return a.manager_ == b.manager_ && a.node_ == b.node_;
  }

 private:
  BddManager* manager_ = nullptr;
  NodeRef node_{};
};

}  // namespace c4::bdd
