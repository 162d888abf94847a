#pragma once

#include <bitset>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "c4/bdd/manager.hpp"

namespace c4::testing {

constexpr int kMaxTableVars = 12;

/// Boolean function over variables 0..k-1 by explicit enumeration; bit i is
/// the value under the assignment whose variable v equals bit v of i.
struct TruthTable {
  int k = 0;
  std::bitset<(1u << kMaxTableVars)> bits;

  std::size_t rows() const { return std::size_t{1} << k; }

  static TruthTable constant(int k, bool v) {
    TruthTable t{k, {}};
    for (std::size_t i = 0; i < t.rows(); ++i) t.bits[i] = v;
    return t;
  }
  static TruthTable var(int k, int v) {
    TruthTable t{k, {}};
    for (std::size_t i = 0; i < t.rows(); ++i) t.bits[i] = (i >> v) & 1;
    return t;
  }
  TruthTable combine(const TruthTable& o, bdd::Op op) const {
    TruthTable t{k, {}};
    switch (op) {
      case bdd::Op::And: t.bits = bits & o.bits; break;
      case bdd::Op::Or: t.bits = bits | o.bits; break;
      case bdd::Op::Xor: t.bits = bits ^ o.bits; break;
      case bdd::Op::Diff: t.bits = bits & ~o.bits; break;
    }
    t.mask();
    return t;
  }
  TruthTable negated() const {
    TruthTable t{k, ~bits};
    t.mask();
    return t;
  }
  TruthTable ite(const TruthTable& a, const TruthTable& b) const {
    TruthTable t{k, (bits & a.bits) | (~bits & b.bits)};
    t.mask();
    return t;
  }
  TruthTable exists(const std::vector<std::uint32_t>& vars) const {
    TruthTable t = *this;
    for (std::uint32_t v : vars) {
      TruthTable next{k, {}};
      for (std::size_t i = 0; i < rows(); ++i) {
        next.bits[i] = t.bits[i & ~(std::size_t{1} << v)] || t.bits[i | (std::size_t{1} << v)];
      }
      t = next;
    }
    return t;
  }
  TruthTable renamed(const std::vector<std::uint32_t>& mapping) const {
    // g(x) = f(y) with y[v] = x[mapping[v]]
    TruthTable t{k, {}};
    for (std::size_t i = 0; i < rows(); ++i) {
      std::size_t src = 0;
      for (int v = 0; v < k; ++v) src |= ((i >> mapping[v]) & 1) << v;
      t.bits[i] = bits[src];
    }
    return t;
  }
  std::size_t count() const { return bits.count(); }
  bool operator==(const TruthTable& o) const { return k == o.k && bits == o.bits; }

  void mask() {
    for (std::size_t i = rows(); i < bits.size(); ++i) bits[i] = false;
  }
};

inline std::vector<std::uint8_t> assignment_of(std::size_t row, int num_vars) {
  std::vector<std::uint8_t> a(static_cast<std::size_t>(num_vars), 0);
  for (int v = 0; v < num_vars && v < 63; ++v) a[static_cast<std::size_t>(v)] = (row >> v) & 1;
  return a;
}

/// Table of `f` by evaluating the BDD on every row.
inline TruthTable table_of(const bdd::BddManager& m, bdd::NodeRef f, int k, int num_vars) {
  TruthTable t{k, {}};
  for (std::size_t i = 0; i < t.rows(); ++i) t.bits[i] = m.eval(f, assignment_of(i, num_vars));
  return t;
}

/// Builds the BDD of a table by Shannon expansion, bottom variable last,
/// without using apply: the canonical form any correct engine must reach.
inline bdd::NodeRef build_from_table(bdd::BddManager& m, const TruthTable& t, int var = 0,
                                     std::size_t prefix = 0) {
  if (var == t.k) return t.bits[prefix] ? bdd::kTrue : bdd::kFalse;
  const bdd::Bdd lo(m, build_from_table(m, t, var + 1, prefix));
  const bdd::Bdd hi(m, build_from_table(m, t, var + 1, prefix | (std::size_t{1} << var)));
  if (lo == hi) return lo.node();
  return m.node(static_cast<std::uint32_t>(var), lo.node(), hi.node());
}

struct Expr {
  bdd::Bdd f;
  TruthTable t;
};

/// Random expression of the given depth over k variables.
inline Expr random_expr(bdd::BddManager& m, int k, int depth, std::mt19937_64& rng) {
  if (depth == 0 || rng() % 4 == 0) {
    const int v = static_cast<int>(rng() % static_cast<unsigned>(k));
    if (rng() % 2) return {bdd::Bdd::nvar(m, static_cast<std::uint32_t>(v)), TruthTable::var(k, v).negated()};
    return {bdd::Bdd::var(m, static_cast<std::uint32_t>(v)), TruthTable::var(k, v)};
  }
  Expr a = random_expr(m, k, depth - 1, rng);
  Expr b = random_expr(m, k, depth - 1, rng);
  const auto op = static_cast<bdd::Op>(rng() % 4);
  return {bdd::Bdd(m, m.apply(op, a.f.node(), b.f.node())), a.t.combine(b.t, op)};
}

inline std::vector<std::uint32_t> random_subset(int k, std::mt19937_64& rng) {
  std::vector<std::uint32_t> out;
  for (int v = 0; v < k; ++v) {
    if (rng() % 3 == 0) out.push_back(static_cast<std::uint32_t>(v));
  }
  return out;
}

struct PropertyResult {
  long cases = 0;
  long failures = 0;
  std::vector<std::string> messages;

  void check(bool ok, const std::string& what) {
    ++cases;
    if (!ok) {
      ++failures;
      if (messages.size() < 20) messages.push_back(what);
    }
  }
};

/// Randomized comparison of apply, not, ite, exists, and_exists, rename,
/// satcount and eval against truth tables, plus canonicity against Shannon
/// expansion. Every iteration contributes several checks.
inline PropertyResult run_bdd_property_suite(int iterations, std::uint64_t seed,
                                             std::size_t capacity = std::size_t{1} << 16) {
  PropertyResult r;
  std::mt19937_64 rng(seed);
  for (int it = 0; it < iterations; ++it) {
    const int k = 1 + static_cast<int>(rng() % kMaxTableVars);
    // a few spare variables so satcount over supersets is exercised
    const int num_vars = k + 2;
    bdd::BddManager m(capacity, static_cast<std::uint32_t>(num_vars));
    const int depth = 1 + static_cast<int>(rng() % 5);
    Expr a = random_expr(m, k, depth, rng);
    Expr b = random_expr(m, k, depth, rng);
    Expr c = random_expr(m, k, depth, rng);
    const std::string tag = "iteration " + std::to_string(it) + " k=" + std::to_string(k);

    r.check(table_of(m, a.f.node(), k, num_vars) == a.t, tag + ": eval of random expression");
    for (int op = 0; op < 4; ++op) {
      const auto o = static_cast<bdd::Op>(op);
      const bdd::Bdd f(m, m.apply(o, a.f.node(), b.f.node()));
      const TruthTable expect = a.t.combine(b.t, o);
      r.check(table_of(m, f.node(), k, num_vars) == expect, tag + ": apply op " + std::to_string(op));
      r.check(f.node() == build_from_table(m, expect), tag + ": canonicity after apply");
    }
    r.check(table_of(m, (~a.f).node(), k, num_vars) == a.t.negated(), tag + ": not");
    const bdd::Bdd ite(m, m.ite(a.f.node(), b.f.node(), c.f.node()));
    r.check(table_of(m, ite.node(), k, num_vars) == a.t.ite(b.t, c.t), tag + ": ite");

    const auto qs = random_subset(k, rng);
    const bdd::VarSet q(qs);
    const TruthTable ex = a.t.exists(qs);
    const bdd::Bdd e = a.f.exists(q);
    r.check(table_of(m, e.node(), k, num_vars) == ex, tag + ": exists");
    r.check(e.node() == build_from_table(m, ex), tag + ": canonicity after exists");
    const TruthTable rp = a.t.combine(b.t, bdd::Op::And).exists(qs);
    r.check(table_of(m, a.f.and_exists(b.f, q).node(), k, num_vars) == rp, tag + ": and_exists");

    std::vector<std::uint32_t> all(static_cast<std::size_t>(k));
    for (int v = 0; v < k; ++v) all[static_cast<std::size_t>(v)] = static_cast<std::uint32_t>(v);
    r.check(m.satcount(a.f.node(), bdd::VarSet(all)) == a.t.count(), tag + ": satcount");
    std::vector<std::uint32_t> wider = all;
    wider.push_back(static_cast<std::uint32_t>(k));
    wider.push_back(static_cast<std::uint32_t>(k + 1));
    r.check(m.satcount(a.f.node(), bdd::VarSet(wider)) == bdd::BigCount(a.t.count()) * 4,
            tag + ": satcount over a superset");

    std::vector<std::uint32_t> perm(static_cast<std::size_t>(num_vars));
    for (int v = 0; v < num_vars; ++v) perm[static_cast<std::size_t>(v)] = static_cast<std::uint32_t>(v);
    std::shuffle(perm.begin(), perm.begin() + k, rng);
    const TruthTable ren = a.t.renamed(perm);
    const bdd::Bdd renamed(m, m.rename(a.f.node(), perm));
    r.check(table_of(m, renamed.node(), k, num_vars) == ren, tag + ": rename");
  }
  return r;
}

}  // namespace c4::testing
