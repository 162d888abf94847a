#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "c4/encoding/encoding.hpp"
#include "c4/solver/symbolic_solver.hpp"
#include "support/grid_oracle.hpp"

using namespace c4;
using namespace c4::encoding;
using bdd::Bdd;
using bdd::BddManager;

namespace {

const EncodingKind kKinds[] = {EncodingKind::StandardRowWise, EncodingKind::StandardColumnWise,
                               EncodingKind::Compressed};

Position random_position(const Layout& l, std::mt19937_64& rng) {
  Position p(l);
  const int plies = static_cast<int>(rng() % static_cast<unsigned>(l.max_ply + 1));
  for (int i = 0; i < plies && !p.is_terminal(); ++i) {
    const auto moves = p.legal_moves();
    p.play(moves[rng() % moves.size()]);
  }
  return p;
}

}  // namespace

TEST_CASE("variable counts") {
  CHECK(Encoding({7, 6}, EncodingKind::StandardRowWise).num_vars() == 170);
  CHECK(Encoding({7, 6}, EncodingKind::StandardColumnWise).num_vars() == 170);
  CHECK(Encoding({7, 6}, EncodingKind::Compressed).num_vars() == 100);
}

TEST_CASE("encoding names parse") {
  for (auto k : kKinds) CHECK(parse_encoding(to_string(k)) == k);
  CHECK_FALSE(parse_encoding("bogus").has_value());
}

TEST_CASE("S and S' variables interleave") {
  for (auto k : kKinds) {
    const Encoding e({5, 4}, k);
    const auto& s = e.vars(Copy::S).vars();
    const auto& sp = e.vars(Copy::Sp).vars();
    REQUIRE(s.size() == sp.size());
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(sp[i] == s[i] + 1);
    const auto swap = e.copy_swap();
    for (std::uint32_t v = 0; v < e.num_vars(); ++v) CHECK(swap[v] == (v ^ 1u));
  }
}

TEST_CASE("window enumeration matches the naive count") {
  for (int w = 1; w <= 9; ++w) {
    for (int h = 1; h <= 9; ++h) {
      CHECK(static_cast<int>(four_windows({w, h}).size()) == c4::testing::naive_window_count(w, h));
    }
  }
  CHECK(four_windows({7, 6}).size() == 69);
}

TEST_CASE("assignments round-trip through decode") {
  std::mt19937_64 rng(11);
  for (auto k : kKinds) {
    for (auto [w, h] : {std::pair{7, 6}, std::pair{4, 4}, std::pair{5, 4}, std::pair{6, 5}}) {
      const Encoding e({w, h}, k);
      const Layout& l = Layout::get(w, h);
      for (int i = 0; i < 300; ++i) {
        const Position p = random_position(l, rng);
        const auto a = e.assignment(p);
        for (Copy c : {Copy::S, Copy::Sp}) {
          const auto back = e.decode(a, c);
          REQUIRE(back.has_value());
          CHECK(*back == p);
        }
      }
    }
  }
}

TEST_CASE("a single encoded position has one model per copy") {
  std::mt19937_64 rng(3);
  for (auto k : kKinds) {
    const Encoding e({5, 4}, k);
    BddManager m(1 << 16, e.num_vars());
    const Layout& l = Layout::get(5, 4);
    for (int i = 0; i < 50; ++i) {
      const Position p = random_position(l, rng);
      const Bdd f = encode_position(m, e, p, Copy::S);
      CHECK(f.satcount(e.vars(Copy::S)) == 1);
      CHECK(f.eval(e.assignment(p)));
    }
  }
}

TEST_CASE("image of one position is exactly its children") {
  std::mt19937_64 rng(9);
  for (auto k : kKinds) {
    const Encoding e({5, 4}, k);
    BddManager m(1 << 18, e.num_vars());
    const auto trans = build_transition(m, e);
    const Layout& l = Layout::get(5, 4);
    for (int i = 0; i < 60; ++i) {
      Position p = random_position(l, rng);
      if (p.is_terminal()) continue;
      const Copy from = copy_for_ply(p.ply());
      const Bdd img = image(encode_position(m, e, p, from), trans.for_ply(p.ply()), e.vars(from));
      Bdd expect = Bdd::constant(m, false);
      for (int col : p.legal_moves()) expect |= encode_position(m, e, p.played(col), other(from));
      CHECK(img == expect);
      const Bdd pre = preimage(img, trans.for_ply(p.ply()), e.vars(other(from)));
      CHECK(pre.eval(e.assignment(p)));
    }
  }
}

TEST_CASE("terminal clauses detect four in a row") {
  for (auto k : kKinds) {
    const Encoding e({5, 4}, k);
    BddManager m(1 << 16, e.num_vars());
    const Layout& l = Layout::get(5, 4);
    const auto clauses = terminal_clauses(m, e, 1, Copy::S);
    CHECK(clauses.size() == four_windows({5, 4}).size());
    const Position won = Position::from_moves(l, "1212121");
    const Position open = Position::from_moves(l, "121212");
    const Bdd w = encode_position(m, e, won, Copy::S);
    const Bdd o = encode_position(m, e, open, Copy::S);
    CHECK(intersect_terminals(w, clauses) == w);
    CHECK(subtract_terminals(w, clauses).is_false());
    CHECK(intersect_terminals(o, clauses).is_false());
  }
}

TEST_CASE("per-ply counts agree across encodings and with the explicit oracle") {
  for (auto [w, h] : {std::pair{4, 4}, std::pair{3, 5}, std::pair{5, 3}}) {
    const c4::testing::GridOracle oracle(w, h);
    std::vector<std::vector<solver::PlyCounts>> runs;
    for (auto k : kKinds) {
      solver::SymbolicSolver s({w, h}, k, 1 << 20);
      const auto r = s.count_positions();
      runs.push_back(r.plies);
      for (const auto& p : r.plies) {
        CHECK(p.total == oracle.counts(p.ply).total);
        CHECK(p.terminal == oracle.counts(p.ply).terminal);
      }
    }
    for (std::size_t i = 0; i < runs[0].size(); ++i) {
      CHECK(runs[1][i].total == runs[0][i].total);
      CHECK(runs[2][i].total == runs[0][i].total);
    }
  }
}

TEST_CASE("decoded layer models are exactly the reachable positions") {
  const c4::testing::GridOracle oracle(4, 4);
  for (auto k : kKinds) {
    solver::SymbolicSolver s({4, 4}, k, 1 << 20);
    auto layers = s.forward_pass(7);
    const auto& e = s.encoding();
    for (int ply : {5, 6, 7}) {
      std::vector<std::uint64_t> codes;
      const Copy c = copy_for_ply(ply);
      s.manager().for_each_sat(layers[static_cast<std::size_t>(ply)].states.node(), e.vars(c),
                               [&](const bdd::Assignment& a) {
                                 const auto p = e.decode(a, c);
                                 REQUIRE(p.has_value());
                                 codes.push_back(c4::testing::Grid::from_position(*p).code());
                                 return true;
                               });
      std::sort(codes.begin(), codes.end());
      CHECK(codes == oracle.codes(ply));
    }
  }
}
