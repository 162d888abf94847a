#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "c4/solver/symbolic_solver.hpp"
#include "support/grid_oracle.hpp"

using namespace c4;
using namespace c4::solver;
using encoding::EncodingKind;

namespace {

void check_against_oracle(int w, int h, EncodingKind kind) {
  CAPTURE(w);
  CAPTURE(h);
  CAPTURE(encoding::to_string(kind));
  const c4::testing::GridOracle oracle(w, h);
  SymbolicSolver s({w, h}, kind, 1 << 20);
  auto layers = s.forward_pass(std::nullopt, {}, true);
  s.backward_pass(layers, {}, {}, true);
  const auto& enc = s.encoding();
  for (const auto& l : layers) {
    const auto& o = oracle.counts(l.ply);
    CAPTURE(l.ply);
    CHECK(l.counts.total == o.total);
    CHECK(l.counts.terminal == o.terminal);
    CHECK(l.counts.win == o.win);
    CHECK(l.counts.draw == o.draw);
    CHECK(l.counts.lost == o.loss);
  }
  long mismatches = 0;
  oracle.for_each([&](const c4::testing::Grid& g, int ply, int score) {
    const Position p = c4::testing::to_position(g);
    const auto a = enc.assignment(p);
    const auto& l = layers[static_cast<std::size_t>(ply)];
    const bool win = l.win.eval(a);
    const bool lost = l.lost.eval(a);
    if (win != (score > 0) || lost != (score < 0) || !l.states.eval(a)) ++mismatches;
  });
  CHECK(mismatches == 0);
}

}  // namespace

TEST_CASE("backward pass matches the explicit oracle on small boards") {
  for (auto [w, h] : {std::pair{4, 4}, std::pair{4, 3}, std::pair{3, 4}, std::pair{5, 3}}) {
    for (auto k : {EncodingKind::StandardRowWise, EncodingKind::StandardColumnWise,
                   EncodingKind::Compressed}) {
      check_against_oracle(w, h, k);
    }
  }
}

TEST_CASE("3x3 has no terminal positions and ends drawn") {
  SymbolicSolver s({3, 3}, EncodingKind::StandardRowWise, 1 << 16);
  auto layers = s.forward_pass();
  s.backward_pass(layers);
  for (const auto& l : layers) CHECK(l.counts.terminal == 0);
  CHECK(layers[9].counts.draw == layers[9].counts.total);
  CHECK(layers[0].counts.draw == 1);
}

TEST_CASE("first-player rows swap won and lost at odd plies") {
  PlyCounts even{2, 10, 1, 3, 4, 3, true};
  PlyCounts odd{3, 10, 1, 3, 4, 3, true};
  odd.win = 5;
  odd.lost = 1;
  CHECK(first_player_row(even).won == 3);
  CHECK(first_player_row(even).lost == 3);
  CHECK(first_player_row(odd).won == 1);
  CHECK(first_player_row(odd).lost == 5);
  CHECK(first_player_row(odd).drawn == 4);
}

TEST_CASE("truncated forward pass on 7x6") {
  SymbolicSolver s({7, 6}, EncodingKind::StandardRowWise, 1 << 20);
  const auto r = s.count_positions(8);
  const std::uint64_t totals[] = {1, 7, 49, 238, 1120, 4263, 16422, 54859, 184275};
  REQUIRE(r.plies.size() == 9);
  for (int i = 0; i <= 8; ++i) CHECK(r.plies[static_cast<std::size_t>(i)].total == totals[i]);
  CHECK(r.plies[7].terminal == 728);
  CHECK(r.plies[8].terminal == 1892);
}

TEST_CASE("a tiny pool aborts with the ply and high-water mark") {
  try {
    SymbolicSolver s({5, 4}, EncodingKind::StandardRowWise, 2000);
    s.count_positions();
    FAIL("expected an abort");
  } catch (const SolveAborted& e) {
    CHECK(e.capacity == 2000);
    CHECK(e.high_water <= 2000);
    CHECK(std::string(e.what()).find("ply") != std::string::npos);
  }
}

TEST_CASE("report JSON keeps timing apart") {
  SymbolicSolver s({4, 4}, EncodingKind::Compressed, 1 << 18);
  const auto r = s.count_positions();
  const auto with = to_json(r);
  const auto without = to_json(r, false);
  CHECK(with.contains("timing"));
  CHECK_FALSE(without.contains("timing"));
  auto stripped = with;
  stripped.erase("timing");
  CHECK(stripped == without);
  CHECK(without["total"] == 161029);
}

TEST_CASE("large counts serialize as strings") {
  CHECK(count_to_json(BigCount(12)).is_number_unsigned());
  const BigCount big = BigCount(1) << 70;
  CHECK(count_to_json(big) == big.str());
}
