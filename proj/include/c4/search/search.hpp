#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "c4/position.hpp"
#include "c4/store/wdl_store.hpp"

namespace c4::search {

/// Exact game-theoretic score for the player to move. 0 is a draw; +s means
/// the mover wins with its final disc at ply N+1−s, −s that the opponent does.
using Score = int;

/// Ply of the winning disc for a nonzero score.
inline int winning_ply(Score s, int max_ply) { return max_ply + 1 - (s < 0 ? -s : s); }

/// Score of a finished game from the perspective of the player to move.
Score terminal_score(const Position& pos);

enum class Bound : std::uint8_t { None = 0, Exact = 1, Lower = 2, Upper = 3 };

/// Always-replace table keyed by canonical (mirror-folded) position keys. The
/// full key is stored, so a hit is never an alias.
class TranspositionTable {
 public:
  explicit TranspositionTable(unsigned log2_entries);

  struct Hit {
    Bound bound = Bound::None;
    Score score = 0;
    int move = -1;  // in canonical orientation
  };

  Hit probe(std::uint64_t key) const;
  void store(std::uint64_t key, Bound bound, Score score, int move);
  void clear();
  std::size_t size() const { return keys_.size(); }

 private:
  std::size_t index(std::uint64_t key) const;

  std::vector<std::uint64_t> keys_;
  std::vector<std::uint16_t> data_;  // score+128 | bound << 8 | move << 10
};

class SearchTimeout : public std::runtime_error {
 public:
  SearchTimeout() : std::runtime_error("search deadline exceeded") {}
};

struct SearchOptions {
  unsigned tt_log2 = 22;
  /// Optional WDL table; probed while more than `probe_threshold` plies remain.
  const store::WdlStore* store = nullptr;
  int probe_threshold = 6;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct BestMove {
  int move = -1;  // 0-based column, -1 when the position is terminal
  Score score = 0;
  std::vector<int> principal_variation;
};

/// Decided score without search: an immediate win for the mover, or a loss
/// when the opponent holds threats the mover cannot all stop.
std::optional<Score> static_evaluate(const Position& pos);

/// Moves in `candidates` (a mask of playable cells) by threats created
/// (descending), distance to the centre column (ascending), then column.
std::vector<int> order_moves(const Position& pos, std::uint64_t candidates);
std::vector<int> order_moves(const Position& pos);

/// Alpha-beta principal-variation search over bitboards. Single-threaded;
/// give every worker its own instance.
class Searcher {
 public:
  explicit Searcher(SearchOptions options = {});

  /// Exact score of `pos` (terminal positions included).
  Score solve(const Position& pos);
  /// Window search on a non-terminal position. The result r satisfies
  /// r <= alpha ⇒ score <= r, r >= beta ⇒ score >= r, otherwise r == score.
  Score search(const Position& pos, Score alpha, Score beta);
  /// Move achieving the fastest win or slowest loss. The PV is followed for at
  /// most `pv_limit` plies (negative = to the end of the game).
  BestMove best_move(const Position& pos, int pv_limit = -1);

  std::uint64_t nodes() const { return nodes_; }
  const SearchOptions& options() const { return options_; }
  TranspositionTable& table() { return tt_; }

 private:
  Score negamax(const Position& pos, Score alpha, Score beta);
  int pick_best(const Position& pos, Score& score_out);
  std::uint64_t non_losing_moves(const Position& pos) const;

  SearchOptions options_;
  TranspositionTable tt_;
  std::uint64_t nodes_ = 0;
};

}  // namespace c4::search
