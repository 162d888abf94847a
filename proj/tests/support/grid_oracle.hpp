#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "c4/position.hpp"

namespace c4::testing {

/// Plain w×h grid, cells[col][row] in {0, 1, 2}; row 0 is the bottom.
struct Grid {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> cells;  // col * height + row

  Grid(int w, int h) : width(w), height(h), cells(static_cast<std::size_t>(w * h), 0) {}

  std::uint8_t at(int col, int row) const {
    return cells[static_cast<std::size_t>(col * height + row)];
  }
  std::uint8_t& at(int col, int row) { return cells[static_cast<std::size_t>(col * height + row)]; }
  int column_height(int col) const;
  /// Drops a disc; false when the column is full.
  bool drop(int col, std::uint8_t player);
  /// 2 bits per cell.
  std::uint64_t code() const;
  static Grid decode(int w, int h, std::uint64_t code);
  static Grid from_position(const Position& pos);
};

/// Four-in-a-row for `player` by scanning every window.
bool naive_has_won(const Grid& g, std::uint8_t player);
/// Empty cells (playable or not) that would complete a window for `player`.
int naive_threat_count(const Grid& g, std::uint8_t player);
/// Number of distinct four-cell windows on a w×h board.
int naive_window_count(int width, int height);

struct OracleCounts {
  std::uint64_t total = 0;
  std::uint64_t terminal = 0;
  std::uint64_t win = 0;   // mover perspective
  std::uint64_t draw = 0;
  std::uint64_t loss = 0;  // terminal positions included
};

/// Exhaustive retrograde negamax over every reachable position, stored as
/// per-ply sorted code vectors. Scores follow the solver convention: +s means
/// the mover wins with its final disc at ply N+1-s.
class GridOracle {
 public:
  GridOracle(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  int max_ply() const { return width_ * height_; }

  const OracleCounts& counts(int ply) const { return counts_[static_cast<std::size_t>(ply)]; }
  /// Throws std::out_of_range for an unreachable grid.
  int score(const Grid& g, int ply) const;
  int score(const Position& pos) const;
  bool terminal(const Position& pos) const;
  /// Columns (0-based) whose move achieves the position's score.
  std::vector<int> optimal_moves(const Position& pos) const;
  /// Visits every reachable position with its score.
  void for_each(const std::function<void(const Grid&, int ply, int score)>& fn) const;
  /// Sorted codes of every reachable position at `ply`.
  std::vector<std::uint64_t> codes(int ply) const { return layers_[static_cast<std::size_t>(ply)]; }

 private:
  int width_;
  int height_;
  std::vector<std::vector<std::uint64_t>> layers_;
  std::vector<std::vector<std::int8_t>> scores_;
  std::vector<OracleCounts> counts_;
};

/// Position from a grid, via Position::from_discs.
Position to_position(const Grid& g);

}  // namespace c4::testing
