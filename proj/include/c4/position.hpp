#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace c4 {

class IllegalMove : public std::invalid_argument {
 public:
  IllegalMove(int ply, const std::string& what);
  int ply;  // 0-based index into the move sequence
};

class IllegalPosition : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Bit layout of a w×h board: column c occupies bits [c·(h+1), c·(h+1)+h],
/// the top bit of every column being an always-empty guard.
struct Layout {
  int width = 0;
  int height = 0;
  int max_ply = 0;
  std::uint64_t bottom = 0;  // bottom cell of every column
  std::uint64_t board = 0;   // every playable cell
  std::array<std::uint64_t, 16> column{};

  static bool supported(int width, int height);
  /// Shared immutable layout; throws std::invalid_argument if unsupported.
  static const Layout& get(int width, int height);

  std::uint64_t cell_bit(int col, int row) const {
    return std::uint64_t{1} << (col * (height + 1) + row);
  }
  std::uint64_t bottom_bit(int col) const { return cell_bit(col, 0); }
  std::uint64_t top_bit(int col) const { return cell_bit(col, height - 1); }
};

/// Any four-in-a-row among `discs`.
bool has_won(const Layout& layout, std::uint64_t discs);

/// Empty cells that would complete a four-in-a-row for `discs`.
std::uint64_t winning_cells(const Layout& layout, std::uint64_t discs,
                            std::uint64_t occupied);

/// Two-mask bitboard: `current` holds the discs of the player to move, `mask`
/// every disc on the board.
class Position {
 public:
  explicit Position(const Layout& layout) : layout_(&layout) {}

  /// Plays 1-based column digits; throws IllegalMove naming the offending ply.
  static Position from_moves(const Layout& layout, std::string_view moves);
  /// Validates gravity and disc counts; throws IllegalPosition.
  static Position from_discs(const Layout& layout, std::uint64_t first,
                             std::uint64_t second);

  const Layout& layout() const { return *layout_; }
  int width() const { return layout_->width; }
  int height() const { return layout_->height; }
  int ply() const { return ply_; }
  std::uint64_t current() const { return current_; }
  std::uint64_t mask() const { return mask_; }
  std::uint64_t opponent() const { return current_ ^ mask_; }
  std::uint64_t first_player_discs() const {
    return (ply_ & 1) ? opponent() : current_;
  }
  std::uint64_t second_player_discs() const {
    return (ply_ & 1) ? current_ : opponent();
  }
  /// 1 when the first player is to move, 2 otherwise.
  int side_to_move() const { return (ply_ & 1) + 1; }

  bool can_play(int col) const {
    return col >= 0 && col < layout_->width && (mask_ & layout_->top_bit(col)) == 0;
  }
  void play(int col);
  Position played(int col) const {
    Position p = *this;
    p.play(col);
    return p;
  }
  /// Bottom-most empty cell of every non-full column.
  std::uint64_t playable_cells() const {
    return (mask_ + layout_->bottom) & layout_->board;
  }
  std::vector<int> legal_moves() const;
  int column_height(int col) const;
  int cell(int col, int row) const;  // 0 empty, 1 first player, 2 second

  bool is_winning_move(int col) const {
    return (winning_cells(*layout_, current_, mask_) & playable_cells() &
            layout_->column[col]) != 0;
  }
  bool can_win_next() const {
    return (winning_cells(*layout_, current_, mask_) & playable_cells()) != 0;
  }
  bool last_mover_won() const { return has_won(*layout_, opponent()); }
  bool is_full() const { return ply_ == layout_->max_ply; }
  bool is_terminal() const { return last_mover_won() || is_full(); }

  /// Unique per position.
  std::uint64_t key() const { return current_ + mask_; }
  std::uint64_t canonical_key() const;
  Position mirrored() const;

  std::string to_string() const;

  friend bool operator==(const Position& a, const Position& b) {
    return a.layout_ == b.layout_ && a.current_ == b.current_ && a.mask_ == b.mask_;
  }

 private:
  const Layout* layout_;
  std::uint64_t current_ = 0;
  std::uint64_t mask_ = 0;
  int ply_ = 0;
};

/// Number of empty cells that would complete a four-in-a-row for `player`
/// (1 = first, 2 = second).
int count_threats(const Position& pos, int player);

std::string moves_to_string(const std::vector<int>& columns);

}  // namespace c4
