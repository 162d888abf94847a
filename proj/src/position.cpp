#include "c4/position.hpp"

#include <bit>
#include <memory>
#include <mutex>

namespace c4 {

namespace {

inline std::uint64_t shl(std::uint64_t x, int n) { return n >= 64 ? 0 : x << n; }
inline std::uint64_t shr(std::uint64_t x, int n) { return n >= 64 ? 0 : x >> n; }

Layout make_layout(int width, int height) {
  Layout l;
  l.width = width;
  l.height = height;
  l.max_ply = width * height;
  for (int c = 0; c < width; ++c) {
    l.column[c] = ((std::uint64_t{1} << height) - 1) << (c * (height + 1));
    l.bottom |= l.cell_bit(c, 0);
    l.board |= l.column[c];
  }
  return l;
}

}  // namespace

IllegalMove::IllegalMove(int ply_, const std::string& what)
    : std::invalid_argument(what), ply(ply_) {}

bool Layout::supported(int width, int height) {
  return width >= 1 && height >= 1 && width <= 13 && height <= 13 &&
         width * (height + 1) <= 64;
}

const Layout& Layout::get(int width, int height) {
  if (!supported(width, height)) {
    throw std::invalid_argument("bitboard layout needs width·(height+1) <= 64, got " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
  static std::array<std::array<std::unique_ptr<Layout>, 14>, 14> cache;
  static std::mutex lock;
  std::lock_guard guard(lock);
  auto& slot = cache[width][height];
  if (!slot) slot = std::make_unique<Layout>(make_layout(width, height));
  return *slot;
}

bool has_won(const Layout& layout, std::uint64_t discs) {
  const int h = layout.height;
  for (int d : {1, h + 1, h, h + 2}) {
    const std::uint64_t m = discs & shr(discs, d);
    if (m & shr(m, 2 * d)) return true;
  }
  return false;
}

std::uint64_t winning_cells(const Layout& layout, std::uint64_t p,
                            std::uint64_t occupied) {
  const int h = layout.height;
  // vertical: three stacked discs directly below
  std::uint64_t r = shl(p, 1) & shl(p, 2) & shl(p, 3);
  for (int d : {h + 1, h, h + 2}) {
    std::uint64_t pair = shl(p, d) & shl(p, 2 * d);
    r |= pair & shl(p, 3 * d);
    r |= pair & shr(p, d);
    pair = shr(p, d) & shr(p, 2 * d);
    r |= pair & shl(p, d);
    r |= pair & shr(p, 3 * d);
  }
  return r & (layout.board ^ occupied);
}

Position Position::from_moves(const Layout& layout, std::string_view moves) {
  Position p(layout);
  for (std::size_t i = 0; i < moves.size(); ++i) {
    const char ch = moves[i];
    const int ply = static_cast<int>(i);
    if (ch < '1' || ch > '9') {
      throw IllegalMove(ply, std::string("ply ") + std::to_string(ply + 1) +
                                 ": '" + ch + "' is not a column digit");
    }
    const int col = ch - '1';
    if (col >= layout.width) {
      throw IllegalMove(ply, "ply " + std::to_string(ply + 1) + ": column " +
                                 std::to_string(col + 1) + " does not exist");
    }
    if (!p.can_play(col)) {
      throw IllegalMove(ply, "ply " + std::to_string(ply + 1) + ": column " +
                                 std::to_string(col + 1) + " is full");
    }
    if (p.is_terminal()) {
      throw IllegalMove(ply, "ply " + std::to_string(ply + 1) +
                                 ": the game is already over");
    }
    p.play(col);
  }
  return p;
}

Position Position::from_discs(const Layout& layout, std::uint64_t first,
                              std::uint64_t second) {
  if (first & second) throw IllegalPosition("a cell is owned by both players");
  const std::uint64_t mask = first | second;
  if (mask & ~layout.board) throw IllegalPosition("disc outside the board");
  for (int c = 0; c < layout.width; ++c) {
    const std::uint64_t col = (mask & layout.column[c]) >> (c * (layout.height + 1));
    if (col & (col + 1)) throw IllegalPosition("floating disc in column " + std::to_string(c + 1));
  }
  const int n1 = std::popcount(first);
  const int n2 = std::popcount(second);
  if (n1 != n2 && n1 != n2 + 1) throw IllegalPosition("impossible disc counts");
  Position p(layout);
  p.mask_ = mask;
  p.ply_ = n1 + n2;
  p.current_ = (p.ply_ & 1) ? second : first;
  return p;
}

void Position::play(int col) {
  if (!can_play(col)) {
    throw IllegalMove(ply_, "column " + std::to_string(col + 1) + " is not playable");
  }
  current_ ^= mask_;
  mask_ |= mask_ + layout_->bottom_bit(col);
  ++ply_;
}

std::vector<int> Position::legal_moves() const {
  std::vector<int> out;
  for (int c = 0; c < layout_->width; ++c) {
    if (can_play(c)) out.push_back(c);
  }
  return out;
}

int Position::column_height(int col) const {
  return std::popcount(mask_ & layout_->column[col]);
}

int Position::cell(int col, int row) const {
  const std::uint64_t bit = layout_->cell_bit(col, row);
  if (!(mask_ & bit)) return 0;
  return (first_player_discs() & bit) ? 1 : 2;
}

Position Position::mirrored() const {
  Position m(*layout_);
  const int stride = layout_->height + 1;
  for (int c = 0; c < layout_->width; ++c) {
    const int target = layout_->width - 1 - c;
    const int shift = (target - c) * stride;
    const std::uint64_t cm = current_ & layout_->column[c];
    const std::uint64_t mm = mask_ & layout_->column[c];
    m.current_ |= shift >= 0 ? cm << shift : cm >> -shift;
    m.mask_ |= shift >= 0 ? mm << shift : mm >> -shift;
  }
  m.ply_ = ply_;
  return m;
}

std::uint64_t Position::canonical_key() const {
  const std::uint64_t k = key();
  const std::uint64_t mk = mirrored().key();
  return k < mk ? k : mk;
}

std::string Position::to_string() const {
  std::string s;
  for (int r = layout_->height - 1; r >= 0; --r) {
    for (int c = 0; c < layout_->width; ++c) {
      s += ".XO"[cell(c, r)];
    }
    s += '\n';
  }
  return s;
}

int count_threats(const Position& pos, int player) {
  const std::uint64_t discs =
      player == 1 ? pos.first_player_discs() : pos.second_player_discs();
  return std::popcount(winning_cells(pos.layout(), discs, pos.mask()));
}

std::string moves_to_string(const std::vector<int>& columns) {
  std::string s;
  for (int c : columns) s += static_cast<char>('1' + c);
  return s;
}

}  // namespace c4
