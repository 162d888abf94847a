#include "c4/search/search.hpp"

#include <algorithm>
#include <array>
#include <bit>

namespace c4::search {

namespace {

std::uint64_t mix(std::uint64_t h) {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

int column_of(const Layout& layout, std::uint64_t cell) {
  return std::countr_zero(cell) / (layout.height + 1);
}

std::uint64_t opponent_winning_cells(const Position& pos) {
  return winning_cells(pos.layout(), pos.opponent(), pos.mask());
}

}  // namespace

Score terminal_score(const Position& pos) {
  if (pos.last_mover_won()) return -(pos.layout().max_ply + 1 - pos.ply());
  return 0;
}

// ---------------------------------------------------------------------------
// TranspositionTable

TranspositionTable::TranspositionTable(unsigned log2_entries) {
  if (log2_entries > 30) throw std::invalid_argument("transposition table too large");
  keys_.assign(std::size_t{1} << log2_entries, 0);
  data_.assign(std::size_t{1} << log2_entries, 0);
}

std::size_t TranspositionTable::index(std::uint64_t key) const {
  return static_cast<std::size_t>(mix(key)) & (keys_.size() - 1);
}

TranspositionTable::Hit TranspositionTable::probe(std::uint64_t key) const {
  const std::size_t i = index(key);
  const std::uint16_t d = data_[i];
  const auto bound = static_cast<Bound>((d >> 8) & 3);
  if (bound == Bound::None || keys_[i] != key) return {};
  const int move = (d >> 10) & 15;
  return Hit{bound, static_cast<int>(d & 0xFF) - 128, move == 15 ? -1 : move};
}

void TranspositionTable::store(std::uint64_t key, Bound bound, Score score, int move) {
  const std::size_t i = index(key);
  keys_[i] = key;
  data_[i] = static_cast<std::uint16_t>((score + 128) | (static_cast<int>(bound) << 8) |
                                        ((move < 0 ? 15 : move) << 10));
}

void TranspositionTable::clear() {
  std::fill(keys_.begin(), keys_.end(), 0);
  std::fill(data_.begin(), data_.end(), 0);
}

// ---------------------------------------------------------------------------
// Move ordering and static evaluation

std::vector<int> order_moves(const Position& pos, std::uint64_t candidates) {
  const Layout& layout = pos.layout();
  struct Ranked {
    int threats;
    int centre_distance;
    int column;
  };
  std::array<Ranked, 16> ranked{};
  int n = 0;
  for (int col = 0; col < layout.width; ++col) {
    const std::uint64_t cell = candidates & layout.column[col];
    if (!cell) continue;
    const std::uint64_t mine = pos.current() | cell;
    const std::uint64_t occupied = pos.mask() | cell;
    ranked[n++] = Ranked{std::popcount(winning_cells(layout, mine, occupied)),
                         std::abs(2 * col - (layout.width - 1)), col};
  }
  std::stable_sort(ranked.begin(), ranked.begin() + n, [](const Ranked& a, const Ranked& b) {
    if (a.threats != b.threats) return a.threats > b.threats;
    if (a.centre_distance != b.centre_distance) return a.centre_distance < b.centre_distance;
    return a.column < b.column;
  });
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(ranked[i].column);
  return out;
}

std::vector<int> order_moves(const Position& pos) {
  return order_moves(pos, pos.playable_cells());
}

std::optional<Score> static_evaluate(const Position& pos) {
  const int n = pos.layout().max_ply;
  const int ply = pos.ply();
  if (ply >= n) return 0;
  if (pos.can_win_next()) return n - ply;
  const std::uint64_t possible = pos.playable_cells();
  const std::uint64_t threats = opponent_winning_cells(pos);
  const std::uint64_t forced = possible & threats;
  // two immediately playable threats cannot both be stopped
  if (forced & (forced - 1)) return -(n - 1 - ply);
  const std::uint64_t candidates = (forced ? forced : possible) & ~(threats >> 1);
  if (candidates == 0) return -(n - 1 - ply);
  if (ply >= n - 2) return 0;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Searcher

Searcher::Searcher(SearchOptions options) : options_(options), tt_(options.tt_log2) {}

std::uint64_t Searcher::non_losing_moves(const Position& pos) const {
  std::uint64_t possible = pos.playable_cells();
  const std::uint64_t threats = opponent_winning_cells(pos);
  const std::uint64_t forced = possible & threats;
  if (forced) {
    if (forced & (forced - 1)) return 0;
    possible = forced;
  }
  return possible & ~(threats >> 1);
}

Score Searcher::negamax(const Position& pos, Score alpha, Score beta) {
  ++nodes_;
  if (options_.deadline && (nodes_ & 4095) == 0 &&
      std::chrono::steady_clock::now() > *options_.deadline) {
    throw SearchTimeout();
  }
  const Layout& layout = pos.layout();
  const int n = layout.max_ply;
  const int ply = pos.ply();

  if (pos.can_win_next()) return n - ply;
  std::uint64_t next = non_losing_moves(pos);
  if (next == 0) return -(n - 1 - ply);
  if (ply >= n - 2) return 0;

  const Score lowest = -(n - 3 - ply);
  if (alpha < lowest) {
    alpha = lowest;
    if (alpha >= beta) return alpha;
  }
  const Score highest = n - 2 - ply;
  if (beta > highest) {
    beta = highest;
    if (alpha >= beta) return beta;
  }

  const std::uint64_t key = pos.key();
  const std::uint64_t mirror_key = pos.mirrored().key();
  const bool mirrored = mirror_key < key;
  const std::uint64_t canonical = mirrored ? mirror_key : key;
  int tt_move = -1;
  if (const auto hit = tt_.probe(canonical); hit.bound != Bound::None) {
    if (hit.bound == Bound::Exact) return hit.score;
    if (hit.bound == Bound::Lower) alpha = std::max(alpha, hit.score);
    if (hit.bound == Bound::Upper) beta = std::min(beta, hit.score);
    if (alpha >= beta) return hit.score;
    if (hit.move >= 0) tt_move = mirrored ? layout.width - 1 - hit.move : hit.move;
  }

  if (options_.store && n - ply > options_.probe_threshold) {
    const store::Wdl wdl = options_.store->lookup(pos);
    if (wdl == store::Wdl::Draw) return 0;
    if (wdl == store::Wdl::Win) {
      alpha = std::max(alpha, 1);
      if (alpha >= beta) return alpha;
      std::uint64_t winning = 0;
      for (std::uint64_t rest = next; rest; rest &= rest - 1) {
        const std::uint64_t cell = rest & -rest;
        const Position child = pos.played(column_of(layout, cell));
        if (options_.store->lookup(child) == store::Wdl::Loss) winning |= cell;
      }
      next = winning;
    } else {
      beta = std::min(beta, -1);
      if (alpha >= beta) return beta;
    }
  }

  std::vector<int> moves = order_moves(pos, next);
  if (tt_move >= 0) {
    auto it = std::find(moves.begin(), moves.end(), tt_move);
    if (it != moves.end()) std::rotate(moves.begin(), it, it + 1);
  }

  const Score window_low = alpha;
  Score best = -(n + 1);
  int best_move = -1;
  bool first = true;
  for (int col : moves) {
    const Position child = pos.played(col);
    Score s;
    if (first) {
      s = -negamax(child, -beta, -alpha);
      first = false;
    } else {
      s = -negamax(child, -alpha - 1, -alpha);
      if (s > alpha && s < beta) s = -negamax(child, -beta, -alpha);
    }
    if (s > best) {
      best = s;
      best_move = col;
    }
    if (s > alpha) alpha = s;
    if (alpha >= beta) break;
  }

  const Bound bound = best <= window_low ? Bound::Upper
                      : best >= beta     ? Bound::Lower
                                         : Bound::Exact;
  tt_.store(canonical, bound, best,
            best_move < 0 ? -1 : (mirrored ? layout.width - 1 - best_move : best_move));
  return best;
}

Score Searcher::search(const Position& pos, Score alpha, Score beta) {
  if (pos.is_terminal()) return terminal_score(pos);
  return negamax(pos, alpha, beta);
}

Score Searcher::solve(const Position& pos) {
  if (pos.is_terminal()) return terminal_score(pos);
  const int n = pos.layout().max_ply;
  const int ply = pos.ply();
  if (pos.can_win_next()) return n - ply;

  Score lo = -(n - ply);
  Score hi = n - ply;
  if (options_.store && options_.store->has_layer(ply)) {
    switch (options_.store->lookup(pos)) {
      case store::Wdl::Draw: return 0;
      case store::Wdl::Win: lo = 1; break;
      case store::Wdl::Loss: hi = -1; break;
    }
  }
  // null-window bisection on the score, biased towards zero
  while (lo < hi) {
    if (options_.deadline && std::chrono::steady_clock::now() > *options_.deadline) {
      throw SearchTimeout();
    }
    Score mid = lo + (hi - lo) / 2;
    if (mid <= 0 && lo / 2 < mid) {
      mid = lo / 2;
    } else if (mid >= 0 && hi / 2 > mid) {
      mid = hi / 2;
    }
    const Score r = negamax(pos, mid, mid + 1);
    if (r <= mid) {
      hi = r;
    } else {
      lo = r;
    }
  }
  return lo;
}

int Searcher::pick_best(const Position& pos, Score& score_out) {
  const int n = pos.layout().max_ply;
  std::vector<int> moves = order_moves(pos);
  if (options_.store && options_.store->has_layer(pos.ply() + 1)) {
    // only children in the best WDL class can hold the best score
    std::vector<store::Wdl> values;
    store::Wdl best_class = store::Wdl::Loss;
    for (int col : moves) {
      values.push_back(store::negate(options_.store->lookup(pos.played(col))));
      best_class = std::max(best_class, values.back());
    }
    std::vector<int> kept;
    for (std::size_t i = 0; i < moves.size(); ++i) {
      if (values[i] == best_class) kept.push_back(moves[i]);
    }
    moves = std::move(kept);
  }
  int best_move = -1;
  Score best = -(n + 2);
  for (int col : moves) {
    const Position child = pos.played(col);
    const Score s = child.last_mover_won() ? n - pos.ply() : -solve(child);
    if (s > best) {
      best = s;
      best_move = col;
    }
  }
  score_out = best;
  return best_move;
}

BestMove Searcher::best_move(const Position& pos, int pv_limit) {
  BestMove result;
  if (pos.is_terminal()) {
    result.score = terminal_score(pos);
    return result;
  }
  result.move = pick_best(pos, result.score);
  result.principal_variation.push_back(result.move);
  Position line = pos.played(result.move);
  while (!line.is_terminal() &&
         (pv_limit < 0 || static_cast<int>(result.principal_variation.size()) < pv_limit)) {
    Score ignored;
    const int m = pick_best(line, ignored);
    result.principal_variation.push_back(m);
    line.play(m);
  }
  return result;
}

}  // namespace c4::search
