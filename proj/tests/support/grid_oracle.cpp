#include "grid_oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace c4::testing {

namespace {

constexpr int kDirs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};

bool inside(const Grid& g, int c, int r) { return c >= 0 && c < g.width && r >= 0 && r < g.height; }

}  // namespace

int Grid::column_height(int col) const {
  int h = 0;
  while (h < height && at(col, h) != 0) ++h;
  return h;
}

bool Grid::drop(int col, std::uint8_t player) {
  const int h = column_height(col);
  if (h == height) return false;
  at(col, h) = player;
  return true;
}

std::uint64_t Grid::code() const {
  if (cells.size() > 32) throw std::invalid_argument("grid too large for a 64-bit code");
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) c |= std::uint64_t{cells[i]} << (2 * i);
  return c;
}

Grid Grid::decode(int w, int h, std::uint64_t code) {
  Grid g(w, h);
  for (std::size_t i = 0; i < g.cells.size(); ++i) g.cells[i] = (code >> (2 * i)) & 3;
  return g;
}

Grid Grid::from_position(const Position& pos) {
  Grid g(pos.width(), pos.height());
  for (int c = 0; c < g.width; ++c) {
    for (int r = 0; r < g.height; ++r) g.at(c, r) = static_cast<std::uint8_t>(pos.cell(c, r));
  }
  return g;
}

bool naive_has_won(const Grid& g, std::uint8_t player) {
  for (int c = 0; c < g.width; ++c) {
    for (int r = 0; r < g.height; ++r) {
      for (const auto& d : kDirs) {
        int k = 0;
        while (k < 4 && inside(g, c + k * d[0], r + k * d[1]) &&
               g.at(c + k * d[0], r + k * d[1]) == player) {
          ++k;
        }
        if (k == 4) return true;
      }
    }
  }
  return false;
}

int naive_threat_count(const Grid& g, std::uint8_t player) {
  std::vector<std::uint8_t> threat(g.cells.size(), 0);
  for (int c = 0; c < g.width; ++c) {
    for (int r = 0; r < g.height; ++r) {
      for (const auto& d : kDirs) {
        if (!inside(g, c + 3 * d[0], r + 3 * d[1])) continue;
        int owned = 0;
        int empty = -1;
        for (int k = 0; k < 4; ++k) {
          const int cc = c + k * d[0], rr = r + k * d[1];
          if (g.at(cc, rr) == player) {
            ++owned;
          } else if (g.at(cc, rr) == 0) {
            empty = cc * g.height + rr;
          }
        }
        if (owned == 3 && empty >= 0) threat[static_cast<std::size_t>(empty)] = 1;
      }
    }
  }
  int n = 0;
  for (auto t : threat) n += t;
  return n;
}

int naive_window_count(int width, int height) {
  int n = 0;
  Grid g(width, height);
  for (int c = 0; c < width; ++c) {
    for (int r = 0; r < height; ++r) {
      for (const auto& d : kDirs) {
        if (inside(g, c + 3 * d[0], r + 3 * d[1])) ++n;
      }
    }
  }
  return n;
}

Position to_position(const Grid& g) {
  const Layout& layout = Layout::get(g.width, g.height);
  std::uint64_t first = 0;
  std::uint64_t second = 0;
  for (int c = 0; c < g.width; ++c) {
    for (int r = 0; r < g.height; ++r) {
      if (g.at(c, r) == 1) first |= layout.cell_bit(c, r);
      if (g.at(c, r) == 2) second |= layout.cell_bit(c, r);
    }
  }
  return Position::from_discs(layout, first, second);
}

GridOracle::GridOracle(int width, int height) : width_(width), height_(height) {
  const int n = width * height;
  layers_.resize(static_cast<std::size_t>(n + 1));
  scores_.resize(static_cast<std::size_t>(n + 1));
  counts_.resize(static_cast<std::size_t>(n + 1));
  layers_[0].push_back(Grid(width, height).code());

  auto won_by_last_mover = [&](const Grid& g, int ply) {
    return ply > 0 && naive_has_won(g, static_cast<std::uint8_t>(((ply - 1) & 1) + 1));
  };

  for (int ply = 0; ply < n; ++ply) {
    auto& next = layers_[static_cast<std::size_t>(ply + 1)];
    const auto mover = static_cast<std::uint8_t>((ply & 1) + 1);
    for (std::uint64_t code : layers_[static_cast<std::size_t>(ply)]) {
      const Grid g = Grid::decode(width, height, code);
      if (won_by_last_mover(g, ply)) continue;
      for (int c = 0; c < width; ++c) {
        Grid child = g;
        if (child.drop(c, mover)) next.push_back(child.code());
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
  }

  for (int ply = n; ply >= 0; --ply) {
    const auto& layer = layers_[static_cast<std::size_t>(ply)];
    auto& scores = scores_[static_cast<std::size_t>(ply)];
    OracleCounts& counts = counts_[static_cast<std::size_t>(ply)];
    scores.resize(layer.size());
    const auto mover = static_cast<std::uint8_t>((ply & 1) + 1);
    for (std::size_t i = 0; i < layer.size(); ++i) {
      const Grid g = Grid::decode(width, height, layer[i]);
      int s;
      if (won_by_last_mover(g, ply)) {
        s = -(n + 1 - ply);
        ++counts.terminal;
      } else if (ply == n) {
        s = 0;
      } else {
        s = -(n + 1);
        for (int c = 0; c < width; ++c) {
          Grid child = g;
          if (child.drop(c, mover)) s = std::max(s, -score(child, ply + 1));
        }
      }
      scores[i] = static_cast<std::int8_t>(s);
      ++counts.total;
      if (s > 0) ++counts.win;
      if (s == 0) ++counts.draw;
      if (s < 0) ++counts.loss;
    }
  }
}

int GridOracle::score(const Grid& g, int ply) const {
  const auto& layer = layers_.at(static_cast<std::size_t>(ply));
  const std::uint64_t code = g.code();
  const auto it = std::lower_bound(layer.begin(), layer.end(), code);
  if (it == layer.end() || *it != code) throw std::out_of_range("position not reachable");
  return scores_[static_cast<std::size_t>(ply)][static_cast<std::size_t>(it - layer.begin())];
}

int GridOracle::score(const Position& pos) const {
  return score(Grid::from_position(pos), pos.ply());
}

bool GridOracle::terminal(const Position& pos) const {
  const Grid g = Grid::from_position(pos);
  return pos.ply() == max_ply() ||
         (pos.ply() > 0 && naive_has_won(g, static_cast<std::uint8_t>(((pos.ply() - 1) & 1) + 1)));
}

std::vector<int> GridOracle::optimal_moves(const Position& pos) const {
  std::vector<int> out;
  if (terminal(pos)) return out;
  const int target = score(pos);
  const Grid g = Grid::from_position(pos);
  const auto mover = static_cast<std::uint8_t>((pos.ply() & 1) + 1);
  for (int c = 0; c < width_; ++c) {
    Grid child = g;
    if (child.drop(c, mover) && -score(child, pos.ply() + 1) == target) out.push_back(c);
  }
  return out;
}

void GridOracle::for_each(const std::function<void(const Grid&, int, int)>& fn) const {
  for (std::size_t ply = 0; ply < layers_.size(); ++ply) {
    for (std::size_t i = 0; i < layers_[ply].size(); ++i) {
      fn(Grid::decode(width_, height_, layers_[ply][i]), static_cast<int>(ply), scores_[ply][i]);
    }
  }
}

}  // namespace c4::testing
