#include "c4/encoding/encoding.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace c4::encoding {

using bdd::Bdd;
using bdd::BddManager;

void BoardGeometry::validate() const {
  if (!valid()) {
    throw std::invalid_argument("board must be between 1x1 and 13x13, got " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
}

std::string_view to_string(EncodingKind kind) {
  switch (kind) {
    case EncodingKind::StandardRowWise: return "standard-row";
    case EncodingKind::StandardColumnWise: return "standard-col";
    case EncodingKind::Compressed: return "compressed";
  }
  return "unknown";
}

std::optional<EncodingKind> parse_encoding(std::string_view name) {
  if (name == "standard-row") return EncodingKind::StandardRowWise;
  if (name == "standard-col") return EncodingKind::StandardColumnWise;
  if (name == "compressed") return EncodingKind::Compressed;
  return std::nullopt;
}

std::vector<Window> four_windows(const BoardGeometry& g) {
  std::vector<Window> out;
  const int w = g.width;
  const int h = g.height;
  for (int c = 0; c < w; ++c) {
    for (int r = 0; r + 3 < h; ++r) out.push_back({{{c, r}, {c, r + 1}, {c, r + 2}, {c, r + 3}}});
  }
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c + 3 < w; ++c) out.push_back({{{c, r}, {c + 1, r}, {c + 2, r}, {c + 3, r}}});
  }
  for (int c = 0; c + 3 < w; ++c) {
    for (int r = 0; r + 3 < h; ++r) {
      out.push_back({{{c, r}, {c + 1, r + 1}, {c + 2, r + 2}, {c + 3, r + 3}}});
      out.push_back({{{c, r + 3}, {c + 1, r + 2}, {c + 2, r + 1}, {c + 3, r}}});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Encoding

Encoding::Encoding(BoardGeometry geometry, EncodingKind kind)
    : geometry_(geometry), kind_(kind) {
  geometry_.validate();
  const auto w = static_cast<std::uint32_t>(geometry_.width);
  const auto h = static_cast<std::uint32_t>(geometry_.height);
  num_vars_ = compressed() ? 2 + 2 * w * (h + 1) : 2 + 4 * w * h;
  for (int c = 0; c < 2; ++c) {
    std::vector<std::uint32_t> vs;
    for (std::uint32_t v = static_cast<std::uint32_t>(c); v < num_vars_; v += 2) vs.push_back(v);
    vars_[c] = bdd::VarSet(std::move(vs));
  }
}

std::uint32_t Encoding::cell_index(int col, int row) const {
  switch (kind_) {
    case EncodingKind::StandardRowWise:
      return static_cast<std::uint32_t>(row * geometry_.width + col);
    case EncodingKind::StandardColumnWise:
      return static_cast<std::uint32_t>(col * geometry_.height + row);
    case EncodingKind::Compressed:
      return static_cast<std::uint32_t>(col * (geometry_.height + 1) + row);
  }
  return 0;
}

std::uint32_t Encoding::occupant_var(int col, int row, int player, Copy c) const {
  return 2 + 4 * cell_index(col, row) + 2 * static_cast<std::uint32_t>(player - 1) +
         static_cast<std::uint32_t>(c);
}

std::uint32_t Encoding::column_cell_var(int col, int row, Copy c) const {
  return 2 + 2 * cell_index(col, row) + static_cast<std::uint32_t>(c);
}

std::vector<std::uint32_t> Encoding::copy_swap() const {
  std::vector<std::uint32_t> perm(num_vars_);
  for (std::uint32_t v = 0; v < num_vars_; ++v) perm[v] = v ^ 1u;
  return perm;
}

bdd::Assignment Encoding::assignment(const Position& pos) const {
  bdd::Assignment a(num_vars_, 0);
  write_assignment(pos, a);
  return a;
}

void Encoding::write_assignment(const Position& pos, bdd::Assignment& a) const {
  if (pos.width() != geometry_.width || pos.height() != geometry_.height) {
    throw IllegalPosition("position geometry does not match the encoding");
  }
  a.assign(num_vars_, 0);
  const std::uint8_t stm = static_cast<std::uint8_t>(pos.ply() & 1);
  a[stm_var(Copy::S)] = stm;
  a[stm_var(Copy::Sp)] = stm;
  for (int col = 0; col < geometry_.width; ++col) {
    if (compressed()) {
      const int k = pos.column_height(col);
      for (int row = 0; row < k; ++row) {
        const std::uint8_t bit = pos.cell(col, row) == 1 ? 1 : 0;
        a[column_cell_var(col, row, Copy::S)] = bit;
        a[column_cell_var(col, row, Copy::Sp)] = bit;
      }
      a[column_cell_var(col, k, Copy::S)] = 1;
      a[column_cell_var(col, k, Copy::Sp)] = 1;
    } else {
      for (int row = 0; row < geometry_.height; ++row) {
        const int o = pos.cell(col, row);
        if (o == 0) continue;
        a[occupant_var(col, row, o, Copy::S)] = 1;
        a[occupant_var(col, row, o, Copy::Sp)] = 1;
      }
    }
  }
}

std::optional<Position> Encoding::decode(const bdd::Assignment& a, Copy c) const {
  if (!Layout::supported(geometry_.width, geometry_.height)) {
    throw std::invalid_argument("decoding needs a bitboard-sized geometry");
  }
  const Layout& layout = Layout::get(geometry_.width, geometry_.height);
  std::uint64_t first = 0;
  std::uint64_t second = 0;
  for (int col = 0; col < geometry_.width; ++col) {
    if (compressed()) {
      int marker = -1;
      for (int row = geometry_.height; row >= 0; --row) {
        if (a[column_cell_var(col, row, c)]) {
          marker = row;
          break;
        }
      }
      if (marker < 0) return std::nullopt;
      for (int row = 0; row < marker; ++row) {
        (a[column_cell_var(col, row, c)] ? first : second) |= layout.cell_bit(col, row);
      }
    } else {
      for (int row = 0; row < geometry_.height; ++row) {
        const bool p1 = a[occupant_var(col, row, 1, c)];
        const bool p2 = a[occupant_var(col, row, 2, c)];
        if (p1 && p2) return std::nullopt;
        if (p1) first |= layout.cell_bit(col, row);
        if (p2) second |= layout.cell_bit(col, row);
      }
    }
  }
  try {
    Position p = Position::from_discs(layout, first, second);
    if (a[stm_var(c)] != static_cast<std::uint8_t>(p.ply() & 1)) return std::nullopt;
    return p;
  } catch (const IllegalPosition&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// BDD construction

namespace {

Bdd lit(BddManager& m, std::uint32_t v, bool positive) {
  return positive ? Bdd::var(m, v) : Bdd::nvar(m, v);
}

Bdd equal(BddManager& m, std::uint32_t a, std::uint32_t b) {
  return ~(Bdd::var(m, a) ^ Bdd::var(m, b));
}

/// stm of `from` says `mover` moves; stm of `to` says the other player does.
Bdd side_to_move_step(BddManager& m, const Encoding& enc, int mover, Copy from) {
  return lit(m, enc.stm_var(from), mover == 1) & lit(m, enc.stm_var(other(from)), mover == 0);
}

Bdd standard_action(BddManager& m, const Encoding& enc, int mover, int col, Copy from) {
  const Copy to = other(from);
  const int w = enc.geometry().width;
  const int h = enc.geometry().height;
  const int me = mover + 1;
  const int them = 2 - mover;

  Bdd frame = Bdd::constant(m, true);
  for (int c = 0; c < w; ++c) {
    if (c == col) continue;
    for (int r = 0; r < h; ++r) {
      for (int p = 1; p <= 2; ++p) {
        frame &= equal(m, enc.occupant_var(c, r, p, from), enc.occupant_var(c, r, p, to));
      }
    }
  }

  Bdd column = Bdd::constant(m, false);
  for (int r = 0; r < h; ++r) {
    Bdd step = lit(m, enc.occupant_var(col, r, 1, from), false) &
               lit(m, enc.occupant_var(col, r, 2, from), false);
    if (r > 0) {
      step &= Bdd::var(m, enc.occupant_var(col, r - 1, 1, from)) |
              Bdd::var(m, enc.occupant_var(col, r - 1, 2, from));
    }
    step &= Bdd::var(m, enc.occupant_var(col, r, me, to)) &
            Bdd::nvar(m, enc.occupant_var(col, r, them, to));
    for (int rr = 0; rr < h; ++rr) {
      if (rr == r) continue;
      for (int p = 1; p <= 2; ++p) {
        step &= equal(m, enc.occupant_var(col, rr, p, from), enc.occupant_var(col, rr, p, to));
      }
    }
    column |= step;
  }
  return side_to_move_step(m, enc, mover, from) & frame & column;
}

Bdd compressed_action(BddManager& m, const Encoding& enc, int mover, int col, Copy from) {
  const Copy to = other(from);
  const int w = enc.geometry().width;
  const int h = enc.geometry().height;

  Bdd frame = Bdd::constant(m, true);
  for (int c = 0; c < w; ++c) {
    if (c == col) continue;
    for (int r = 0; r <= h; ++r) {
      frame &= equal(m, enc.column_cell_var(c, r, from), enc.column_cell_var(c, r, to));
    }
  }

  Bdd column = Bdd::constant(m, false);
  for (int k = 0; k < h; ++k) {
    // marker at k: x_k set, everything above clear
    Bdd step = Bdd::var(m, enc.column_cell_var(col, k, from));
    for (int j = k + 1; j <= h; ++j) step &= Bdd::nvar(m, enc.column_cell_var(col, j, from));
    step &= lit(m, enc.column_cell_var(col, k, to), mover == 0);
    step &= Bdd::var(m, enc.column_cell_var(col, k + 1, to));
    for (int j = 0; j <= h; ++j) {
      if (j == k || j == k + 1) continue;
      step &= equal(m, enc.column_cell_var(col, j, from), enc.column_cell_var(col, j, to));
    }
    column |= step;
  }
  return side_to_move_step(m, enc, mover, from) & frame & column;
}

/// Cell (col,row) holds a disc of `player` in copy c.
Bdd owns(BddManager& m, const Encoding& enc, int col, int row, int player, Copy c) {
  if (!enc.compressed()) {
    return Bdd::var(m, enc.occupant_var(col, row, player, c)) &
           Bdd::nvar(m, enc.occupant_var(col, row, 3 - player, c));
  }
  Bdd occupied = Bdd::constant(m, false);
  for (int j = row + 1; j <= enc.geometry().height; ++j) {
    occupied |= Bdd::var(m, enc.column_cell_var(col, j, c));
  }
  return lit(m, enc.column_cell_var(col, row, c), player == 1) & occupied;
}

}  // namespace

Bdd encode_initial(BddManager& m, const Encoding& enc, Copy c) {
  const int w = enc.geometry().width;
  const int h = enc.geometry().height;
  Bdd f = Bdd::nvar(m, enc.stm_var(c));
  for (int col = 0; col < w; ++col) {
    if (enc.compressed()) {
      for (int r = 0; r <= h; ++r) f &= lit(m, enc.column_cell_var(col, r, c), r == 0);
    } else {
      for (int r = 0; r < h; ++r) {
        f &= Bdd::nvar(m, enc.occupant_var(col, r, 1, c)) &
             Bdd::nvar(m, enc.occupant_var(col, r, 2, c));
      }
    }
  }
  return f;
}

Bdd encode_position(BddManager& m, const Encoding& enc, const Position& pos, Copy c) {
  const bdd::Assignment a = enc.assignment(pos);
  Bdd f = Bdd::constant(m, true);
  for (auto v : enc.vars(c).vars()) f &= lit(m, v, a[v] != 0);
  return f;
}

TransitionRelation build_transition(BddManager& m, const Encoding& enc) {
  TransitionRelation t;
  for (int mover = 0; mover < 2; ++mover) {
    for (Copy from : {Copy::S, Copy::Sp}) {
      auto& list = t.per_action[mover][static_cast<int>(from)];
      for (int col = 0; col < enc.geometry().width; ++col) {
        list.push_back(enc.compressed() ? compressed_action(m, enc, mover, col, from)
                                        : standard_action(m, enc, mover, col, from));
      }
    }
  }
  return t;
}

std::vector<Bdd> terminal_clauses(BddManager& m, const Encoding& enc, int player, Copy c) {
  std::vector<Bdd> out;
  for (const Window& win : four_windows(enc.geometry())) {
    Bdd clause = Bdd::constant(m, true);
    for (const auto& [col, row] : win) clause &= owns(m, enc, col, row, player, c);
    out.push_back(std::move(clause));
  }
  return out;
}

Bdd subtract_terminals(const Bdd& states, const std::vector<Bdd>& clauses) {
  Bdd rest = states;
  for (const Bdd& clause : clauses) {
    rest -= clause;
    if (rest.is_false()) break;
  }
  return rest;
}

Bdd intersect_terminals(const Bdd& states, const std::vector<Bdd>& clauses) {
  Bdd acc = Bdd::constant(*states.manager(), false);
  Bdd rest = states;
  for (const Bdd& clause : clauses) {
    // positions already collected need not be tested again
    Bdd hit = rest & clause;
    if (hit.is_false()) continue;
    acc |= hit;
    rest -= hit;
  }
  return acc;
}

Bdd image(const Bdd& states, const std::vector<Bdd>& relation, const bdd::VarSet& from_vars) {
  BddManager& m = *states.manager();
  Bdd out = Bdd::constant(m, false);
  for (const Bdd& r : relation) out |= states.and_exists(r, from_vars);
  return out;
}

Bdd preimage(const Bdd& targets, const std::vector<Bdd>& relation,
             const bdd::VarSet& target_vars) {
  BddManager& m = *targets.manager();
  Bdd out = Bdd::constant(m, false);
  for (const Bdd& r : relation) out |= r.and_exists(targets, target_vars);
  return out;
}

}  // namespace c4::encoding
