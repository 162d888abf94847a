#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "c4/bdd/manager.hpp"
#include "c4/position.hpp"

namespace c4::encoding {

struct BoardGeometry {
  int width = 7;
  int height = 6;

  int max_ply() const { return width * height; }
  bool valid() const { return width >= 1 && height >= 1 && width <= 13 && height <= 13; }
  /// Throws std::invalid_argument outside 1..13 × 1..13.
  void validate() const;
  friend bool operator==(const BoardGeometry&, const BoardGeometry&) = default;
};

enum class EncodingKind : std::uint32_t {
  StandardRowWise = 0,
  StandardColumnWise = 1,
  Compressed = 2,
};

std::string_view to_string(EncodingKind kind);
/// Accepts "standard-row", "standard-col" and "compressed".
std::optional<EncodingKind> parse_encoding(std::string_view name);

/// The two board copies: S (current) and S′ (successor).
enum class Copy : int { S = 0, Sp = 1 };

inline Copy other(Copy c) { return c == Copy::S ? Copy::Sp : Copy::S; }
/// Layers alternate between the copies, so no renaming is ever needed.
inline Copy copy_for_ply(int ply) { return (ply & 1) ? Copy::Sp : Copy::S; }

/// A 4-in-a-row window as (column, row) cells.
using Window = std::array<std::array<int, 2>, 4>;
std::vector<Window> four_windows(const BoardGeometry& g);

/// Variable layout for one board geometry.
///
/// Variables 0 and 1 are the side-to-move bits of S and S′. Standard kinds
/// then give every cell four variables in the order p1·S, p1·S′, p2·S, p2·S′
/// (cells enumerated bottom row first for row-wise, left column first for
/// column-wise). The compressed kind gives every cell of a (height+1)-row
/// column one variable per copy, S before S′: cells below the topmost set bit
/// hold discs (1 = first player), the topmost set bit marks the lowest empty
/// cell.
class Encoding {
 public:
  Encoding(BoardGeometry geometry, EncodingKind kind);

  const BoardGeometry& geometry() const { return geometry_; }
  EncodingKind kind() const { return kind_; }
  bool compressed() const { return kind_ == EncodingKind::Compressed; }

  std::uint32_t num_vars() const { return num_vars_; }
  std::uint32_t vars_per_copy() const { return num_vars_ / 2; }

  std::uint32_t stm_var(Copy c) const { return static_cast<std::uint32_t>(c); }
  /// Standard kinds: player is 1 or 2.
  std::uint32_t occupant_var(int col, int row, int player, Copy c) const;
  /// Compressed kind: row in [0, height].
  std::uint32_t column_cell_var(int col, int row, Copy c) const;

  const bdd::VarSet& vars(Copy c) const { return vars_[static_cast<int>(c)]; }
  /// Permutation exchanging every S variable with its S′ twin.
  std::vector<std::uint32_t> copy_swap() const;

  /// Assignment describing `pos` in both copies; pos must match the geometry.
  bdd::Assignment assignment(const Position& pos) const;
  void write_assignment(const Position& pos, bdd::Assignment& out) const;
  /// Board described by the `c` half of an assignment, or nullopt when that
  /// half is not a legal board (or its side-to-move bit disagrees).
  std::optional<Position> decode(const bdd::Assignment& a, Copy c) const;

 private:
  std::uint32_t cell_index(int col, int row) const;

  BoardGeometry geometry_;
  EncodingKind kind_;
  std::uint32_t num_vars_;
  std::array<bdd::VarSet, 2> vars_;
};

/// Per-column relations, indexed by mover (0 = first player) and by the copy
/// the relation reads from. from == S is trans(S,S′); from == S′ is the
/// mirrored trans′(S′,S).
struct TransitionRelation {
  std::array<std::array<std::vector<bdd::Bdd>, 2>, 2> per_action;

  const std::vector<bdd::Bdd>& from(Copy c, int mover) const {
    return per_action[mover][static_cast<int>(c)];
  }
  const std::vector<bdd::Bdd>& forward(int mover) const { return from(Copy::S, mover); }
  const std::vector<bdd::Bdd>& mirrored(int mover) const { return from(Copy::Sp, mover); }
  /// Relation used to leave a layer at `ply`.
  const std::vector<bdd::Bdd>& for_ply(int ply) const {
    return from(copy_for_ply(ply), ply & 1);
  }
};

/// Empty board, first player to move, expressed over copy `c`.
bdd::Bdd encode_initial(bdd::BddManager& m, const Encoding& enc, Copy c = Copy::S);

bdd::Bdd encode_position(bdd::BddManager& m, const Encoding& enc, const Position& pos,
                         Copy c);

TransitionRelation build_transition(bdd::BddManager& m, const Encoding& enc);

/// One BDD per 4-window asserting that `player` (1 or 2) owns all four cells
/// in copy `c`.
std::vector<bdd::Bdd> terminal_clauses(bdd::BddManager& m, const Encoding& enc,
                                       int player, Copy c);

/// states ∧ ¬(any clause), subtracting one clause at a time.
bdd::Bdd subtract_terminals(const bdd::Bdd& states, const std::vector<bdd::Bdd>& clauses);
/// states ∧ (any clause), accumulated one clause at a time.
bdd::Bdd intersect_terminals(const bdd::Bdd& states, const std::vector<bdd::Bdd>& clauses);

/// Successors of `states` (over `from` copy) under the per-action relations,
/// expressed over the other copy.
bdd::Bdd image(const bdd::Bdd& states, const std::vector<bdd::Bdd>& relation,
               const bdd::VarSet& from_vars);
/// Predecessors of `targets` (over the other copy) expressed over `from` copy.
bdd::Bdd preimage(const bdd::Bdd& targets, const std::vector<bdd::Bdd>& relation,
                  const bdd::VarSet& target_vars);

}  // namespace c4::encoding
