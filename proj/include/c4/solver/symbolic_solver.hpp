#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "c4/bdd/manager.hpp"
#include "c4/encoding/encoding.hpp"

namespace c4::solver {

using bdd::BigCount;

/// Counts for one ply. win/draw/lost are from the perspective of the player
/// to move and only meaningful once `solved`.
struct PlyCounts {
  int ply = 0;
  BigCount total = 0;
  BigCount terminal = 0;
  BigCount win = 0;
  BigCount draw = 0;
  BigCount lost = 0;
  bool solved = false;
};

/// The same counts from the first player's point of view, as tabulated in
/// the usual won/drawn/lost tables: at odd plies the second player moves, so
/// its losses are the first player's wins.
struct FirstPlayerRow {
  int ply;
  BigCount won, drawn, lost, total, terminal;
};
FirstPlayerRow first_player_row(const PlyCounts& c);

struct LayerSet {
  int ply = 0;
  bdd::Bdd states;  // empty when released to disk
  bdd::Bdd win;
  bdd::Bdd lost;
  PlyCounts counts;
};

struct PassStats {
  double seconds = 0;
  double gc_seconds = 0;
  std::size_t gc_runs = 0;
  std::size_t peak_live_nodes = 0;  // max over plies of nodes reachable from live handles
  std::size_t high_water = 0;       // arena high-water mark
};

struct CountReport {
  encoding::BoardGeometry geometry;
  encoding::EncodingKind kind;
  std::vector<PlyCounts> plies;
  BigCount grand_total = 0;
  PassStats stats;
};

struct SolveReport {
  encoding::BoardGeometry geometry;
  encoding::EncodingKind kind;
  std::size_t node_capacity = 0;
  std::vector<PlyCounts> plies;
  PassStats forward;
  PassStats backward;
  double seconds = 0;
  /// Value of the empty board for the first player: 1 win, 0 draw, -1 loss.
  int root_value = 0;
};

class SolveAborted : public std::runtime_error {
 public:
  SolveAborted(int ply, std::size_t capacity, std::size_t high_water);
  int ply;
  std::size_t capacity;
  std::size_t high_water;
};

using LayerCallback = std::function<void(LayerSet&)>;
using LayerLoader = std::function<bdd::Bdd(int ply)>;

/// Layered symbolic search: a forward reachability pass over plies followed by
/// a retrograde win/draw/loss pass. Layer i lives on copy S for even i and on
/// S′ for odd i, so successive layers are linked by trans and trans′ without
/// renaming.
class SymbolicSolver {
 public:
  SymbolicSolver(encoding::BoardGeometry geometry, encoding::EncodingKind kind,
                 std::size_t node_capacity);

  bdd::BddManager& manager() { return manager_; }
  const encoding::Encoding& encoding() const { return enc_; }
  const encoding::TransitionRelation& transitions() const { return trans_; }

  /// States at ply i that end the game: the player who just moved has four
  /// in a row.
  bdd::Bdd terminal_states(int ply, const bdd::Bdd& states) const;
  bdd::Bdd non_terminal_states(int ply, const bdd::Bdd& states) const;

  /// Runs plies 0..min(max_ply, N). `on_layer` sees every layer as soon as it
  /// is counted; with retain == false the states handle is dropped afterwards.
  std::vector<LayerSet> forward_pass(std::optional<int> max_ply = std::nullopt,
                                     const LayerCallback& on_layer = {}, bool retain = true);
  CountReport count_positions(std::optional<int> max_ply = std::nullopt);

  /// Requires the forward pass to have reached ply N. Layers whose states were
  /// released are fetched through `load`. `on_solved` sees each layer once its
  /// win/lost sets are known; with retain == false win/lost/states are then
  /// dropped.
  void backward_pass(std::vector<LayerSet>& layers, const LayerLoader& load = {},
                     const LayerCallback& on_solved = {}, bool retain = true);

  /// Full pipeline writing `<out_root>/w<W>h<H>/layer_<ply>.{states,win,lost}.bdd`
  /// and report.json. A file named INCOMPLETE marks an aborted run.
  SolveReport solve(const std::filesystem::path& out_root);

  const PassStats& last_pass_stats() const { return last_stats_; }

 private:
  template <class F>
  auto step(int ply, F&& f);
  void sample_live();

  encoding::Encoding enc_;
  bdd::BddManager manager_;
  encoding::TransitionRelation trans_;
  // clauses_[player-1][copy]
  std::array<std::array<std::vector<bdd::Bdd>, 2>, 2> clauses_;
  PassStats last_stats_;
};

nlohmann::json to_json(const CountReport& r, bool include_timing = true);
nlohmann::json to_json(const SolveReport& r, bool include_timing = true);
nlohmann::json count_to_json(const BigCount& c);

}  // namespace c4::solver
