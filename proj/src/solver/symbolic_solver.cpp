#include "c4/solver/symbolic_solver.hpp"

#include <chrono>
#include <fstream>
#include <limits>

#include "c4/store/bdd_file.hpp"
#include "c4/store/wdl_store.hpp"

namespace c4::solver {

namespace fs = std::filesystem;
using bdd::Bdd;
using encoding::Copy;
using encoding::copy_for_ply;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

}  // namespace

SolveAborted::SolveAborted(int ply_, std::size_t capacity_, std::size_t high_water_)
    : std::runtime_error("node pool exhausted at ply " + std::to_string(ply_) +
                         " (capacity " + std::to_string(capacity_) + ", high-water mark " +
                         std::to_string(high_water_) + ")"),
      ply(ply_),
      capacity(capacity_),
      high_water(high_water_) {}

FirstPlayerRow first_player_row(const PlyCounts& c) {
  const bool first_to_move = (c.ply & 1) == 0;
  return FirstPlayerRow{c.ply,
                        first_to_move ? c.win : c.lost,
                        c.draw,
                        first_to_move ? c.lost : c.win,
                        c.total,
                        c.terminal};
}

SymbolicSolver::SymbolicSolver(encoding::BoardGeometry geometry, encoding::EncodingKind kind,
                               std::size_t node_capacity)
    : enc_(geometry, kind), manager_(node_capacity, enc_.num_vars()) {
  try {
    trans_ = encoding::build_transition(manager_, enc_);
    for (int player = 1; player <= 2; ++player) {
      for (Copy c : {Copy::S, Copy::Sp}) {
        clauses_[player - 1][static_cast<int>(c)] =
            encoding::terminal_clauses(manager_, enc_, player, c);
      }
    }
  } catch (const bdd::PoolExhausted& e) {
    throw SolveAborted(0, e.capacity, e.high_water);
  }
}

template <class F>
auto SymbolicSolver::step(int ply, F&& f) {
  try {
    return f();
  } catch (const bdd::PoolExhausted&) {
  }
  manager_.collect();
  try {
    return f();
  } catch (const bdd::PoolExhausted& e) {
    throw SolveAborted(ply, e.capacity, e.high_water);
  }
}

void SymbolicSolver::sample_live() {
  last_stats_.peak_live_nodes = std::max(last_stats_.peak_live_nodes, manager_.live_node_count());
}

Bdd SymbolicSolver::terminal_states(int ply, const Bdd& states) const {
  if (ply == 0) return Bdd::constant(*states.manager(), false);
  // the previous mover is the first player at odd plies
  const int player = (ply & 1) ? 1 : 2;
  return encoding::intersect_terminals(
      states, clauses_[player - 1][static_cast<int>(copy_for_ply(ply))]);
}

Bdd SymbolicSolver::non_terminal_states(int ply, const Bdd& states) const {
  if (ply == 0) return states;
  const int player = (ply & 1) ? 1 : 2;
  return encoding::subtract_terminals(
      states, clauses_[player - 1][static_cast<int>(copy_for_ply(ply))]);
}

std::vector<LayerSet> SymbolicSolver::forward_pass(std::optional<int> max_ply,
                                                   const LayerCallback& on_layer, bool retain) {
  const auto start = Clock::now();
  const auto before = manager_.stats();
  last_stats_ = PassStats{};
  const int last = std::min(enc_.geometry().max_ply(), max_ply.value_or(enc_.geometry().max_ply()));

  std::vector<LayerSet> layers;
  Bdd states = step(0, [&] { return encoding::encode_initial(manager_, enc_, Copy::S); });
  for (int ply = 0; ply <= last; ++ply) {
    LayerSet layer;
    layer.ply = ply;
    Bdd non_terminal = step(ply, [&] {
      const Bdd terminal = terminal_states(ply, states);
      layer.counts.ply = ply;
      layer.counts.total = states.satcount(enc_.vars(copy_for_ply(ply)));
      layer.counts.terminal = terminal.satcount(enc_.vars(copy_for_ply(ply)));
      return non_terminal_states(ply, states);
    });
    layer.states = states;
    Bdd next;
    if (ply < last) {
      next = step(ply, [&] {
        return encoding::image(non_terminal, trans_.for_ply(ply), enc_.vars(copy_for_ply(ply)));
      });
    }
    non_terminal.reset();
    sample_live();
    if (on_layer) on_layer(layer);
    if (!retain) layer.states.reset();
    layers.push_back(std::move(layer));
    if (ply < last) states = std::move(next);
  }
  states.reset();

  const auto after = manager_.stats();
  last_stats_.seconds = seconds_since(start);
  last_stats_.gc_seconds = after.gc_seconds - before.gc_seconds;
  last_stats_.gc_runs = after.gc_runs - before.gc_runs;
  last_stats_.high_water = after.high_water;
  return layers;
}

CountReport SymbolicSolver::count_positions(std::optional<int> max_ply) {
  CountReport report;
  report.geometry = enc_.geometry();
  report.kind = enc_.kind();
  auto layers = forward_pass(max_ply, {}, false);
  for (auto& l : layers) {
    report.grand_total += l.counts.total;
    report.plies.push_back(l.counts);
  }
  report.stats = last_stats_;
  return report;
}

void SymbolicSolver::backward_pass(std::vector<LayerSet>& layers, const LayerLoader& load,
                                   const LayerCallback& on_solved, bool retain) {
  const int n = enc_.geometry().max_ply();
  if (static_cast<int>(layers.size()) != n + 1) {
    throw std::invalid_argument("backward pass needs every layer up to ply " + std::to_string(n));
  }
  const auto start = Clock::now();
  const auto before = manager_.stats();
  last_stats_ = PassStats{};

  Bdd next_lost;
  Bdd next_draw;
  for (int ply = n; ply >= 0; --ply) {
    LayerSet& layer = layers[static_cast<std::size_t>(ply)];
    if (!layer.states.valid()) {
      if (!load) throw std::invalid_argument("layer " + std::to_string(ply) + " was released");
      layer.states = load(ply);
    }
    const bdd::VarSet& here = enc_.vars(copy_for_ply(ply));
    Bdd draw = step(ply, [&] {
      const Bdd terminal = terminal_states(ply, layer.states);
      const Bdd non_terminal = non_terminal_states(ply, layer.states);
      Bdd d;
      if (ply == n) {
        layer.win = Bdd::constant(manager_, false);
        d = non_terminal;
      } else {
        const auto& rel = trans_.for_ply(ply);
        const bdd::VarSet& there = enc_.vars(copy_for_ply(ply + 1));
        layer.win = encoding::preimage(next_lost, rel, there) & non_terminal;
        d = (encoding::preimage(next_draw, rel, there) & non_terminal) - layer.win;
      }
      layer.lost = ((non_terminal - layer.win) - d) | terminal;
      layer.counts.ply = ply;
      layer.counts.total = layer.states.satcount(here);
      layer.counts.terminal = terminal.satcount(here);
      layer.counts.win = layer.win.satcount(here);
      layer.counts.draw = d.satcount(here);
      layer.counts.lost = layer.lost.satcount(here);
      layer.counts.solved = true;
      return d;
    });
    next_lost = layer.lost;
    next_draw = std::move(draw);
    sample_live();
    if (on_solved) on_solved(layer);
    if (!retain) {
      layer.states.reset();
      layer.win.reset();
      layer.lost.reset();
    }
  }

  const auto after = manager_.stats();
  last_stats_.seconds = seconds_since(start);
  last_stats_.gc_seconds = after.gc_seconds - before.gc_seconds;
  last_stats_.gc_runs = after.gc_runs - before.gc_runs;
  last_stats_.high_water = after.high_water;
}

SolveReport SymbolicSolver::solve(const fs::path& out_root) {
  const auto start = Clock::now();
  const fs::path dir = store::store_directory(out_root, enc_.geometry());
  fs::create_directories(dir);
  const fs::path marker = dir / "INCOMPLETE";
  std::ofstream(marker) << "solve in progress or aborted\n";

  auto meta_for = [&](int ply) {
    return store::BddFileMeta{static_cast<std::uint32_t>(enc_.geometry().width),
                              static_cast<std::uint32_t>(enc_.geometry().height),
                              static_cast<std::uint32_t>(ply),
                              static_cast<std::uint32_t>(enc_.kind()), enc_.num_vars()};
  };

  SolveReport report;
  report.geometry = enc_.geometry();
  report.kind = enc_.kind();
  report.node_capacity = manager_.capacity();

  auto layers = forward_pass(
      std::nullopt,
      [&](LayerSet& l) {
        store::save_bdd(manager_, l.states.node(), meta_for(l.ply),
                        store::layer_path(dir, l.ply, "states"));
      },
      false);
  report.forward = last_stats_;

  backward_pass(
      layers,
      [&](int ply) {
        return step(ply, [&] {
          return store::load_bdd(manager_, store::layer_path(dir, ply, "states"));
        });
      },
      [&](LayerSet& l) {
        store::save_bdd(manager_, l.win.node(), meta_for(l.ply), store::layer_path(dir, l.ply, "win"));
        store::save_bdd(manager_, l.lost.node(), meta_for(l.ply),
                        store::layer_path(dir, l.ply, "lost"));
      },
      false);
  report.backward = last_stats_;

  for (const auto& l : layers) report.plies.push_back(l.counts);
  const PlyCounts& root = report.plies.front();
  report.root_value = root.win > 0 ? 1 : (root.lost > 0 ? -1 : 0);
  report.seconds = seconds_since(start);

  std::ofstream(dir / "report.json") << to_json(report).dump(2) << '\n';
  fs::remove(marker);
  return report;
}

nlohmann::json count_to_json(const BigCount& c) {
  if (c >= 0 && c <= std::numeric_limits<std::uint64_t>::max()) {
    return c.convert_to<std::uint64_t>();
  }
  return c.str();
}

namespace {

nlohmann::json stats_json(const PassStats& s) {
  return {{"peak_live_nodes", s.peak_live_nodes}, {"high_water", s.high_water}};
}

nlohmann::json timing_json(const PassStats& s) {
  return {{"seconds", s.seconds},
          {"gc_seconds", s.gc_seconds},
          {"gc_share", s.seconds > 0 ? s.gc_seconds / s.seconds : 0.0},
          {"gc_runs", s.gc_runs}};
}

}  // namespace

nlohmann::json to_json(const CountReport& r, bool include_timing) {
  nlohmann::json plies = nlohmann::json::array();
  for (const auto& p : r.plies) {
    plies.push_back({{"ply", p.ply}, {"total", count_to_json(p.total)},
                     {"terminal", count_to_json(p.terminal)}});
  }
  nlohmann::json j{{"width", r.geometry.width},
          {"height", r.geometry.height},
          {"encoding", std::string(encoding::to_string(r.kind))},
          {"plies", plies},
          {"total", count_to_json(r.grand_total)},
          {"stats", stats_json(r.stats)}};
  if (include_timing) j["timing"] = timing_json(r.stats);
  return j;
}

nlohmann::json to_json(const SolveReport& r, bool include_timing) {
  nlohmann::json plies = nlohmann::json::array();
  for (const auto& p : r.plies) {
    const FirstPlayerRow row = first_player_row(p);
    plies.push_back({{"ply", p.ply},
                     {"won", count_to_json(row.won)},
                     {"drawn", count_to_json(row.drawn)},
                     {"lost", count_to_json(row.lost)},
                     {"total", count_to_json(row.total)},
                     {"terminal", count_to_json(row.terminal)}});
  }
  nlohmann::json j{{"width", r.geometry.width},
                   {"height", r.geometry.height},
                   {"encoding", std::string(encoding::to_string(r.kind))},
                   {"node_capacity", r.node_capacity},
                   {"root_value", r.root_value == 1 ? "win" : (r.root_value == 0 ? "draw" : "loss")},
                   {"plies", plies},
                   {"forward", stats_json(r.forward)},
                   {"backward", stats_json(r.backward)}};
  if (include_timing) {
    j["timing"] = {{"seconds", r.seconds},
                   {"forward", timing_json(r.forward)},
                   {"backward", timing_json(r.backward)}};
  }
  return j;
}

}  // namespace c4::solver
