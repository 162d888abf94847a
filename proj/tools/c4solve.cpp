#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "c4/bdd/manager.hpp"
#include "c4/search/book.hpp"
#include "c4/search/search.hpp"
#include "c4/service/explorer.hpp"
#include "c4/solver/symbolic_solver.hpp"
#include "c4/store/wdl_store.hpp"

namespace {

namespace fs = std::filesystem;
using namespace c4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  int width = 7;
  int height = 6;
  std::string encoding = "standard-row";
  std::string nodes;
  std::string out = "out";
  std::string db;
  std::optional<int> ply;
  int workers = 1;
  int port = 8080;
  bool json = false;
  std::string moves;
};

std::size_t parse_size(const std::string& text) {
  if (text.empty()) throw UsageError("empty node capacity");
  std::size_t pos = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &pos);
  } catch (const std::exception&) {
    throw UsageError("bad node capacity '" + text + "'");
  }
  const std::string suffix = text.substr(pos);
  if (suffix == "K" || suffix == "k") {
    value <<= 10;
  } else if (suffix == "M" || suffix == "m") {
    value <<= 20;
  } else if (suffix == "G" || suffix == "g") {
    value <<= 30;
  } else if (!suffix.empty()) {
    throw UsageError("bad node capacity suffix '" + suffix + "'");
  }
  if (value < 16) throw UsageError("node capacity must be at least 16");
  return static_cast<std::size_t>(value);
}

std::size_t node_capacity(const Config& cfg) {
  if (!cfg.nodes.empty()) return parse_size(cfg.nodes);
  if (const char* env = std::getenv("C4_NODE_CAPACITY"); env && *env) return parse_size(env);
  return std::size_t{16} << 20;
}

encoding::BoardGeometry geometry(const Config& cfg) {
  encoding::BoardGeometry g{cfg.width, cfg.height};
  if (!g.valid()) {
    throw UsageError("board must be between 1x1 and 13x13, got " + std::to_string(cfg.width) +
                     "x" + std::to_string(cfg.height));
  }
  return g;
}

encoding::EncodingKind encoding_kind(const Config& cfg) {
  const auto kind = encoding::parse_encoding(cfg.encoding);
  if (!kind) throw UsageError("unknown encoding '" + cfg.encoding + "'");
  return *kind;
}

store::WdlStore open_store(const Config& cfg) {
  if (cfg.db.empty()) throw UsageError("--db is required");
  try {
    return store::WdlStore::open(cfg.db, geometry(cfg));
  } catch (const store::MissingLayer& e) {
    throw UsageError(std::string("no solved store: ") + e.what());
  }
}

std::string gc_share(const solver::PassStats& s) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(1) << (s.seconds > 0 ? 100.0 * s.gc_seconds / s.seconds : 0.0)
    << "%";
  return o.str();
}

int cmd_count(const Config& cfg) {
  solver::SymbolicSolver solver(geometry(cfg), encoding_kind(cfg), node_capacity(cfg));
  const solver::CountReport r = solver.count_positions(cfg.ply);
  if (cfg.json) {
    std::cout << solver::to_json(r).dump(2) << '\n';
    return 0;
  }
  std::cout << std::setw(4) << "ply" << std::setw(22) << "total" << std::setw(22) << "terminal"
            << '\n';
  for (const auto& p : r.plies) {
    std::cout << std::setw(4) << p.ply << std::setw(22) << p.total << std::setw(22) << p.terminal
              << '\n';
  }
  std::cout << "total " << r.grand_total << '\n'
            << "peak nodes " << r.stats.peak_live_nodes << '\n'
            << "high water " << r.stats.high_water << '\n'
            << "time " << std::fixed << std::setprecision(3) << r.stats.seconds << " s\n"
            << "gc " << gc_share(r.stats) << '\n';
  return 0;
}

int cmd_solve(const Config& cfg) {
  solver::SymbolicSolver solver(geometry(cfg), encoding_kind(cfg), node_capacity(cfg));
  const solver::SolveReport r = solver.solve(cfg.out);
  if (cfg.json) {
    std::cout << solver::to_json(r).dump(2) << '\n';
    return 0;
  }
  std::cout << std::setw(4) << "ply" << std::setw(20) << "won" << std::setw(20) << "drawn"
            << std::setw(20) << "lost" << std::setw(20) << "total" << std::setw(20) << "terminal"
            << '\n';
  for (const auto& p : r.plies) {
    const auto row = solver::first_player_row(p);
    std::cout << std::setw(4) << row.ply << std::setw(20) << row.won << std::setw(20) << row.drawn
              << std::setw(20) << row.lost << std::setw(20) << row.total << std::setw(20)
              << row.terminal << '\n';
  }
  std::cout << "value " << (r.root_value > 0 ? "win" : r.root_value < 0 ? "loss" : "draw") << '\n'
            << "store " << store::store_directory(cfg.out, r.geometry).string() << '\n'
            << "time " << std::fixed << std::setprecision(3) << r.seconds << " s\n"
            << "gc forward " << gc_share(r.forward) << ", backward " << gc_share(r.backward)
            << '\n';
  return 0;
}

int cmd_query(const Config& cfg) {
  const store::WdlStore db = open_store(cfg);
  const auto& g = db.geometry();
  const Layout& layout = Layout::get(g.width, g.height);
  Position pos(layout);
  try {
    pos = Position::from_moves(layout, cfg.moves);
  } catch (const IllegalMove& e) {
    throw UsageError(e.what());
  }
  const store::Wdl wdl = db.lookup(pos);
  search::SearchOptions opt;
  opt.store = &db;
  search::Searcher searcher(opt);
  const search::BestMove best = searcher.best_move(pos);

  std::vector<int> pv = best.principal_variation;
  if (cfg.json) {
    for (int& m : pv) ++m;
    nlohmann::json j{{"moves", cfg.moves},
                     {"wdl", std::string(store::to_string(wdl))},
                     {"score", best.score},
                     {"best", best.move < 0 ? nlohmann::json(nullptr) : nlohmann::json(best.move + 1)},
                     {"pv", pv}};
    if (best.score != 0) j["winning_ply"] = search::winning_ply(best.score, layout.max_ply);
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  std::string label(store::to_string(wdl));
  for (char& c : label) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  std::cout << label;
  if (best.move >= 0) std::cout << ", best " << best.move + 1;
  if (best.score > 0) {
    std::cout << ", mate in " << search::winning_ply(best.score, layout.max_ply) << " plies";
  } else if (best.score < 0) {
    std::cout << ", lost in " << search::winning_ply(best.score, layout.max_ply) << " plies";
  }
  std::cout << '\n' << "score " << best.score << '\n' << "pv " << moves_to_string(pv) << '\n';
  return 0;
}

int cmd_book(const Config& cfg) {
  const store::WdlStore db = open_store(cfg);
  const int ply = cfg.ply.value_or(8);
  if (ply < 0 || ply > db.geometry().max_ply()) throw UsageError("--ply out of range");
  const auto start = std::chrono::steady_clock::now();
  const search::Book book = search::build_opening_book(db, ply, cfg.workers);
  const fs::path path = db.directory() / ("book_ply" + std::to_string(ply) + ".bin");
  search::write_book(book, path);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (cfg.json) {
    std::cout << nlohmann::json{{"ply", ply},
                                {"entries", book.entries.size()},
                                {"path", path.string()}}
                     .dump(2)
              << '\n';
    return 0;
  }
  std::cout << "entries " << book.entries.size() << '\n'
            << "book " << path.string() << '\n'
            << "time " << std::fixed << std::setprecision(3) << seconds << " s\n";
  return 0;
}

int cmd_serve(const Config& cfg) {
  const store::WdlStore db = open_store(cfg);
  service::Explorer explorer(&db);
  service::Server server(explorer);
  if (!server.bind("0.0.0.0", cfg.port)) {
    std::cerr << "error: cannot listen on port " << cfg.port << '\n';
    return 1;
  }
  std::cout << "listening on port " << server.port() << std::endl;
  server.listen();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ConnectFour strong solver"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  Config cfg;

  auto board_flags = [&cfg](CLI::App* sub) {
    sub->add_option("-w,--width", cfg.width, "board width")->capture_default_str();
    sub->add_option("-h,--height", cfg.height, "board height")->capture_default_str();
  };
  auto bdd_flags = [&cfg](CLI::App* sub) {
    sub->add_option("-e,--encoding", cfg.encoding, "standard-row, standard-col or compressed")
        ->capture_default_str();
    sub->add_option("-n,--nodes", cfg.nodes, "node pool capacity, K/M/G suffixes allowed");
  };

  CLI::App* count = app.add_subcommand("count", "count reachable positions per ply");
  board_flags(count);
  bdd_flags(count);
  count->add_option("--ply", cfg.ply, "stop after this ply");
  count->add_flag("--json", cfg.json, "machine-readable output");

  CLI::App* solve = app.add_subcommand("solve", "solve the board and write the store");
  board_flags(solve);
  bdd_flags(solve);
  solve->add_option("-o,--out", cfg.out, "store root")->capture_default_str();
  solve->add_flag("--json", cfg.json, "machine-readable output");

  CLI::App* query = app.add_subcommand("query", "evaluate a position from the store");
  board_flags(query);
  query->add_option("--db", cfg.db, "store root or directory")->required();
  query->add_option("moves", cfg.moves, "1-based column digits");
  query->add_flag("--json", cfg.json, "machine-readable output");

  CLI::App* book = app.add_subcommand("book", "score every position at a fixed ply");
  board_flags(book);
  book->add_option("--db", cfg.db, "store root or directory");
  book->add_option("--ply", cfg.ply, "book ply (default 8)");
  book->add_option("--workers", cfg.workers, "worker threads")->check(CLI::Range(1, 1024));
  book->add_flag("--json", cfg.json, "machine-readable output");

  CLI::App* serve = app.add_subcommand("serve", "serve /eval and /health over HTTP");
  board_flags(serve);
  serve->add_option("--db", cfg.db, "store root or directory");
  serve->add_option("--port", cfg.port, "TCP port")->check(CLI::Range(0, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*count) return cmd_count(cfg);
    if (*solve) return cmd_solve(cfg);
    if (*query) return cmd_query(cfg);
    if (*book) return cmd_book(cfg);
    if (*serve) return cmd_serve(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const solver::SolveAborted& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const bdd::PoolExhausted& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
