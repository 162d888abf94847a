#include "c4/service/explorer.hpp"

#include <algorithm>

#include "httplib.h"

#include "c4/search/search.hpp"

namespace c4::service {

using nlohmann::json;
using store::Wdl;

Explorer::Explorer(const store::WdlStore* store, ExplorerOptions options)
    : store_(store), options_(options) {}

json Explorer::health() const {
  if (!store_) return {{"status", "no store"}};
  const auto& g = store_->geometry();
  return {{"status", "ok"},
          {"width", g.width},
          {"height", g.height},
          {"encoding", std::string(encoding::to_string(store_->encoding_kind()))},
          {"plies_loaded", store_->plies_loaded()},
          {"max_ply", g.max_ply()}};
}

json Explorer::eval(const std::string& moves, bool search) const {
  if (!store_) throw EvalError(503, "store not loaded");
  const auto& g = store_->geometry();
  const Layout& layout = Layout::get(g.width, g.height);
  Position pos(layout);
  try {
    pos = Position::from_moves(layout, moves);
  } catch (const IllegalMove& e) {
    throw EvalError(400, e.what());
  }

  json out{{"moves", moves},
           {"ply", pos.ply()},
           {"side_to_move", pos.side_to_move()},
           {"terminal", pos.is_terminal()},
           {"partial", false}};
  try {
    out["wdl"] = std::string(store::to_string(store_->lookup(pos)));
    json per_move = json::array();
    int best = -1;
    Wdl best_wdl = Wdl::Loss;
    if (!pos.is_terminal()) {
      for (int col : search::order_moves(pos)) {
        const Wdl v = store::negate(store_->lookup(pos.played(col)));
        per_move.push_back({{"column", col + 1}, {"wdl", std::string(store::to_string(v))}});
        if (best < 0 || v > best_wdl) {
          best = col;
          best_wdl = v;
        }
      }
      std::sort(per_move.begin(), per_move.end(),
                [](const json& a, const json& b) { return a["column"] < b["column"]; });
    }
    if (search && !pos.is_terminal()) {
      search::SearchOptions opt;
      opt.tt_log2 = options_.tt_log2;
      opt.store = store_;
      opt.deadline = std::chrono::steady_clock::now() + options_.search_budget;
      search::Searcher searcher(opt);
      try {
        std::vector<int> scores;
        for (auto& entry : per_move) {
          const Position child = pos.played(entry["column"].get<int>() - 1);
          scores.push_back(child.last_mover_won() ? layout.max_ply - pos.ply()
                                                  : -searcher.solve(child));
        }
        const search::BestMove bm = searcher.best_move(pos, 1);
        for (std::size_t i = 0; i < per_move.size(); ++i) per_move[i]["score"] = scores[i];
        best = bm.move;
        out["score"] = bm.score;
      } catch (const search::SearchTimeout&) {
        out["partial"] = true;
      }
    }
    out["moves_eval"] = per_move;
    out["best"] = best < 0 ? json(nullptr) : json(best + 1);
  } catch (const store::MissingLayer& e) {
    throw EvalError(404, e.what());
  }
  return out;
}

struct Server::Impl {
  httplib::Server http;
};

Server::Server(const Explorer& explorer) : impl_(std::make_unique<Impl>()) {
  auto& http = impl_->http;
  http.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
  });
  http.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  http.Get("/health", [&explorer](const httplib::Request&, httplib::Response& res) {
    res.set_content(explorer.health().dump(), "application/json");
  });
  http.Get("/eval", [&explorer](const httplib::Request& req, httplib::Response& res) {
    const std::string moves = req.has_param("moves") ? req.get_param_value("moves") : "";
    const std::string flag = req.has_param("search") ? req.get_param_value("search") : "false";
    const bool search = flag == "true" || flag == "1";
    try {
      res.set_content(explorer.eval(moves, search).dump(), "application/json");
    } catch (const EvalError& e) {
      res.status = e.status;
      res.set_content(json{{"error", e.what()}}.dump(), "application/json");
    }
  });
}

Server::~Server() = default;

bool Server::bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = impl_->http.bind_to_any_port(host);
    return port_ > 0;
  }
  if (!impl_->http.bind_to_port(host, port)) return false;
  port_ = port;
  return true;
}

void Server::listen() { impl_->http.listen_after_bind(); }

void Server::stop() { impl_->http.stop(); }

}  // namespace c4::service
