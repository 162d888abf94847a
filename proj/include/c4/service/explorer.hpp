#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "json.hpp"

#include "c4/store/wdl_store.hpp"

namespace c4::service {

struct ExplorerOptions {
  std::chrono::milliseconds search_budget{5000};
  unsigned tt_log2 = 20;
};

/// Thrown by Explorer::eval with the HTTP status it maps to.
class EvalError : public std::runtime_error {
 public:
  EvalError(int status, const std::string& what) : std::runtime_error(what), status(status) {}
  int status;
};

/// Stateless evaluation facade over a store. Without a store every eval fails
/// with 503; health still answers.
class Explorer {
 public:
  explicit Explorer(const store::WdlStore* store, ExplorerOptions options = {});

  /// Fields: moves, ply, side_to_move, terminal, wdl, moves_eval[{column, wdl,
  /// score?}], best, score?, partial.
  nlohmann::json eval(const std::string& moves, bool search) const;
  nlohmann::json health() const;

 private:
  const store::WdlStore* store_;
  ExplorerOptions options_;
};

/// Blocking HTTP server for GET /eval and GET /health.
class Server {
 public:
  explicit Server(const Explorer& explorer);
  ~Server();

  /// Binds host:port; false when the port is unavailable. Port 0 picks a free
  /// port, reported by port().
  bool bind(const std::string& host, int port);
  int port() const { return port_; }
  /// Serves until stop() is called.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

}  // namespace c4::service
