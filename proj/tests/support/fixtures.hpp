#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include <unistd.h>

#include "c4/solver/symbolic_solver.hpp"
#include "c4/store/wdl_store.hpp"

namespace c4::testing {

/// Scratch directory removed at process exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("c4_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct SolvedBoard {
  TempDir dir{"store"};
  solver::SolveReport report;
  std::unique_ptr<store::WdlStore> store;
};

/// Solves a board once per process and keeps the store open.
inline SolvedBoard& solved_board(int width, int height,
                                 encoding::EncodingKind kind = encoding::EncodingKind::StandardRowWise) {
  static std::map<std::tuple<int, int, int>, std::unique_ptr<SolvedBoard>> cache;
  auto& slot = cache[{width, height, static_cast<int>(kind)}];
  if (!slot) {
    slot = std::make_unique<SolvedBoard>();
    const encoding::BoardGeometry g{width, height};
    slot->report = solver::SymbolicSolver(g, kind, std::size_t{4} << 20).solve(slot->dir.path());
    slot->store = std::make_unique<store::WdlStore>(store::WdlStore::open(slot->dir.path(), g));
  }
  return *slot;
}

}  // namespace c4::testing
