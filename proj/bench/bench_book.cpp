#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include "c4/search/book.hpp"
#include "c4/solver/symbolic_solver.hpp"

namespace fs = std::filesystem;
using namespace c4;

namespace {

template <class F>
double timed(F&& f) {
  const auto t = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int width = argc > 1 ? std::atoi(argv[1]) : 5;
  const int height = argc > 2 ? std::atoi(argv[2]) : 4;
  const int ply = argc > 3 ? std::atoi(argv[3]) : 4;
  const int workers = argc > 4 ? std::atoi(argv[4])
                               : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  const fs::path root = fs::temp_directory_path() / "c4_bench_book";
  fs::remove_all(root);
  solver::SymbolicSolver(encoding::BoardGeometry{width, height}, encoding::EncodingKind::StandardRowWise,
                         std::size_t{8} << 20)
      .solve(root);
  const store::WdlStore db = store::WdlStore::open(root, encoding::BoardGeometry{width, height});
  const auto positions = search::enumerate_positions(Layout::get(width, height), ply);

  search::SearchOptions opt;
  opt.tt_log2 = 20;
  opt.store = &db;
  std::vector<search::BookEntry> serial, parallel;
  const double ts = timed([&] { serial = search::evaluate_positions_serial(positions, opt); });
  const double tp = timed([&] { parallel = search::evaluate_positions_parallel(positions, opt, workers); });

  std::cout << width << "x" << height << " ply " << ply << ": " << positions.size() << " positions\n"
            << "serial   " << ts << " s\n"
            << "parallel " << tp << " s (" << workers << " workers, speedup " << ts / tp << ")\n"
            << "results " << (serial == parallel ? "identical" : "DIFFER") << '\n';
  fs::remove_all(root);
  return serial == parallel ? 0 : 1;
}
