#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "c4/position.hpp"
#include "c4/search/search.hpp"
#include "c4/store/wdl_store.hpp"

namespace c4::search {

/// Every distinct position reachable at exactly `ply`, terminal ones
/// included, sorted by key.
std::vector<Position> enumerate_positions(const Layout& layout, int ply);

struct BookEntry {
  std::uint64_t key = 0;  // Position::key()
  std::int8_t score = 0;
  std::uint8_t move = 0xFF;  // 0-based column, 0xFF when terminal

  friend bool operator==(const BookEntry&, const BookEntry&) = default;
};

struct Book {
  int width = 0;
  int height = 0;
  int ply = 0;
  std::vector<BookEntry> entries;  // sorted by key

  const BookEntry* find(std::uint64_t key) const;
};

class BookMismatch : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reference kernel: one searcher, positions in order.
std::vector<BookEntry> evaluate_positions_serial(const std::vector<Position>& positions,
                                                 const SearchOptions& options);
/// OpenMP kernel: positions split across `workers` threads, each with its own
/// searcher and table. Output order matches the input.
std::vector<BookEntry> evaluate_positions_parallel(const std::vector<Position>& positions,
                                                   const SearchOptions& options, int workers);

/// Enumerates ply `ply` of the store's board, checks the count against the
/// stored layer total (BookMismatch otherwise), and scores every position.
Book build_opening_book(const store::WdlStore& store, int ply, int workers,
                        unsigned tt_log2 = 20);

/// Header: magic "C4BOOK1\0", u32 width, height, ply, u64 entry count; then
/// 10-byte records (u64 key, i8 score, u8 move), little-endian, sorted.
void write_book(const Book& book, const std::filesystem::path& path);
Book read_book(const std::filesystem::path& path);

}  // namespace c4::search
