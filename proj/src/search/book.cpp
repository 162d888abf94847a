#include "c4/search/book.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace c4::search {

namespace {

constexpr std::array<char, 8> kMagic{'C', '4', 'B', 'O', 'O', 'K', '1', '\0'};
constexpr std::size_t kHeaderSize = 8 + 3 * 4 + 8;
constexpr std::size_t kRecordSize = 10;

void put_le(std::vector<unsigned char>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

std::uint64_t get_le(const unsigned char* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= std::uint64_t{p[i]} << (8 * i);
  return v;
}

BookEntry evaluate(Searcher& searcher, const Position& pos) {
  BookEntry e;
  e.key = pos.key();
  if (pos.is_terminal()) {
    e.score = static_cast<std::int8_t>(terminal_score(pos));
    return e;
  }
  const BestMove best = searcher.best_move(pos, 1);
  e.score = static_cast<std::int8_t>(best.score);
  e.move = static_cast<std::uint8_t>(best.move);
  return e;
}

}  // namespace

std::vector<Position> enumerate_positions(const Layout& layout, int ply) {
  if (ply < 0 || ply > layout.max_ply) throw std::invalid_argument("ply out of range");
  std::vector<Position> frontier{Position(layout)};
  for (int i = 0; i < ply; ++i) {
    std::unordered_set<std::uint64_t> seen;
    std::vector<Position> next;
    for (const Position& p : frontier) {
      if (p.is_terminal()) continue;
      for (int col = 0; col < layout.width; ++col) {
        if (!p.can_play(col)) continue;
        Position child = p.played(col);
        if (seen.insert(child.key()).second) next.push_back(child);
      }
    }
    frontier = std::move(next);
  }
  std::sort(frontier.begin(), frontier.end(),
            [](const Position& a, const Position& b) { return a.key() < b.key(); });
  return frontier;
}

const BookEntry* Book::find(std::uint64_t key) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), key,
                             [](const BookEntry& e, std::uint64_t k) { return e.key < k; });
  return it != entries.end() && it->key == key ? &*it : nullptr;
}

std::vector<BookEntry> evaluate_positions_serial(const std::vector<Position>& positions,
                                                 const SearchOptions& options) {
  Searcher searcher(options);
  std::vector<BookEntry> out;
  out.reserve(positions.size());
  for (const Position& p : positions) out.push_back(evaluate(searcher, p));
  return out;
}

std::vector<BookEntry> evaluate_positions_parallel(const std::vector<Position>& positions,
                                                   const SearchOptions& options, int workers) {
  std::vector<BookEntry> out(positions.size());
  const long n = static_cast<long>(positions.size());
  if (workers < 1) workers = 1;
#pragma omp parallel num_threads(workers)
  {
    Searcher searcher(options);
#pragma omp for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] = evaluate(searcher, positions[static_cast<std::size_t>(i)]);
    }
  }
  return out;
}

Book build_opening_book(const store::WdlStore& store, int ply, int workers, unsigned tt_log2) {
  const auto& g = store.geometry();
  const Layout& layout = Layout::get(g.width, g.height);
  const std::vector<Position> positions = enumerate_positions(layout, ply);
  const bdd::BigCount expected = store.layer_total(ply);
  if (expected != positions.size()) {
    throw BookMismatch("enumerated " + std::to_string(positions.size()) +
                       " positions at ply " + std::to_string(ply) + " but the store holds " +
                       expected.str());
  }
  SearchOptions options;
  options.tt_log2 = tt_log2;
  options.store = &store;
  Book book;
  book.width = g.width;
  book.height = g.height;
  book.ply = ply;
  book.entries = workers > 1 ? evaluate_positions_parallel(positions, options, workers)
                             : evaluate_positions_serial(positions, options);
  return book;
}

void write_book(const Book& book, const std::filesystem::path& path) {
  std::vector<unsigned char> bytes(kMagic.begin(), kMagic.end());
  put_le(bytes, static_cast<std::uint32_t>(book.width), 4);
  put_le(bytes, static_cast<std::uint32_t>(book.height), 4);
  put_le(bytes, static_cast<std::uint32_t>(book.ply), 4);
  put_le(bytes, book.entries.size(), 8);
  for (const BookEntry& e : book.entries) {
    put_le(bytes, e.key, 8);
    bytes.push_back(static_cast<unsigned char>(e.score));
    bytes.push_back(e.move);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Book read_book(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), {});
  if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), kMagic.data(), 8) != 0) {
    throw std::runtime_error(path.string() + " is not a book file");
  }
  Book book;
  book.width = static_cast<int>(get_le(&bytes[8], 4));
  book.height = static_cast<int>(get_le(&bytes[12], 4));
  book.ply = static_cast<int>(get_le(&bytes[16], 4));
  const std::uint64_t count = get_le(&bytes[20], 8);
  if (bytes.size() != kHeaderSize + count * kRecordSize) {
    throw std::runtime_error(path.string() + " has a truncated record table");
  }
  book.entries.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const unsigned char* r = &bytes[kHeaderSize + i * kRecordSize];
    BookEntry& e = book.entries[i];
    e.key = get_le(r, 8);
    e.score = static_cast<std::int8_t>(r[8]);
    e.move = r[9];
    if (i > 0 && book.entries[i - 1].key >= e.key) {
      throw std::runtime_error(path.string() + " records are not sorted");
    }
  }
  return book;
}

}  // namespace c4::search
