#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "c4/bdd/manager.hpp"

namespace c4::store {

// On-disk BDD, little-endian throughout:
//
//   offset  size  field
//        0     8  magic "C4BDD1\0\0"
//        8     4  format version (1)
//       12     4  width
//       16     4  height
//       20     4  ply
//       24     4  encoding kind id
//       28     4  variable count
//       32     4  node count n
//       36     4  root (0/1 = terminal, otherwise 2 + record index)
//       40  12·n  records (var, low, high); children precede parents,
//                 references are 0/1 for terminals or 2 + record index
//  40+12n     8  FNV-1a 64 over every preceding byte

inline constexpr std::array<char, 8> kBddMagic = {'C', '4', 'B', 'D', 'D', '1', '\0', '\0'};
inline constexpr std::uint32_t kBddFormatVersion = 1;
inline constexpr std::size_t kBddHeaderSize = 40;
inline constexpr std::size_t kBddRecordSize = 12;
inline constexpr std::size_t kBddChecksumSize = 8;

struct BddFileMeta {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t ply = 0;
  std::uint32_t encoding_kind = 0;
  std::uint32_t var_count = 0;
  friend bool operator==(const BddFileMeta&, const BddFileMeta&) = default;
};

class CorruptFile : public std::runtime_error {
 public:
  CorruptFile(std::size_t offset, const std::string& what);
  std::size_t offset;
};

class UnsupportedVersion : public std::runtime_error {
 public:
  explicit UnsupportedVersion(std::uint32_t version);
  std::uint32_t version;
};

/// Read-only, manager-free form of a stored BDD. Safe to evaluate from many
/// threads at once.
struct FlatBdd {
  struct Record {
    std::uint32_t var;
    std::uint32_t low;
    std::uint32_t high;
  };

  BddFileMeta meta;
  std::vector<Record> records;
  std::uint32_t root = 0;

  bool eval(std::span<const std::uint8_t> assignment) const;
  bdd::BigCount satcount(const bdd::VarSet& vars) const;
  std::size_t node_count() const;  // records plus reachable terminals
};

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> serialize_bdd(const bdd::BddManager& m, bdd::NodeRef root,
                                        const BddFileMeta& meta);
/// Parses and validates a whole file image.
FlatBdd parse_bdd(std::span<const std::uint8_t> bytes);

void save_bdd(const bdd::BddManager& m, bdd::NodeRef root, const BddFileMeta& meta,
              const std::filesystem::path& path);
FlatBdd read_flat_bdd(const std::filesystem::path& path);
/// Rebuilds the stored function inside `m`.
bdd::Bdd load_bdd(bdd::BddManager& m, const std::filesystem::path& path,
                  BddFileMeta* meta = nullptr);
bdd::Bdd load_bdd(bdd::BddManager& m, const FlatBdd& flat);

}  // namespace c4::store
