#pragma once

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "c4/encoding/encoding.hpp"
#include "c4/position.hpp"
#include "c4/store/bdd_file.hpp"

namespace c4::store {

/// Game value for the player to move.
enum class Wdl : int { Loss = -1, Draw = 0, Win = 1 };

std::string_view to_string(Wdl v);
inline Wdl negate(Wdl v) { return static_cast<Wdl>(-static_cast<int>(v)); }

class MissingLayer : public std::runtime_error {
 public:
  MissingLayer(int ply, const std::string& path);
  int ply;
};

/// `<root>/w<W>h<H>`
std::filesystem::path store_directory(const std::filesystem::path& root,
                                      const encoding::BoardGeometry& g);
/// `<dir>/layer_<ply>.<role>.bdd`, role one of states, win, lost.
std::filesystem::path layer_path(const std::filesystem::path& dir, int ply,
                                 std::string_view role);

/// Ply-indexed win/lost BDDs on disk. Layers load lazily, at most the two
/// files of a ply per lookup; draw is whatever is neither win nor lost.
/// Lookups may run concurrently from many threads.
class WdlStore {
 public:
  /// `dir` holds the layer files; geometry and encoding come from the ply-0
  /// win file header.
  static WdlStore open(const std::filesystem::path& dir);
  /// Accepts either a store directory or a root containing `w<W>h<H>`.
  static WdlStore open(const std::filesystem::path& root, const encoding::BoardGeometry& g);

  WdlStore(WdlStore&&) noexcept;
  WdlStore& operator=(WdlStore&&) noexcept;
  ~WdlStore();

  const encoding::BoardGeometry& geometry() const;
  encoding::EncodingKind encoding_kind() const;
  const encoding::Encoding& encoding() const;
  const std::filesystem::path& directory() const;

  /// Win/Draw/Loss for the side to move. Terminal positions are Loss.
  Wdl lookup(const Position& pos) const;
  bool has_layer(int ply) const;
  int plies_loaded() const;
  /// Number of positions at `ply`, from the stored states BDD.
  bdd::BigCount layer_total(int ply) const;

 private:
  struct Impl;
  explicit WdlStore(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

}  // namespace c4::store
