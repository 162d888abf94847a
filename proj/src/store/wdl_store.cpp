#include "c4/store/wdl_store.hpp"

#include <atomic>
#include <mutex>
#include <vector>

namespace c4::store {

namespace fs = std::filesystem;

std::string_view to_string(Wdl v) {
  switch (v) {
    case Wdl::Win: return "win";
    case Wdl::Draw: return "draw";
    case Wdl::Loss: return "loss";
  }
  return "?";
}

MissingLayer::MissingLayer(int ply_, const std::string& path)
    : std::runtime_error("missing layer for ply " + std::to_string(ply_) + ": " + path),
      ply(ply_) {}

fs::path store_directory(const fs::path& root, const encoding::BoardGeometry& g) {
  return root / ("w" + std::to_string(g.width) + "h" + std::to_string(g.height));
}

fs::path layer_path(const fs::path& dir, int ply, std::string_view role) {
  return dir / ("layer_" + std::to_string(ply) + "." + std::string(role) + ".bdd");
}

struct WdlStore::Impl {
  struct Slot {
    std::mutex lock;
    bool loaded = false;
    FlatBdd win;
    FlatBdd lost;
  };

  fs::path dir;
  encoding::Encoding enc;
  std::vector<std::unique_ptr<Slot>> slots;
  std::atomic<int> loaded{0};

  Impl(fs::path d, encoding::Encoding e) : dir(std::move(d)), enc(std::move(e)) {
    for (int i = 0; i <= enc.geometry().max_ply(); ++i) slots.push_back(std::make_unique<Slot>());
  }

  FlatBdd read_checked(int ply, std::string_view role) const {
    const fs::path p = layer_path(dir, ply, role);
    if (!fs::exists(p)) throw MissingLayer(ply, p.string());
    FlatBdd flat = read_flat_bdd(p);
    const auto& g = enc.geometry();
    if (flat.meta.width != static_cast<std::uint32_t>(g.width) ||
        flat.meta.height != static_cast<std::uint32_t>(g.height) ||
        flat.meta.ply != static_cast<std::uint32_t>(ply) ||
        flat.meta.encoding_kind != static_cast<std::uint32_t>(enc.kind()) ||
        flat.meta.var_count != enc.num_vars()) {
      throw CorruptFile(12, "header of " + p.string() + " does not match the store");
    }
    return flat;
  }

  const Slot& slot(int ply) {
    Slot& s = *slots.at(static_cast<std::size_t>(ply));
    std::lock_guard guard(s.lock);
    if (!s.loaded) {
      s.win = read_checked(ply, "win");
      s.lost = read_checked(ply, "lost");
      s.loaded = true;
      ++loaded;
    }
    return s;
  }
};

WdlStore::WdlStore(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
WdlStore::WdlStore(WdlStore&&) noexcept = default;
WdlStore& WdlStore::operator=(WdlStore&&) noexcept = default;
WdlStore::~WdlStore() = default;

WdlStore WdlStore::open(const fs::path& dir) {
  const fs::path probe = layer_path(dir, 0, "win");
  if (!fs::exists(probe)) throw MissingLayer(0, probe.string());
  const FlatBdd head = read_flat_bdd(probe);
  if (head.meta.encoding_kind > 2) throw CorruptFile(24, "unknown encoding kind");
  encoding::BoardGeometry g{static_cast<int>(head.meta.width),
                            static_cast<int>(head.meta.height)};
  if (!g.valid()) throw CorruptFile(12, "geometry out of range");
  encoding::Encoding enc(g, static_cast<encoding::EncodingKind>(head.meta.encoding_kind));
  if (enc.num_vars() != head.meta.var_count) throw CorruptFile(28, "variable count mismatch");
  return WdlStore(std::make_unique<Impl>(dir, std::move(enc)));
}

WdlStore WdlStore::open(const fs::path& root, const encoding::BoardGeometry& g) {
  if (fs::exists(layer_path(root, 0, "win"))) {
    WdlStore s = open(root);
    if (!(s.geometry() == g)) {
      throw std::invalid_argument("store at " + root.string() + " holds a different board size");
    }
    return s;
  }
  return open(store_directory(root, g));
}

const encoding::BoardGeometry& WdlStore::geometry() const { return impl_->enc.geometry(); }
encoding::EncodingKind WdlStore::encoding_kind() const { return impl_->enc.kind(); }
const encoding::Encoding& WdlStore::encoding() const { return impl_->enc; }
const fs::path& WdlStore::directory() const { return impl_->dir; }

Wdl WdlStore::lookup(const Position& pos) const {
  const auto& g = geometry();
  if (pos.width() != g.width || pos.height() != g.height) {
    throw IllegalPosition("position does not match the store geometry");
  }
  if (pos.last_mover_won()) return Wdl::Loss;
  const Impl::Slot& s = impl_->slot(pos.ply());
  thread_local bdd::Assignment scratch;
  impl_->enc.write_assignment(pos, scratch);
  if (s.win.eval(scratch)) return Wdl::Win;
  if (s.lost.eval(scratch)) return Wdl::Loss;
  return Wdl::Draw;
}

bool WdlStore::has_layer(int ply) const {
  return ply >= 0 && ply <= geometry().max_ply() &&
         fs::exists(layer_path(impl_->dir, ply, "win")) &&
         fs::exists(layer_path(impl_->dir, ply, "lost"));
}

int WdlStore::plies_loaded() const { return impl_->loaded.load(); }

bdd::BigCount WdlStore::layer_total(int ply) const {
  const FlatBdd states = impl_->read_checked(ply, "states");
  return states.satcount(impl_->enc.vars(encoding::copy_for_ply(ply)));
}

}  // namespace c4::store
