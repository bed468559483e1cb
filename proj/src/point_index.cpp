#include "walklocus/point_index.hpp"

#include <bit>

namespace walklocus {

namespace {

// Per-axis multipliers for the linear pre-hash; odd, well mixed constants.
inline std::uint64_t axis_weight(int axis) {
  return splitmix64(static_cast<std::uint64_t>(axis) + 0x51ED27u) | 1u;
}

inline std::uint64_t finalize(std::uint64_t h) {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdull;
  h ^= h >> 33;
  return h;
}

}  // namespace

PointIndex::PointIndex(int dim, std::size_t expected) : dim_(dim) {
  weights_.resize(static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a) weights_[static_cast<std::size_t>(a)] = axis_weight(a);
  std::size_t cap = 16;
  while (cap < expected * 2) cap <<= 1;
  slots_.assign(cap, kNone);
  mask_ = cap - 1;
  coords_.reserve(expected * static_cast<std::size_t>(dim));
}

std::uint64_t PointIndex::prehash(std::span<const Coord> p) const {
  std::uint64_t h = 0;
  for (std::size_t a = 0; a < weights_.size(); ++a) h += static_cast<std::uint64_t>(p[a]) * weights_[a];
  return h;
}

std::uint64_t PointIndex::hash(std::span<const Coord> p) const { return finalize(prehash(p)); }

bool PointIndex::equals(std::uint32_t index, std::span<const Coord> p) const {
  const Coord* q = coords_.data() + static_cast<std::size_t>(index) * static_cast<std::size_t>(dim_);
  for (int a = 0; a < dim_; ++a)
    if (q[a] != p[static_cast<std::size_t>(a)]) return false;
  return true;
}

std::uint32_t PointIndex::find(std::span<const Coord> p) const {
  std::size_t slot = hash(p) & mask_;
  while (true) {
    const std::uint32_t idx = slots_[slot];
    if (idx == kNone) return kNone;
    if (equals(idx, p)) return idx;
    slot = (slot + 1) & mask_;
  }
}

std::uint32_t PointIndex::find_shifted(std::span<const Coord> p, int axis, int sign) const {
  return find_shifted(p, prehash(p), axis, sign);
}

std::uint32_t PointIndex::find_shifted(std::span<const Coord> p, std::uint64_t pre, int axis, int sign) const {
  const std::uint64_t shift = static_cast<std::uint64_t>(static_cast<std::int64_t>(sign)) *
                              weights_[static_cast<std::size_t>(axis)];
  std::size_t slot = finalize(pre + shift) & mask_;
  while (true) {
    const std::uint32_t idx = slots_[slot];
    if (idx == kNone) return kNone;
    const Coord* q = coords_.data() + static_cast<std::size_t>(idx) * static_cast<std::size_t>(dim_);
    bool same = true;
    for (int a = 0; a < dim_ && same; ++a)
      same = q[a] == p[static_cast<std::size_t>(a)] + (a == axis ? sign : 0);
    if (same) return idx;
    slot = (slot + 1) & mask_;
  }
}

std::pair<std::uint32_t, bool> PointIndex::insert(std::span<const Coord> p) {
  if ((count_ + 1) * 2 > slots_.size()) grow();
  std::size_t slot = hash(p) & mask_;
  while (true) {
    const std::uint32_t idx = slots_[slot];
    if (idx == kNone) break;
    if (equals(idx, p)) return {idx, false};
    slot = (slot + 1) & mask_;
  }
  const auto idx = static_cast<std::uint32_t>(count_++);
  slots_[slot] = idx;
  coords_.insert(coords_.end(), p.begin(), p.end());
  return {idx, true};
}

void PointIndex::grow() {
  const std::size_t cap = slots_.size() * 2;
  slots_.assign(cap, kNone);
  mask_ = cap - 1;
  for (std::uint32_t idx = 0; idx < count_; ++idx) {
    std::size_t slot = hash(point(idx)) & mask_;
    while (slots_[slot] != kNone) slot = (slot + 1) & mask_;
    slots_[slot] = idx;
  }
}

void PointIndex::clear() {
  std::fill(slots_.begin(), slots_.end(), kNone);
  coords_.clear();
  count_ = 0;
}

}  // namespace walklocus
