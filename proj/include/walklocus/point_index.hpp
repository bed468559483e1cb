#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "walklocus/lattice.hpp"

namespace walklocus {

// Open-addressing hash map from lattice points to dense indices 0, 1, 2, ...
// assigned in insertion order. Coordinates are stored contiguously so index i
// maps back to its point in O(1).
class PointIndex {
 public:
  static constexpr std::uint32_t kNone = 0xFFFFFFFFu;

  explicit PointIndex(int dim, std::size_t expected = 16);

  int dim() const { return dim_; }
  std::size_t size() const { return count_; }

  std::uint32_t find(std::span<const Coord> p) const;
  // Returns (index, inserted).
  std::pair<std::uint32_t, bool> insert(std::span<const Coord> p);

  std::span<const Coord> point(std::uint32_t index) const {
    return {coords_.data() + static_cast<std::size_t>(index) * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }
  const std::vector<Coord>& flat_coords() const { return coords_; }

  // Index of the neighbour p + sign*e_axis, or kNone. Avoids materializing the point.
  std::uint32_t find_shifted(std::span<const Coord> p, int axis, int sign) const;
  // Same, reusing pre = prehash(p) across the 2d neighbours of p.
  std::uint32_t find_shifted(std::span<const Coord> p, std::uint64_t pre, int axis, int sign) const;
  // Linear part of the hash; the hash of p + sign*e_axis is obtained by adding sign*weight(axis).
  std::uint64_t prehash(std::span<const Coord> p) const;

  void clear();

 private:
  std::uint64_t hash(std::span<const Coord> p) const;
  bool equals(std::uint32_t index, std::span<const Coord> p) const;
  void grow();

  int dim_;
  std::size_t count_ = 0;
  std::vector<Coord> coords_;
  std::vector<std::uint32_t> slots_;
  std::vector<std::uint64_t> weights_;
  std::size_t mask_ = 0;
};

}  // namespace walklocus
