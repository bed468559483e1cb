#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "walklocus/rng.hpp"

namespace walklocus {

using Coord = std::int64_t;

// A point of Z^d.
class LatticePoint {
 public:
  LatticePoint() = default;
  explicit LatticePoint(std::vector<Coord> coords);
  explicit LatticePoint(std::span<const Coord> coords);
  static LatticePoint origin(int dim);

  int dim() const { return static_cast<int>(coords_.size()); }
  Coord operator[](int axis) const { return coords_[static_cast<std::size_t>(axis)]; }
  std::span<const Coord> coords() const { return coords_; }

  LatticePoint operator+(const LatticePoint& other) const;
  LatticePoint operator-(const LatticePoint& other) const;
  Coord l1_norm() const;

  // "x,y,z"
  std::string to_string() const;
  static LatticePoint parse(const std::string& text);

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;

 private:
  std::vector<Coord> coords_;
};

// One of the 2d unit vectors +-e_axis (axis is zero-based).
struct Step {
  std::uint8_t axis = 0;
  std::int8_t sign = 1;

  Step operator-() const { return Step{axis, static_cast<std::int8_t>(-sign)}; }
  friend bool operator==(const Step&, const Step&) = default;
  // Dense code in [0, 2d): 2*axis for +e, 2*axis+1 for -e.
  std::uint32_t code() const { return 2u * axis + (sign < 0 ? 1u : 0u); }
  static Step from_code(std::uint32_t code) {
    return Step{static_cast<std::uint8_t>(code / 2), static_cast<std::int8_t>(code % 2 ? -1 : 1)};
  }
};

class StepSequence {
 public:
  StepSequence() = default;
  StepSequence(int dim, std::vector<Step> steps);

  int dim() const { return dim_; }
  std::size_t size() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }
  const Step& operator[](std::size_t i) const { return steps_[i]; }
  const std::vector<Step>& steps() const { return steps_; }

  friend bool operator==(const StepSequence&, const StepSequence&) = default;

 private:
  int dim_ = 1;
  std::vector<Step> steps_;
};

// A realized walk: start point, steps, and the derived positions X_0..X_n
// stored contiguously (n+1 rows of d coordinates).
class Walk {
 public:
  Walk() = default;
  Walk(LatticePoint start, StepSequence steps);

  int dim() const { return dim_; }
  // Number of steps n.
  std::size_t length() const { return steps_.size(); }
  const LatticePoint& start() const { return start_; }
  const StepSequence& steps() const { return steps_; }

  std::span<const Coord> position(std::size_t k) const {
    return {positions_.data() + k * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  LatticePoint point(std::size_t k) const { return LatticePoint(position(k)); }
  LatticePoint end() const { return point(length()); }
  const std::vector<Coord>& flat_positions() const { return positions_; }

 private:
  int dim_ = 1;
  LatticePoint start_;
  StepSequence steps_;
  std::vector<Coord> positions_;
};

// Walks whose position table would exceed this many bytes are rejected.
inline constexpr std::size_t kDefaultWalkMemoryBudget = std::size_t{1} << 30;

StepSequence generate_steps(int dim, std::size_t n, Stream& stream);

// n-step simple random walk from the origin with uniform steps on E_+-.
Walk generate_walk(int dim, std::size_t n, Stream& stream,
                   std::size_t memory_budget = kDefaultWalkMemoryBudget);
Walk generate_walk(int dim, std::size_t n, std::uint64_t seed,
                   std::size_t memory_budget = kDefaultWalkMemoryBudget);

// The 2d lattice neighbours of p, ordered +e_1, -e_1, +e_2, ...
// This adjacency function is the only place that knows the host graph is Z^d;
// other vertex-transitive hosts would plug in here.
std::vector<LatticePoint> neighbors(const LatticePoint& p);

// Two independent one-sided walks from a common start. Index t >= 0 reads the
// forward walk, t < 0 reads the backward walk at -t.
struct TwoSidedWalk {
  Walk forward;
  Walk backward;

  std::span<const Coord> position(std::int64_t t) const {
    return t >= 0 ? forward.position(static_cast<std::size_t>(t))
                  : backward.position(static_cast<std::size_t>(-t));
  }
};

TwoSidedWalk generate_two_sided(int dim, std::size_t back_steps, std::size_t forward_steps,
                                Stream& stream);

}  // namespace walklocus
