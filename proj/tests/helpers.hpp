#pragma once

#include <stdexcept>
#include <vector>

#include "walklocus/lattice.hpp"
#include "walklocus/trace.hpp"

namespace testing_support {

using walklocus::Coord;

// Walk through the listed points, which must be lattice neighbours in turn.
inline walklocus::Walk walk_of(const std::vector<std::vector<Coord>>& pts) {
  const int d = static_cast<int>(pts.front().size());
  std::vector<walklocus::Step> steps;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    int axis = -1, sign = 0;
    for (int a = 0; a < d; ++a) {
      const Coord diff = pts[k][a] - pts[k - 1][a];
      if (diff != 0) {
        if (axis >= 0 || (diff != 1 && diff != -1)) throw std::invalid_argument("not a lattice step");
        axis = a;
        sign = static_cast<int>(diff);
      }
    }
    if (axis < 0) throw std::invalid_argument("repeated point");
    steps.push_back({static_cast<std::uint8_t>(axis), static_cast<std::int8_t>(sign)});
  }
  return walklocus::Walk(walklocus::LatticePoint(pts.front()), walklocus::StepSequence(d, steps));
}

inline walklocus::Walk straight_walk(int d, std::size_t n) {
  std::vector<std::vector<Coord>> pts;
  for (std::size_t k = 0; k <= n; ++k) {
    std::vector<Coord> p(d, 0);
    p[0] = static_cast<Coord>(k);
    pts.push_back(p);
  }
  return walk_of(pts);
}

// 4-cycle (0,0),(1,0),(1,1),(0,1) closed back to (0,0).
inline walklocus::Walk square_walk() { return walk_of({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}}); }

}  // namespace testing_support
