#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "walklocus/error.hpp"
#include "walklocus/lattice.hpp"

using namespace walklocus;

TEST_CASE("zero-step walk has a single position") {
  const Walk w = generate_walk(1, 0, std::uint64_t{123});
  CHECK(w.length() == 0);
  CHECK(w.end() == LatticePoint::origin(1));
}

TEST_CASE("walk generation is deterministic") {
  const Walk a = generate_walk(2, 1'000'000, std::uint64_t{7});
  const Walk b = generate_walk(2, 1'000'000, std::uint64_t{7});
  CHECK(a.flat_positions() == b.flat_positions());
}

TEST_CASE("plus steps in d=1 are binomial") {
  const std::size_t n = 100000;
  const Walk w = generate_walk(1, n, std::uint64_t{3});
  std::size_t plus = 0;
  for (const Step& s : w.steps().steps()) plus += s.sign > 0;
  const double se = std::sqrt(0.25 / n);
  CHECK(std::abs(static_cast<double>(plus) / n - 0.5) < 3 * se);
}

TEST_CASE("step distribution is uniform over the 2d unit vectors") {
  const int d = 4;
  const std::size_t n = 400000;
  const Walk w = generate_walk(d, n, std::uint64_t{11});
  std::vector<double> counts(2 * d, 0);
  for (const Step& s : w.steps().steps()) counts[s.code()] += 1;
  double chi2 = 0;
  const double expect = static_cast<double>(n) / (2 * d);
  for (double c : counts) chi2 += (c - expect) * (c - expect) / expect;
  CHECK(chi2 < 24.3);  // 7 dof, 0.999 quantile
}

TEST_CASE("consecutive positions differ by one unit on one axis") {
  const Walk w = generate_walk(3, 5000, std::uint64_t{2});
  for (std::size_t k = 0; k < w.length(); ++k) {
    const auto diff = w.point(k + 1) - w.point(k);
    CHECK(diff.l1_norm() == 1);
  }
}

TEST_CASE("invalid dimensions and budgets are rejected") {
  CHECK_THROWS_AS(generate_walk(0, 10, std::uint64_t{1}), ConfigError);
  CHECK_THROWS_AS(generate_walk(2, 1000, std::uint64_t{1}, 1000), BudgetExceeded);
}

TEST_CASE("neighbours of lattice points") {
  auto sorted = [](std::vector<LatticePoint> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  CHECK(sorted(neighbors(LatticePoint::origin(1))) ==
        sorted({LatticePoint(std::vector<Coord>{-1}), LatticePoint(std::vector<Coord>{1})}));
  const auto n3 = neighbors(LatticePoint::origin(3));
  CHECK(n3.size() == 6);
  for (const auto& p : n3) CHECK(p.l1_norm() == 1);
  const auto n2 = neighbors(LatticePoint(std::vector<Coord>{5, -2}));
  CHECK(sorted(n2) == sorted({LatticePoint(std::vector<Coord>{6, -2}), LatticePoint(std::vector<Coord>{4, -2}),
                              LatticePoint(std::vector<Coord>{5, -1}), LatticePoint(std::vector<Coord>{5, -3})}));
  const Coord big = std::numeric_limits<Coord>::max();
  CHECK_THROWS_AS(neighbors(LatticePoint(std::vector<Coord>{big})), std::overflow_error);
}

TEST_CASE("point parsing round-trips") {
  const auto p = LatticePoint::parse("3,-4,0");
  CHECK(p.to_string() == "3,-4,0");
  CHECK_THROWS_AS(LatticePoint::parse("1,x"), ConfigError);
  CHECK_THROWS_AS(LatticePoint::parse(""), ConfigError);
}

TEST_CASE("two-sided walk agrees at time zero") {
  Stream s(4, 0);
  const TwoSidedWalk tw = generate_two_sided(3, 50, 60, s);
  CHECK(std::equal(tw.position(0).begin(), tw.position(0).end(), tw.backward.position(0).begin()));
  CHECK(tw.forward.length() == 60);
  CHECK(tw.backward.length() == 50);
}
