#include "doctest.h"

#include <cmath>
#include <set>

#include "walklocus/rng.hpp"

using namespace walklocus;

TEST_CASE("philox known-answer vectors") {
  using C = std::array<std::uint32_t, 4>;
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are pure functions of seed and id") {
  Stream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    differs_c |= x != c();
    differs_d |= x != d();
  }
  CHECK(differs_c);
  CHECK(differs_d);
}

TEST_CASE("split children are reproducible and distinct") {
  const Stream parent(9, 3);
  Stream s1 = parent.split(1), s1b = parent.split(1), s2 = parent.split(2);
  CHECK(s1.stream_id() == 3);
  std::set<std::uint32_t> seen;
  for (int i = 0; i < 8; ++i) {
    const auto v = s1();
    CHECK(v == s1b());
    seen.insert(v);
    seen.insert(s2());
  }
  CHECK(seen.size() == 16);
}

TEST_CASE("below is uniform and in range") {
  Stream s(1, 0);
  const std::uint32_t bound = 10;
  std::array<int, 10> counts{};
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) {
    const auto v = s.below(bound);
    REQUIRE(v < bound);
    ++counts[v];
  }
  double chi2 = 0;
  const double expect = draws / 10.0;
  for (int c : counts) chi2 += (c - expect) * (c - expect) / expect;
  // 9 degrees of freedom; 0.999 quantile is 27.9.
  CHECK(chi2 < 27.9);
  CHECK(s.below(1) == 0);
}

TEST_CASE("uniform01 lies in [0,1) with mean one half") {
  Stream s(5, 5);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / 100000 - 0.5) < 3 * std::sqrt(1.0 / 12 / 100000));
}
