#include "doctest.h"

#include <cmath>
#include <numbers>

#include "walklocus/analytics.hpp"

using namespace walklocus;

namespace {

// Counts closed walks of length 2n by enumerating all (2d)^{2n} step words.
Rational brute_return(int d, unsigned n) {
  const unsigned len = 2 * n;
  const std::uint64_t choices = 2 * static_cast<std::uint64_t>(d);
  std::uint64_t total = 1;
  for (unsigned i = 0; i < len; ++i) total *= choices;
  std::uint64_t returns = 0;
  std::vector<long> pos(static_cast<std::size_t>(d));
  for (std::uint64_t word = 0; word < total; ++word) {
    std::fill(pos.begin(), pos.end(), 0);
    std::uint64_t w = word;
    for (unsigned i = 0; i < len; ++i) {
      const auto c = w % choices;
      w /= choices;
      pos[c / 2] += c % 2 ? -1 : 1;
    }
    if (std::all_of(pos.begin(), pos.end(), [](long x) { return x == 0; })) ++returns;
  }
  return Rational(returns, total);
}

Rational central_binomial_over_4n(unsigned n) {
  BigInt c = 1;
  for (unsigned i = 1; i <= n; ++i) c = c * (n + i) / i;
  return Rational(c, BigInt(1) << (2 * n));
}

}  // namespace

TEST_CASE("return probability equals brute-force enumeration") {
  for (int d = 1; d <= 3; ++d)
    for (unsigned n = 0; n <= 2; ++n) CHECK(return_probability(d, n) == brute_return(d, n));
  CHECK(return_probability(4, 2) == brute_return(4, 2));
  CHECK(return_probability(1, 1) == Rational(1, 2));
  CHECK(return_probability(2, 1) == Rational(1, 4));
  CHECK(return_probability(2, 2) == Rational(9, 64));
  CHECK(return_probability(5, 0) == 1);
  CHECK(return_probability(5, 1) == Rational(1, 10));
}

TEST_CASE("one-dimensional return probability is the central binomial") {
  const auto q = return_probabilities(1, 30);
  for (unsigned n = 0; n <= 30; ++n) CHECK(q[n] == central_binomial_over_4n(n));
}

TEST_CASE("multinomial identity agrees with the displacement recursion") {
  for (int d = 1; d <= 4; ++d) {
    const unsigned n_max = d <= 2 ? 12 : (d == 3 ? 8 : 5);
    const auto q = return_probabilities(d, n_max);
    for (unsigned n = 0; n <= n_max; ++n) CHECK(q[n] == return_probability_by_displacement(d, n));
  }
}

TEST_CASE("local limit bound") {
  CHECK(lclt_bound(1, 1) == doctest::Approx(std::sqrt(2 / std::numbers::pi)));
  CHECK(lclt_bound(2, 1) == doctest::Approx(4 / std::numbers::pi));
  // 2d = pi n is not attainable with integers; the base equals 1 exactly there.
  CHECK(std::pow(2.0 * 3 / (std::numbers::pi * (6 / std::numbers::pi)), 1.5) == doctest::Approx(1.0));
  for (int d = 1; d <= 10; ++d) {
    const auto q = return_probabilities(d, 50);
    for (unsigned n = 1; n <= 50; ++n) {
      const double exact_hi = to_envelope(q[n]).upper;
      CHECK(lclt_bound(d, n) >= exact_hi);
      CHECK(chord_bound(d, n) >= exact_hi);
      CHECK(chord_bound(d, n) <= lclt_bound(d, n));
    }
  }
}

TEST_CASE("envelopes enclose rationals") {
  const Rational third(1, 3);
  const Envelope e = to_envelope(third);
  CHECK(e.lower <= e.upper);
  CHECK(Rational(e.lower) <= third);
  CHECK(Rational(e.upper) >= third);
  CHECK(to_envelope(Rational(1, 2)).width() == 0.0);
}

TEST_CASE("monotonicity of return probabilities") {
  CHECK(monotonicity_check(1, 4));
  CHECK(monotonicity_check(2, 2));
  CHECK(monotonicity_check(7, 0));
  for (int d = 1; d <= 10; ++d) CHECK(monotonicity_check(d, 50));
  const auto q = return_probabilities(1, 4);
  CHECK(q == std::vector<Rational>{1, Rational(1, 2), Rational(3, 8), Rational(5, 16), Rational(35, 128)});
}

TEST_CASE("majorant tail is an upper bound of the partial majorant sums") {
  for (int d : {5, 6, 8, 12}) {
    for (int p : {0, 1}) {
      for (unsigned from : {1u, 10u, 100u}) {
        double partial = 0;
        for (unsigned n = from; n < from + 20000; ++n) partial += std::pow(n, p) * chord_bound(d, n);
        CHECK(majorant_tail(d, from, p) >= partial);
      }
    }
  }
  CHECK(std::isinf(majorant_tail(4, 10, 1)));
  CHECK(std::isinf(majorant_tail(2, 10, 0)));
  CHECK(std::isfinite(majorant_tail(3, 10, 0)));
}

TEST_CASE("tail sums") {
  const ExactValue t5 = tail_sum(5, 1, 200);
  CHECK(t5.verdict == SeriesVerdict::Finite);
  CHECK(t5.bounds.lower >= 0.1);
  CHECK(t5.bounds.lower <= t5.bounds.upper);
  CHECK(tail_sum(6, 1).bounds.upper < tail_sum(5, 1).bounds.upper);
  // Nesting: a larger cutoff never widens the interval.
  double prev_lo = 0, prev_hi = INFINITY;
  for (unsigned c : {20u, 50u, 100u, 200u, 400u}) {
    const ExactValue t = tail_sum(7, 1, c);
    CHECK(t.bounds.lower >= prev_lo);
    CHECK(t.bounds.upper <= prev_hi);
    prev_lo = t.bounds.lower;
    prev_hi = t.bounds.upper;
  }
  CHECK(tail_sum(12, 1, 400).bounds.width() < 1e-3);
  CHECK(tail_sum(4, 1).verdict == SeriesVerdict::DivergentOrUnknown);
  CHECK(std::isinf(tail_sum(4, 1).bounds.upper));
}

TEST_CASE("intersection expectations") {
  const ExactValue ei = intersection_expectation(5, 200, false);
  CHECK(ei.bounds.lower >= 1.3);
  for (int d = 5; d <= 12; ++d) CHECK(intersection_expectation(d).bounds.lower >= 1.0);
  CHECK(intersection_expectation(50).bounds.upper <= 1.1);
  const ExactValue ej = intersection_expectation(50, 200, true);
  CHECK(ej.bounds.lower >= 1.0);
  CHECK(ej.bounds.upper <= 1.2);
  CHECK(intersection_expectation(4).verdict == SeriesVerdict::DivergentOrUnknown);
  // Partial sums through n = 1 by hand: 1 + 3 q_1 with q_1 = 1/10.
  CHECK(intersection_expectation(5, 1).bounds.lower == doctest::Approx(1.3));
}

TEST_CASE("localisation lower bounds") {
  const LowerBounds b5 = localisation_lower_bounds(5);
  CHECK(b5.c_lower > 0);
  CHECK(b5.c_lower < 1);
  CHECK(b5.c_lower == b5.s_lower);
  CHECK(b5.c_tilde_lower <= b5.c_lower);
  double prev = 0;
  for (int d = 5; d <= 20; ++d) {
    const double c = localisation_lower_bounds(d).c_lower;
    CHECK(c >= prev);
    prev = c;
  }
  CHECK(localisation_lower_bounds(100).c_lower >= 0.9);
  CHECK(localisation_lower_bounds(3).verdict == SeriesVerdict::DivergentOrUnknown);
}

TEST_CASE("strong transience verdicts") {
  const TransienceReport r5 = strong_transience_verdict(5);
  CHECK(r5.verdict == Transience::StronglyTransient);
  REQUIRE(r5.certified_bound);
  CHECK(std::isfinite(*r5.certified_bound));
  CHECK(strong_transience_verdict(1).verdict == Transience::Recurrent);
  CHECK(strong_transience_verdict(2).verdict == Transience::Recurrent);
  CHECK(strong_transience_verdict(3).verdict == Transience::Inconclusive);
  CHECK(strong_transience_verdict(4).verdict == Transience::Inconclusive);
}

TEST_CASE("window bias bound") {
  const double plain = window_bias_bound(5, 1 << 14, false);
  CHECK(plain > 0);
  CHECK(plain < 0.5);
  CHECK(window_bias_bound(5, 1 << 16, false) < plain);
  CHECK(window_bias_bound(5, 1 << 14, true) >= plain);
  CHECK(window_bias_bound(3, 1024, false) == 1.0);
  CHECK(window_bias_bound(50, 1024, false) < 1e-6);
}

TEST_CASE("exact budget is enforced") {
  CHECK_THROWS(return_probabilities(40, 5000, 1e3));
  CHECK_THROWS(return_probability_by_displacement(10, 20, 1000));
}
