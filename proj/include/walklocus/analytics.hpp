#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace walklocus {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// Rigorous enclosure lower <= value <= upper.
struct Envelope {
  double lower = 0.0;
  double upper = 0.0;
  double width() const { return upper - lower; }
};

// Tightest double enclosure of an exact rational.
Envelope to_envelope(const Rational& x);

enum class SeriesVerdict { Finite, DivergentOrUnknown };
std::string to_string(SeriesVerdict v);

// An exact rational when available, otherwise bounds only. `provenance`
// names the formula that produced it.
struct ExactValue {
  std::optional<Rational> exact;
  Envelope bounds;
  SeriesVerdict verdict = SeriesVerdict::Finite;
  std::string provenance;
};

// Work cap for the exact return-probability computations, in units of
// big-integer products.
inline constexpr double kDefaultExactBudget = 5e7;

// q_n = P(X_{2n} = 0) for n = 0..n_max via the squared-multinomial identity
//   q_n = C(2n,n) (2d)^{-2n} sum_{x_1+..+x_d=n} (n! / (x_1!..x_d!))^2,
// with the inner sums built by binary powering of a binomial convolution.
std::vector<Rational> return_probabilities(int d, unsigned n_max,
                                           double budget = kDefaultExactBudget);
Rational return_probability(int d, unsigned n, double budget = kDefaultExactBudget);

// Independent route: count n-step walks to every displacement y over the box
// [-n, n]^d and use q_n = sum_y N_n(y)^2 / (2d)^{2n}. The walk-count table is
// checked to sum to (2d)^k after every step. `state_budget` caps (2n+1)^d.
Rational return_probability_by_displacement(int d, unsigned n, std::size_t state_budget = 4'000'000);

// (2d / (pi n))^{d/2}, n >= 1.
double lclt_bound(int d, unsigned n);

// (pi d / (8 n))^{d/2}, n >= 1: the same Fourier argument with the chord
// inequality cos t <= 1 - 4t^2/pi^2 on |t| <= pi/2. Always below lclt_bound.
double chord_bound(int d, unsigned n);

// Certified upper bound on sum_{n >= from} n^p * chord_bound(d, n) for p in {0, 1};
// +inf when the majorant is not summable.
double majorant_tail(int d, unsigned from, int p);

inline constexpr unsigned kDefaultCutoff = 200;

// S_d(k) = sum_{n >= k} n q_n: exact partial sum over [k, cutoff] plus a
// majorant tail. d <= 4 gives verdict DivergentOrUnknown with upper = +inf.
ExactValue tail_sum(int d, unsigned k, unsigned cutoff = kDefaultCutoff);

// E[I] = sum_{n>=0} (2n+1) q_n, or with `adjacency`
// E[J] = 1 + 2d sum_{n>=1} (2n+1) q_{n+1}.
ExactValue intersection_expectation(int d, unsigned cutoff = kDefaultCutoff, bool adjacency = false);

struct LowerBounds {
  double s_lower = 0.0;
  double c_lower = 0.0;
  double c_tilde_lower = 0.0;
  SeriesVerdict verdict = SeriesVerdict::Finite;
};

// s(d) >= 1/E[I], c(d) >= s(d), c~(d) >= 1/E[J]; all rounded downward.
LowerBounds localisation_lower_bounds(int d, unsigned cutoff = kDefaultCutoff);

// q_0 >= q_1 >= ... >= q_{n_max}, compared exactly.
bool monotonicity_check(int d, unsigned n_max);

enum class Transience { StronglyTransient, Recurrent, Inconclusive };
std::string to_string(Transience t);

struct TransienceReport {
  Transience verdict = Transience::Inconclusive;
  // Certified upper bound on sum_n n q_n when strongly transient.
  std::optional<double> certified_bound;
};

TransienceReport strong_transience_verdict(int d);

// Upper bound on the probability that two independent walks from the origin
// (one shifted by a first step) meet only after one of them has left its
// T-step window: sum over return times m > T of m * P(X_m = 0). With
// `induced`, l1-adjacency at odd times is added. Clamped to [0, 1].
double window_bias_bound(int d, std::size_t window, bool induced);

}  // namespace walklocus
