#include "walklocus/analytics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "walklocus/error.hpp"

namespace walklocus {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dim(int d) {
  if (d < 1) throw ConfigError("dimension must be >= 1");
}

// Multiplication in the basis sum_s T(s) z^s / (s!)^2:
//   (A * B)(s) = sum_x C(s,x)^2 A(x) B(s-x).
std::vector<BigInt> binomial_square_convolution(const std::vector<BigInt>& a,
                                                const std::vector<BigInt>& b) {
  const std::size_t n = a.size();
  std::vector<BigInt> out(n);
  BigInt binom, term;
  for (std::size_t s = 0; s < n; ++s) {
    BigInt acc = 0;
    binom = 1;
    for (std::size_t x = 0; x <= s; ++x) {
      term = binom * binom;
      term *= a[x];
      term *= b[s - x];
      acc += term;
      binom *= static_cast<unsigned long>(s - x);
      binom /= static_cast<unsigned long>(x + 1);
    }
    out[s] = std::move(acc);
  }
  return out;
}

// sum_{x_1+..+x_d=s} (s!/(x_1!..x_d!))^2 for s = 0..n_max.
std::vector<BigInt> squared_multinomial_sums(int d, unsigned n_max) {
  std::vector<BigInt> base(n_max + 1, BigInt(1));
  std::vector<BigInt> result;
  bool have = false;
  for (unsigned e = static_cast<unsigned>(d); e > 0; e >>= 1) {
    if (e & 1u) {
      result = have ? binomial_square_convolution(result, base) : base;
      have = true;
    }
    if (e > 1) base = binomial_square_convolution(base, base);
  }
  return result;
}

double next_up(double x) { return std::nextafter(x, kInf); }

// Upward-rounded exp of a log value computed in double.
double exp_up(double log_value) {
  const double v = std::exp(log_value) * (1.0 + 1e-12);
  return v == 0.0 ? std::numeric_limits<double>::denorm_min() : next_up(v);
}

}  // namespace

Envelope to_envelope(const Rational& x) {
  const double lo = mpq_get_d(x.backend().data());
  Envelope env{lo, lo};
  const Rational back(lo);
  if (back < x) env.upper = next_up(lo);
  if (back > x) env.lower = std::nextafter(lo, -kInf);
  return env;
}

std::string to_string(SeriesVerdict v) {
  return v == SeriesVerdict::Finite ? "finite" : "divergent-or-unknown";
}

std::string to_string(Transience t) {
  switch (t) {
    case Transience::StronglyTransient: return "strongly-transient";
    case Transience::Recurrent: return "recurrent";
    case Transience::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::vector<Rational> return_probabilities(int d, unsigned n_max, double budget) {
  require_dim(d);
  const double rounds = 2.0 * std::log2(static_cast<double>(d) + 1.0);
  const double work = rounds * 0.5 * (static_cast<double>(n_max) + 1.0) * (static_cast<double>(n_max) + 2.0);
  if (work > budget) {
    throw BudgetExceeded("exact return probabilities up to n=" + std::to_string(n_max) + " in d=" +
                         std::to_string(d) + " exceed the exact budget; use the majorant envelopes");
  }
  const auto sums = squared_multinomial_sums(d, n_max);
  std::vector<Rational> q(n_max + 1);
  BigInt central = 1;  // C(2n, n)
  BigInt denom = 1;    // (2d)^{2n}
  const BigInt step = BigInt(2 * d) * BigInt(2 * d);
  for (unsigned n = 0; n <= n_max; ++n) {
    if (n > 0) {
      central *= 2 * (2 * n - 1);
      central /= n;
      denom *= step;
    }
    q[n] = Rational(central * sums[n], denom);
  }
  return q;
}

Rational return_probability(int d, unsigned n, double budget) {
  return return_probabilities(d, n, budget).back();
}

Rational return_probability_by_displacement(int d, unsigned n, std::size_t state_budget) {
  require_dim(d);
  const std::size_t radix = 2 * static_cast<std::size_t>(n) + 1;
  double states = 1.0;
  for (int a = 0; a < d; ++a) states *= static_cast<double>(radix);
  if (states > static_cast<double>(state_budget)) {
    throw BudgetExceeded("displacement table of " + std::to_string(states) + " states exceeds budget");
  }
  const auto size = static_cast<std::size_t>(states);
  std::vector<std::size_t> stride(static_cast<std::size_t>(d));
  std::size_t origin = 0;
  for (std::size_t a = 0, s = 1; a < stride.size(); ++a, s *= radix) {
    stride[a] = s;
    origin += n * s;
  }
  std::vector<BigInt> cur(size, BigInt(0)), next(size);
  cur[origin] = 1;
  BigInt total = 1;
  for (unsigned k = 0; k < n; ++k) {
    for (std::size_t y = 0; y < size; ++y) {
      BigInt acc = 0;
      for (std::size_t a = 0; a < stride.size(); ++a) {
        const std::size_t coord = (y / stride[a]) % radix;
        if (coord > 0) acc += cur[y - stride[a]];
        if (coord + 1 < radix) acc += cur[y + stride[a]];
      }
      next[y] = std::move(acc);
    }
    std::swap(cur, next);
    total *= 2 * d;
    BigInt mass = 0;
    for (const auto& c : cur) mass += c;
    if (mass != total) throw std::logic_error("walk-count table lost mass");
  }
  BigInt sq = 0;
  for (const auto& c : cur) sq += c * c;
  return Rational(sq, total * total);
}

double lclt_bound(int d, unsigned n) {
  require_dim(d);
  if (n == 0) throw ConfigError("lclt_bound needs n >= 1");
  return std::pow(2.0 * d / (std::numbers::pi * n), d / 2.0);
}

double chord_bound(int d, unsigned n) {
  require_dim(d);
  if (n == 0) throw ConfigError("chord_bound needs n >= 1");
  return std::pow(std::numbers::pi * d / (8.0 * n), d / 2.0);
}

double majorant_tail(int d, unsigned from, int p) {
  require_dim(d);
  if (from == 0) throw ConfigError("majorant tail must start at n >= 1");
  const double h = d / 2.0;
  const double excess = h - p - 1.0;  // integral exponent
  if (excess <= 0) return kInf;
  // sum_{n>=N} f(n) <= f(N) + int_N^inf f for decreasing f(t) = A t^{p-h}.
  const double log_a = h * std::log(std::numbers::pi * d / 8.0);
  const double log_n = std::log(static_cast<double>(from));
  const double first = exp_up(log_a + (p - h) * log_n);
  const double integral = exp_up(log_a - excess * log_n - std::log(excess));
  return next_up(first + integral);
}

ExactValue tail_sum(int d, unsigned k, unsigned cutoff) {
  require_dim(d);
  if (k < 1) throw ConfigError("tail_sum needs k >= 1");
  if (cutoff < k) throw ConfigError("cutoff must be >= k");
  const auto q = return_probabilities(d, cutoff);
  Rational partial = 0;
  for (unsigned n = k; n <= cutoff; ++n) partial += Rational(n) * q[n];
  ExactValue out;
  out.provenance = "sum_{n=k}^{cutoff} n q_n + majorant tail";
  const Envelope p = to_envelope(partial);
  out.bounds.lower = p.lower;
  const double tail = majorant_tail(d, cutoff + 1, 1);
  if (std::isinf(tail)) {
    out.verdict = SeriesVerdict::DivergentOrUnknown;
    out.bounds.upper = kInf;
  } else {
    out.bounds.upper = next_up(p.upper + tail);
  }
  return out;
}

ExactValue intersection_expectation(int d, unsigned cutoff, bool adjacency) {
  require_dim(d);
  if (cutoff < 1) throw ConfigError("cutoff must be >= 1");
  const auto q = return_probabilities(d, cutoff + 1);
  Rational partial = 0;
  double tail = 0;
  ExactValue out;
  if (!adjacency) {
    for (unsigned n = 0; n <= cutoff; ++n) partial += Rational(2 * n + 1) * q[n];
    // sum_{n>cutoff} (2n+1) M(n)
    tail = next_up(2.0 * majorant_tail(d, cutoff + 1, 1) + majorant_tail(d, cutoff + 1, 0));
    out.provenance = "sum_{n>=0} (2n+1) q_n";
  } else {
    Rational inner = 0;
    for (unsigned n = 1; n <= cutoff; ++n) inner += Rational(2 * n + 1) * q[n + 1];
    partial = 1 + Rational(2 * d) * inner;
    // sum_{n>cutoff} (2n+1) q_{n+1} <= 2 sum_{m>cutoff+1} m M(m)
    tail = next_up(2.0 * d * next_up(2.0 * majorant_tail(d, cutoff + 2, 1)));
    out.provenance = "1 + 2d sum_{n>=1} (2n+1) q_{n+1}";
  }
  const Envelope p = to_envelope(partial);
  out.bounds.lower = p.lower;
  if (std::isinf(tail)) {
    out.verdict = SeriesVerdict::DivergentOrUnknown;
    out.bounds.upper = kInf;
  } else {
    out.bounds.upper = next_up(p.upper + tail);
  }
  return out;
}

LowerBounds localisation_lower_bounds(int d, unsigned cutoff) {
  LowerBounds out;
  const ExactValue ei = intersection_expectation(d, cutoff, false);
  const ExactValue ej = intersection_expectation(d, cutoff, true);
  if (ei.verdict != SeriesVerdict::Finite || ej.verdict != SeriesVerdict::Finite) {
    out.verdict = SeriesVerdict::DivergentOrUnknown;
    return out;
  }
  out.s_lower = std::nextafter(1.0 / ei.bounds.upper, 0.0);
  out.c_lower = out.s_lower;
  out.c_tilde_lower = std::nextafter(1.0 / ej.bounds.upper, 0.0);
  return out;
}

bool monotonicity_check(int d, unsigned n_max) {
  const auto q = return_probabilities(d, n_max);
  for (unsigned n = 1; n <= n_max; ++n)
    if (q[n] > q[n - 1]) return false;
  return true;
}

TransienceReport strong_transience_verdict(int d) {
  require_dim(d);
  TransienceReport out;
  if (d <= 2) {
    out.verdict = Transience::Recurrent;
  } else if (d <= 4) {
    out.verdict = Transience::Inconclusive;
  } else {
    out.verdict = Transience::StronglyTransient;
    out.certified_bound = tail_sum(d, 1).bounds.upper;
  }
  return out;
}

double window_bias_bound(int d, std::size_t window, bool induced) {
  require_dim(d);
  if (window < 1) throw ConfigError("window must be >= 1");
  // Meetings at even total time 2n > T: at most 2n time pairs each.
  const auto first_even = static_cast<unsigned>(window / 2 + 1);
  double bound = 2.0 * majorant_tail(d, first_even, 1);
  if (induced) {
    // Adjacency at odd total time 2n-1 > T: 2d q_n per pair, 2n-1 pairs.
    const auto first_odd = static_cast<unsigned>((window + 1) / 2 + 1);
    bound = next_up(bound + 2.0 * d * next_up(2.0 * majorant_tail(d, first_odd, 1)));
  }
  if (std::isnan(bound) || bound > 1.0) return 1.0;
  return next_up(bound);
}

}  // namespace walklocus
