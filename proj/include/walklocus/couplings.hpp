#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"

#include "walklocus/lattice.hpp"
#include "walklocus/report.hpp"

namespace walklocus {

// f(s_1..s_n) = (-s_n, .., -s_1). An involution.
StepSequence reverse_map_f(const StepSequence& s);

// g(s_1..s_n) = (s_2..s_n, -s_n)  if s_1 = -s_2,
//               (s_2..s_n, -s_2)  if s_1 != -s_2 and s_1 = -s_n,
//               (s_2..s_n, s_1)   otherwise.            n >= 3.
StepSequence reroute_map_g(const StepSequence& s);

// h(s_1..s_n) = (s_n, s_1, .., s_{n-1}) and its inverse.
StepSequence rotate_map_h(const StepSequence& s);
StepSequence rotate_map_h_inverse(const StepSequence& s);

// g^{-1} = h g h, from (h g)(h g) = id.
StepSequence reroute_map_g_inverse(const StepSequence& s);

// trace(f(S)) + X_n == trace(S), for the walk from the origin with steps S.
bool check_reverse_identity(const StepSequence& s);
// On {S_1 = -S_2}: trace(g(S)) + X_1 == trace(S). Returns nullopt off the event.
std::optional<bool> check_reroute_identity(const StepSequence& s);
// On {S_1 = -S_2} and ||S_3 + .. + S_{n-1}||_1 > 5: 0, X_n, X_1, X_1 + X^g_n are
// distinct. Returns nullopt off the event.
std::optional<bool> check_distinct_endpoints(const StepSequence& s);

// Even-parity starting points nearest the origin: d = 1 gives 0, 2, -2, 4, ...;
// d = 2 orders by l1 norm, then lexicographically.
std::vector<LatticePoint> default_amnesia_starts(int dim, std::size_t k);

struct AmnesiaConfig {
  int dim = 1;
  std::size_t walks = 2;  // k
  std::size_t horizon = 4096;
  std::optional<std::size_t> t1;  // coupling budget, default horizon / 2
  std::optional<std::size_t> t2;  // covering budget, default horizon - t1
  std::vector<LatticePoint> starts;  // default_amnesia_starts when empty
  std::uint64_t replicates = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct CouplingReport {
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t t1 = 0;
  std::size_t t2 = 0;
  Tally traces_equal;  // success = all k traces equal that of X at horizon n
  std::uint64_t coupled_by_t1 = 0;     // event A
  std::uint64_t covered_by_t2 = 0;     // X[t1, t1+t2] re-traverses every earlier edge
  std::uint64_t all_coupled = 0;       // every walk met X within the horizon
  std::optional<std::uint64_t> max_coupling_time;
  // Mean over replicates of (1/k) sum_i 1{Psi(T_n(X^i)) = v_i}, and its standard error.
  double psi_success_average = 0.0;
  double psi_success_stderr = 0.0;
  bool partial = false;
  nlohmann::json config;

  nlohmann::json to_json() const;
};

// Meet-then-follow coupling of k walks X^i from the starts with a walk X from
// the origin: each X^i moves independently until X^i_t = X_t, then copies X.
CouplingReport amnesia_experiment(const AmnesiaConfig& cfg, const std::atomic<bool>* stop = nullptr);

}  // namespace walklocus
