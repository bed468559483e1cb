#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "walklocus/lattice.hpp"
#include "walklocus/report.hpp"

namespace walklocus {

// Per-edge indicators for an n-step walk; edge k joins X_k and X_{k+1}.
// Edge k is cut iff X[0,k] and X[k+1,n] share no vertex. It is an induced
// cut iff moreover no X_i (i <= k) is lattice-adjacent to any X_j (j >= k+1)
// other than through the pair (i, j) = (k, k+1).
struct CutEdgeRecord {
  std::size_t n = 0;
  std::vector<char> is_cut;
  std::vector<char> is_induced_cut;

  std::size_t cut_count() const;
  std::size_t induced_cut_count() const;
  // Cut edges with index in [first, last).
  std::size_t cut_count(std::size_t first, std::size_t last) const;
};

// O(n) expected time using last-visit times of vertices and of their lattice
// neighbourhoods.
CutEdgeRecord finite_cut_edges(const Walk& w);

// Block schedule a_0 = m, a_1 = ceil(lambda m), a_n = ceil(lambda b_{n-2}),
// b_n = a_0 + .. + a_n, lambda = c/8. Block n covers edge indices
// [b_{n-1}, b_n) with b_{-1} = 0.
class Schedule {
 public:
  // Materializes blocks until b covers `cover` edges.
  Schedule(std::size_t m, double c, std::size_t cover);

  std::size_t m() const { return m_; }
  double c() const { return c_; }
  double lambda() const { return c_ / 8.0; }
  const std::vector<std::size_t>& a() const { return a_; }
  const std::vector<std::size_t>& b() const { return b_; }
  std::size_t horizon() const { return b_.back(); }
  std::size_t block_start(std::size_t n) const { return n == 0 ? 0 : b_[n - 1]; }

  // a_n + a_{n+1} <= (c/2) b_{n-1} and a_n >= lambda (1 + lambda/(1+lambda))^{n-2} m
  // for every materialized n >= 2 (meaningful when m >= 8/c).
  bool satisfies_growth_bounds() const;

 private:
  std::size_t m_;
  double c_;
  std::vector<std::size_t> a_;
  std::vector<std::size_t> b_;
};

struct SegmentCounts {
  std::vector<std::size_t> counts;   // one per block intersecting the walk
  std::vector<char> complete;        // block lies entirely within the walk
  bool event_A = true;               // every complete block has >= (c/2) a_n cut edges
};

SegmentCounts segment_cut_counts(const CutEdgeRecord& rec, const Schedule& schedule);

struct EventDiagnostics {
  std::size_t cut_count = 0;
  double delta = 0.0;
  double eta = 0.0;
  // Smallest number of cut edges separating a diametric pair of G[i,j].
  std::size_t min_separating_cuts = 0;
  bool holds_M = false;
  bool holds_N = false;
  bool holds_C = false;
};

// Events M_ij, N_ij, C_ij for the segment X[i,j] against density c_ref.
// Cut edges are those of the segment's own finite trace.
EventDiagnostics diagnostics(const Walk& w, std::size_t i, std::size_t j, double delta, double eta,
                             double c_ref);

// Whether the two T-step windows of a two-sided walk through the origin satisfy
// the (induced) non-intersection condition at edge {X_0, X_1}. `back` supplies
// X_0, X_{-1}, ..., `forward` X_0, X_1, ...
bool window_indicator(const Walk& back, const Walk& forward, bool induced);

struct EstimateCConfig {
  int dim = 5;
  std::size_t window = 1u << 14;
  std::uint64_t replicates = 1000;
  std::uint64_t seed = 1;
  bool induced = false;
  // Also evaluate the plain indicator on each replicate (induced => plain) and
  // report the induced count and pathwise violations in `extra`.
  bool paired = false;
  unsigned threads = 1;
};

// Monte Carlo estimate of c(d) (or the induced density) from two independent
// window-length walks per replicate. Replicate r draws from
// replicate_stream(seed, r); the forward walk uses split(1) and the backward
// walk split(2). The report carries a one-sided truncation-bias bound.
EstimateReport estimate_c(const EstimateCConfig& cfg, const std::atomic<bool>* stop = nullptr);

// The per-replicate indicator used by estimate_c, exposed for paired runs.
bool estimate_c_replicate(int dim, std::size_t window, std::uint64_t seed, std::uint64_t replicate,
                          bool induced);

}  // namespace walklocus
