#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "walklocus/graphalg.hpp"
#include "walklocus/lattice.hpp"
#include "walklocus/rng.hpp"
#include "walklocus/trace.hpp"

namespace walklocus {

struct EstimatorOutcome {
  // One vertex for Psi and Gamma, a set (ascending) for Lambda_k; empty when unstable.
  std::vector<VertexId> chosen;
  std::optional<Edge> diametric_pair_used;
  std::optional<bool> success;
  bool unstable = false;
};

struct GammaState {
  VertexId anchor = 0;
  std::uint32_t horizon = 0;       // last radius examined
  std::vector<VertexId> h_vertices;  // vertices of H at that radius (indices of the input trace)
  std::vector<VertexId> U;         // near endpoints at that radius, ascending
  bool stabilized = false;
  std::vector<std::uint32_t> horizons;  // radii examined, in order
};

struct GammaResult {
  EstimatorOutcome outcome;
  GammaState state;
};

// Uniform diametrical path, then a uniform endpoint: a diametric pair is drawn
// with probability proportional to its number of shortest paths.
EstimatorOutcome psi(const TraceGraph& g, Stream& rng);
EstimatorOutcome psi(const DiameterSummary& summary, Stream& rng);

// Uniform diametric pair; the k/2 nearest vertices to each endpoint (ties by
// first visit, then lexicographic coordinates). k must be even and >= 2.
EstimatorOutcome lambda_k(const TraceGraph& g, std::size_t k, Stream& rng);

inline constexpr std::uint32_t kDefaultMaxHorizon = 1u << 20;

// Finite-horizon Gamma. Anchor x is the vertex farthest from the terminal
// (lexicographically least among ties), so that balls around x can swallow the
// start of the walk before reaching the terminal; radii
// r = 1, 2, 4, ... are tried while the terminal vertex lies outside B_r(x) and
// r <= max_horizon. The component of the terminal vertex after deleting the
// edges inside B_r(x) stands in for the infinite component. Stabilized at the
// first r with U_r = U_{r/2}; otherwise the outcome is unstable.
GammaResult gamma_finite(const TraceGraph& g, VertexId terminal, Stream& rng,
                         std::uint32_t max_horizon = kDefaultMaxHorizon);
// Uses X_n as the terminal vertex.
GammaResult gamma_finite(const Walk& w, Stream& rng, std::uint32_t max_horizon = kDefaultMaxHorizon);

// Default terminal vertex for a trace with no walk attached: the vertex
// discovered last.
VertexId latest_vertex(const TraceGraph& g);

enum class EstimatorKind { Psi, Lambda, Gamma };

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::Psi;
  std::size_t k = 0;  // Lambda only
  std::uint32_t max_horizon = kDefaultMaxHorizon;

  // "psi", "lambda:K", "gamma"
  static EstimatorSpec parse(const std::string& text);
  std::string to_string() const;
};

// Dispatch; fills success when truth is given: truth in chosen for sets,
// truth == chosen for single outputs. Gamma uses `terminal` or latest_vertex.
EstimatorOutcome localize(const TraceGraph& g, const EstimatorSpec& spec, std::optional<VertexId> truth,
                          Stream& rng, std::optional<VertexId> terminal = std::nullopt);

nlohmann::json to_json(const EstimatorOutcome& o, const TraceGraph& g);

}  // namespace walklocus
