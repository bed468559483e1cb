#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "walklocus/adjacency.hpp"
#include "walklocus/lattice.hpp"
#include "walklocus/point_index.hpp"

namespace walklocus {

enum class TraceKind { Edge, Vertex };

std::string to_string(TraceKind kind);
TraceKind parse_trace_kind(const std::string& text);

// Embedded graph of a walk segment. Vertices are lattice points with dense
// indices; edges join points at l1-distance 1.
class TraceGraph {
 public:
  TraceGraph(PointIndex vertices, std::vector<Edge> edges, std::vector<std::uint64_t> first_visit,
             TraceKind kind, std::optional<VertexId> source_index);

  int dim() const { return vertices_.dim(); }
  TraceKind kind() const { return kind_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  std::span<const Coord> coords(VertexId v) const { return vertices_.point(v); }
  LatticePoint point(VertexId v) const { return LatticePoint(vertices_.point(v)); }
  std::optional<VertexId> find(const LatticePoint& p) const;
  std::optional<VertexId> find(std::span<const Coord> p) const;

  // Sorted, normalized edges.
  const std::vector<Edge>& edges() const { return edges_; }
  const AdjacencyGraph& graph() const { return graph_; }
  std::uint64_t first_visit(VertexId v) const { return first_visit_[v]; }
  const std::vector<std::uint64_t>& first_visits() const { return first_visit_; }
  std::optional<VertexId> source_index() const { return source_index_; }
  const PointIndex& index() const { return vertices_; }

 private:
  PointIndex vertices_;
  std::vector<Edge> edges_;
  std::vector<std::uint64_t> first_visit_;
  TraceKind kind_;
  std::optional<VertexId> source_index_;
  AdjacencyGraph graph_;
};

// Edge trace of X[i, j]; first visits are relative to i and vertex indices
// follow first-visit order.
TraceGraph build_trace(const Walk& w, std::size_t i, std::size_t j);
inline TraceGraph build_trace(const Walk& w) { return build_trace(w, 0, w.length()); }

// Subgraph of Z^d induced by the visited set of the whole walk.
TraceGraph build_vertex_trace(const Walk& w);

// Default step cap for walk_until_range: 10^4 * n.
std::size_t default_range_budget(std::size_t target_vertices);

// Walk from the origin stopped at the first time it has visited exactly
// `target_vertices` distinct points. Throws BudgetExceeded after `step_budget`
// steps. In d <= 2 the budget must be given explicitly.
Walk walk_until_range(int dim, std::size_t target_vertices, Stream& stream,
                      std::optional<std::size_t> step_budget = std::nullopt);
Walk walk_until_range(int dim, std::size_t target_vertices, std::uint64_t seed,
                      std::optional<std::size_t> step_budget = std::nullopt);

// Same graph with every vertex shifted by `offset`; indices are preserved.
TraceGraph translated(const TraceGraph& g, const LatticePoint& offset);

// True iff the two traces have the same embedded vertex and edge sets.
bool same_embedding(const TraceGraph& a, const TraceGraph& b);

nlohmann::json to_json(const TraceGraph& g);
// Validates the trace invariants (adjacency, connectivity, completeness of
// vertex traces) and throws ConfigError on violation.
TraceGraph trace_from_json(const nlohmann::json& j);

}  // namespace walklocus
