#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "walklocus/adjacency.hpp"
#include "walklocus/trace.hpp"

namespace walklocus {

using BigCount = boost::multiprecision::cpp_int;

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

// Hop distances from s; kUnreachable where no path exists.
std::vector<std::uint32_t> bfs_distances(const AdjacencyGraph& g, VertexId s);
std::vector<std::uint32_t> bfs_distances(const TraceGraph& g, VertexId s);

std::uint32_t eccentricity(const AdjacencyGraph& g, VertexId v);

// Diameter with the complete list of diametric pairs {u, v} (u < v) in
// ascending order and the number of shortest u-v paths for each. A single
// vertex graph reports diameter 0 with the pair (0, 0) and count 1.
struct DiameterSummary {
  std::uint32_t diameter = 0;
  std::vector<Edge> pairs;
  std::vector<BigCount> path_counts;
};

// Exact. Eccentricities are resolved by lower/upper bounding so that only a
// few BFS runs are needed on path-like graphs; every vertex of maximum
// eccentricity is identified exactly. Throws GraphError if disconnected.
DiameterSummary diameter_summary(const AdjacencyGraph& g);
DiameterSummary diameter_summary(const TraceGraph& g);

// Reference implementation: BFS from every vertex.
DiameterSummary diameter_summary_all_pairs(const AdjacencyGraph& g);

// Diameter value only (cheaper pruning). Throws GraphError if disconnected.
std::uint32_t diameter(const AdjacencyGraph& g);

// Vertices within distance r of center, ascending by index.
std::vector<VertexId> ball(const AdjacencyGraph& g, VertexId center, std::uint32_t r);
std::vector<VertexId> ball(const TraceGraph& g, VertexId center, std::uint32_t r);

// Component label per vertex when the edges flagged in `removed` (indexed like
// `edges`) are dropped. Labels are 0..k-1 in order of smallest vertex index.
std::vector<std::uint32_t> component_labels(std::size_t num_vertices, std::span<const Edge> edges,
                                            std::span<const char> removed);

// Connected components of g minus `removed_edges`, listed in ascending order of
// their earliest first visit; vertices inside each component ascending by index.
// Throws GraphError on an edge that is not in g.
std::vector<std::vector<VertexId>> residual_components(const TraceGraph& g,
                                                       std::span<const Edge> removed_edges);

}  // namespace walklocus
