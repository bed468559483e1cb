#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace walklocus {

using VertexId = std::uint32_t;
// Unordered edge stored with first < second.
using Edge = std::pair<VertexId, VertexId>;

inline Edge make_edge(VertexId a, VertexId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Immutable undirected graph in compressed sparse row form.
class AdjacencyGraph {
 public:
  AdjacencyGraph() = default;
  // Edges must be normalized and free of duplicates and loops.
  AdjacencyGraph(std::size_t num_vertices, std::span<const Edge> edges);

  std::size_t num_vertices() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const { return targets_.size() / 2; }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

 private:
  std::vector<std::uint32_t> offsets_;
  std::vector<VertexId> targets_;
};

}  // namespace walklocus
