#include "walklocus/adjacency.hpp"

namespace walklocus {

AdjacencyGraph::AdjacencyGraph(std::size_t num_vertices, std::span<const Edge> edges)
    : offsets_(num_vertices + 1, 0), targets_(2 * edges.size()) {
  for (const auto& [a, b] : edges) {
    ++offsets_[a + 1];
    ++offsets_[b + 1];
  }
  for (std::size_t v = 0; v < num_vertices; ++v) offsets_[v + 1] += offsets_[v];
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [a, b] : edges) {
    targets_[fill[a]++] = b;
    targets_[fill[b]++] = a;
  }
}

}  // namespace walklocus
