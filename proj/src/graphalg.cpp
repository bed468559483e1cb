#include "walklocus/graphalg.hpp"

#include <algorithm>
#include <numeric>

#include "walklocus/error.hpp"

namespace walklocus {

namespace {

void check_vertex(std::size_t n, VertexId v) {
  if (v >= n) throw GraphError("vertex index " + std::to_string(v) + " out of range");
}

// Fills dist (kUnreachable for unreached) and returns the eccentricity within
// the reached component together with the number of reached vertices.
struct BfsResult {
  std::uint32_t ecc = 0;
  std::size_t reached = 0;
};

BfsResult bfs(const AdjacencyGraph& g, VertexId s, std::vector<std::uint32_t>& dist,
              std::vector<VertexId>& queue) {
  dist.assign(g.num_vertices(), kUnreachable);
  queue.clear();
  queue.push_back(s);
  dist[s] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    const std::uint32_t next = dist[v] + 1;
    for (VertexId u : g.neighbors(v)) {
      if (dist[u] == kUnreachable) {
        dist[u] = next;
        queue.push_back(u);
      }
    }
  }
  return {dist[queue.back()], queue.size()};
}

// Shortest-path counts from s to every vertex at distance `target`. Counts are
// accumulated in 64 bits and recomputed in arbitrary precision on overflow.
void count_paths_from(const AdjacencyGraph& g, VertexId s, std::uint32_t target,
                      std::vector<std::uint32_t>& dist, std::vector<VertexId>& queue,
                      std::vector<Edge>& pairs, std::vector<BigCount>& counts) {
  bfs(g, s, dist, queue);
  std::vector<std::uint64_t> small(g.num_vertices(), 0);
  small[s] = 1;
  bool overflow = false;
  for (VertexId v : queue) {
    if (dist[v] >= target) break;
    for (VertexId u : g.neighbors(v)) {
      if (dist[u] == dist[v] + 1 && __builtin_add_overflow(small[u], small[v], &small[u])) overflow = true;
    }
    if (overflow) break;
  }
  std::vector<BigCount> big;
  if (overflow) {
    big.assign(g.num_vertices(), BigCount(0));
    big[s] = 1;
    for (VertexId v : queue) {
      if (dist[v] >= target) break;
      for (VertexId u : g.neighbors(v))
        if (dist[u] == dist[v] + 1) big[u] += big[v];
    }
  }
  std::vector<VertexId> ends;
  for (VertexId v : queue)
    if (dist[v] == target && v > s) ends.push_back(v);
  std::sort(ends.begin(), ends.end());
  for (VertexId v : ends) {
    pairs.emplace_back(s, v);
    counts.push_back(overflow ? big[v] : BigCount(small[v]));
  }
}

// Exact eccentricity bounding. With `all_peripheral`, every vertex whose
// eccentricity may equal the diameter is resolved exactly; otherwise only the
// diameter value is guaranteed. Returns exact eccentricities (kUnreachable if
// unresolved) and the diameter.
std::uint32_t bound_eccentricities(const AdjacencyGraph& g, bool all_peripheral,
                                   std::vector<std::uint32_t>& exact) {
  const std::size_t n = g.num_vertices();
  if (n == 0) throw GraphError("empty graph");
  std::vector<std::uint32_t> lower(n, 0), upper(n, kUnreachable), dist;
  std::vector<VertexId> queue, candidates(n);
  std::iota(candidates.begin(), candidates.end(), VertexId{0});
  exact.assign(n, kUnreachable);
  std::uint32_t d_lower = 0;
  bool pick_high = true;
  while (!candidates.empty()) {
    VertexId v = candidates.front();
    for (VertexId c : candidates) {
      if (pick_high ? (upper[c] > upper[v] || (upper[c] == upper[v] && lower[c] > lower[v]))
                    : (lower[c] < lower[v] || (lower[c] == lower[v] && upper[c] < upper[v])))
        v = c;
    }
    pick_high = !pick_high;
    const BfsResult r = bfs(g, v, dist, queue);
    if (r.reached != n) throw GraphError("graph is not connected");
    const std::uint32_t e = r.ecc;
    exact[v] = e;
    d_lower = std::max(d_lower, e);
    for (VertexId w : candidates) {
      const std::uint32_t dw = dist[w];
      lower[w] = std::max({lower[w], dw, e - dw});
      upper[w] = std::min(upper[w], e + dw);
      d_lower = std::max(d_lower, lower[w]);
    }
    std::size_t keep = 0;
    for (VertexId w : candidates) {
      if (lower[w] == upper[w]) {
        exact[w] = lower[w];
        continue;
      }
      if (all_peripheral ? upper[w] < d_lower : upper[w] <= d_lower) continue;
      candidates[keep++] = w;
    }
    candidates.resize(keep);
  }
  return d_lower;
}

}  // namespace

std::vector<std::uint32_t> bfs_distances(const AdjacencyGraph& g, VertexId s) {
  check_vertex(g.num_vertices(), s);
  std::vector<std::uint32_t> dist;
  std::vector<VertexId> queue;
  bfs(g, s, dist, queue);
  return dist;
}

std::vector<std::uint32_t> bfs_distances(const TraceGraph& g, VertexId s) {
  return bfs_distances(g.graph(), s);
}

std::uint32_t eccentricity(const AdjacencyGraph& g, VertexId v) {
  check_vertex(g.num_vertices(), v);
  std::vector<std::uint32_t> dist;
  std::vector<VertexId> queue;
  const BfsResult r = bfs(g, v, dist, queue);
  if (r.reached != g.num_vertices()) throw GraphError("graph is not connected");
  return r.ecc;
}

DiameterSummary diameter_summary(const AdjacencyGraph& g) {
  std::vector<std::uint32_t> exact;
  const std::uint32_t diam = bound_eccentricities(g, true, exact);
  DiameterSummary out;
  out.diameter = diam;
  if (diam == 0) {
    out.pairs.emplace_back(0, 0);
    out.path_counts.emplace_back(1);
    return out;
  }
  std::vector<std::uint32_t> dist;
  std::vector<VertexId> queue;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (exact[v] == diam) count_paths_from(g, v, diam, dist, queue, out.pairs, out.path_counts);
  }
  return out;
}

DiameterSummary diameter_summary(const TraceGraph& g) { return diameter_summary(g.graph()); }

DiameterSummary diameter_summary_all_pairs(const AdjacencyGraph& g) {
  const std::size_t n = g.num_vertices();
  if (n == 0) throw GraphError("empty graph");
  std::vector<std::uint32_t> dist, ecc(n);
  std::vector<VertexId> queue;
  std::uint32_t diam = 0;
  for (VertexId v = 0; v < n; ++v) {
    const BfsResult r = bfs(g, v, dist, queue);
    if (r.reached != n) throw GraphError("graph is not connected");
    ecc[v] = r.ecc;
    diam = std::max(diam, r.ecc);
  }
  DiameterSummary out;
  out.diameter = diam;
  if (diam == 0) {
    out.pairs.emplace_back(0, 0);
    out.path_counts.emplace_back(1);
    return out;
  }
  for (VertexId s = 0; s < n; ++s) {
    if (ecc[s] != diam) continue;
    // Plain arbitrary-precision counting, independent of the 64-bit fast path.
    bfs(g, s, dist, queue);
    std::vector<BigCount> count(n, BigCount(0));
    count[s] = 1;
    for (VertexId v : queue)
      for (VertexId u : g.neighbors(v))
        if (dist[u] == dist[v] + 1) count[u] += count[v];
    for (VertexId v = s + 1; v < n; ++v) {
      if (dist[v] == diam) {
        out.pairs.emplace_back(s, v);
        out.path_counts.push_back(count[v]);
      }
    }
  }
  return out;
}

std::uint32_t diameter(const AdjacencyGraph& g) {
  std::vector<std::uint32_t> exact;
  return bound_eccentricities(g, false, exact);
}

std::vector<VertexId> ball(const AdjacencyGraph& g, VertexId center, std::uint32_t r) {
  check_vertex(g.num_vertices(), center);
  std::vector<std::uint32_t> dist(g.num_vertices(), kUnreachable);
  std::vector<VertexId> queue{center};
  dist[center] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    if (dist[v] == r) continue;
    for (VertexId u : g.neighbors(v)) {
      if (dist[u] == kUnreachable) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

std::vector<VertexId> ball(const TraceGraph& g, VertexId center, std::uint32_t r) {
  return ball(g.graph(), center, r);
}

std::vector<std::uint32_t> component_labels(std::size_t num_vertices, std::span<const Edge> edges,
                                            std::span<const char> removed) {
  std::vector<Edge> kept;
  kept.reserve(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (!removed[e]) kept.push_back(edges[e]);
  const AdjacencyGraph residual(num_vertices, kept);
  std::vector<std::uint32_t> label(num_vertices, kUnreachable);
  std::vector<VertexId> stack;
  std::uint32_t next = 0;
  for (VertexId s = 0; s < num_vertices; ++s) {
    if (label[s] != kUnreachable) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (VertexId u : residual.neighbors(v)) {
        if (label[u] == kUnreachable) {
          label[u] = next;
          stack.push_back(u);
        }
      }
    }
    ++next;
  }
  return label;
}

std::vector<std::vector<VertexId>> residual_components(const TraceGraph& g,
                                                       std::span<const Edge> removed_edges) {
  const auto& edges = g.edges();
  std::vector<char> removed(edges.size(), 0);
  for (const Edge& raw : removed_edges) {
    const Edge e = make_edge(raw.first, raw.second);
    const auto it = std::lower_bound(edges.begin(), edges.end(), e);
    if (it == edges.end() || *it != e) {
      throw GraphError("edge {" + std::to_string(raw.first) + "," + std::to_string(raw.second) +
                       "} is not in the trace");
    }
    removed[static_cast<std::size_t>(it - edges.begin())] = 1;
  }
  const auto label = component_labels(g.num_vertices(), edges, removed);
  const std::uint32_t k = g.num_vertices() == 0 ? 0 : *std::max_element(label.begin(), label.end()) + 1;
  std::vector<std::vector<VertexId>> comps(k);
  for (VertexId v = 0; v < g.num_vertices(); ++v) comps[label[v]].push_back(v);
  std::vector<std::uint64_t> earliest(k);
  for (std::uint32_t c = 0; c < k; ++c) {
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (VertexId v : comps[c]) best = std::min(best, g.first_visit(v));
    earliest[c] = best;
  }
  std::vector<std::uint32_t> order(k);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return earliest[a] < earliest[b]; });
  std::vector<std::vector<VertexId>> out;
  out.reserve(k);
  for (auto c : order) out.push_back(std::move(comps[c]));
  return out;
}

}  // namespace walklocus
