#include "walklocus/estimators.hpp"

#include <algorithm>
#include <charconv>

#include "walklocus/error.hpp"

namespace walklocus {

namespace {

// Uniform integer in [0, bound) by rejection on the bit length of bound.
BigCount uniform_below(const BigCount& bound, Stream& rng) {
  const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(bound)) + 1;
  while (true) {
    BigCount r = 0;
    unsigned have = 0;
    while (have < bits) {
      const unsigned take = std::min(32u, bits - have);
      std::uint32_t word = rng();
      if (take < 32) word &= (1u << take) - 1u;
      r <<= take;
      r |= word;
      have += take;
    }
    if (r < bound) return r;
  }
}

}  // namespace

EstimatorOutcome psi(const DiameterSummary& summary, Stream& rng) {
  EstimatorOutcome out;
  std::size_t pick = 0;
  if (summary.pairs.size() > 1) {
    BigCount total = 0;
    for (const auto& c : summary.path_counts) total += c;
    BigCount r = uniform_below(total, rng);
    while (r >= summary.path_counts[pick]) {
      r -= summary.path_counts[pick];
      ++pick;
    }
  }
  const Edge pair = summary.pairs.at(pick);
  out.diametric_pair_used = pair;
  out.chosen = {rng.below(2) == 0 ? pair.first : pair.second};
  return out;
}

EstimatorOutcome psi(const TraceGraph& g, Stream& rng) { return psi(diameter_summary(g), rng); }

namespace {

// The `count` vertices nearest to s, ordered by (distance, first visit, coordinates).
std::vector<VertexId> nearest(const TraceGraph& g, VertexId s, std::size_t count) {
  const auto& graph = g.graph();
  std::vector<std::uint32_t> dist(graph.num_vertices(), kUnreachable);
  std::vector<VertexId> queue{s};
  dist[s] = 0;
  // Expand whole layers until at least `count` vertices are known; the queue
  // then holds exactly the vertices up to the current layer.
  std::size_t head = 0;
  while (head < queue.size()) {
    const std::uint32_t layer = dist[queue[head]];
    std::size_t layer_end = head;
    while (layer_end < queue.size() && dist[queue[layer_end]] == layer) ++layer_end;
    if (layer_end >= count) break;
    for (std::size_t i = head; i < layer_end; ++i) {
      for (VertexId u : graph.neighbors(queue[i])) {
        if (dist[u] == kUnreachable) {
          dist[u] = layer + 1;
          queue.push_back(u);
        }
      }
    }
    head = layer_end;
  }
  std::sort(queue.begin(), queue.end(), [&](VertexId a, VertexId b) {
    if (dist[a] != dist[b]) return dist[a] < dist[b];
    if (g.first_visit(a) != g.first_visit(b)) return g.first_visit(a) < g.first_visit(b);
    const auto ca = g.coords(a);
    const auto cb = g.coords(b);
    return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end());
  });
  if (queue.size() > count) queue.resize(count);
  return queue;
}

}  // namespace

EstimatorOutcome lambda_k(const TraceGraph& g, std::size_t k, Stream& rng) {
  if (k < 2 || k % 2 != 0) throw ConfigError("lambda_k needs an even k >= 2");
  const DiameterSummary summary = diameter_summary(g);
  const auto pick = summary.pairs.size() == 1
                        ? 0u
                        : rng.below(static_cast<std::uint32_t>(summary.pairs.size()));
  const Edge pair = summary.pairs[pick];
  EstimatorOutcome out;
  out.diametric_pair_used = pair;
  auto a = nearest(g, pair.first, k / 2);
  auto b = nearest(g, pair.second, k / 2);
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  out.chosen = std::move(a);
  return out;
}

VertexId latest_vertex(const TraceGraph& g) {
  const auto& fv = g.first_visits();
  return static_cast<VertexId>(std::max_element(fv.begin(), fv.end()) - fv.begin());
}

GammaResult gamma_finite(const TraceGraph& g, VertexId terminal, Stream& rng, std::uint32_t max_horizon) {
  if (terminal >= g.num_vertices()) throw ConfigError("terminal vertex out of range");
  const std::size_t nv = g.num_vertices();
  GammaResult res;
  GammaState& st = res.state;
  // Anchor: the vertex farthest from the terminal, lexicographically least among ties.
  const auto dist_t = bfs_distances(g.graph(), terminal);
  VertexId anchor = 0;
  for (VertexId v = 1; v < nv; ++v) {
    if (dist_t[v] != dist_t[anchor]) {
      if (dist_t[v] > dist_t[anchor]) anchor = v;
      continue;
    }
    const auto cv = g.coords(v);
    const auto ca = g.coords(anchor);
    if (std::lexicographical_compare(cv.begin(), cv.end(), ca.begin(), ca.end())) anchor = v;
  }
  st.anchor = anchor;
  const auto dist_x = bfs_distances(g.graph(), anchor);
  const auto& edges = g.edges();
  std::vector<char> ball_edge(edges.size());
  std::vector<VertexId> local(nv);
  std::optional<std::vector<VertexId>> previous;
  for (std::uint64_t r = 1; r <= max_horizon && r < dist_x[terminal]; r *= 2) {
    const auto radius = static_cast<std::uint32_t>(r);
    st.horizons.push_back(radius);
    for (std::size_t e = 0; e < edges.size(); ++e)
      ball_edge[e] = dist_x[edges[e].first] <= radius && dist_x[edges[e].second] <= radius;
    const auto label = component_labels(nv, edges, ball_edge);
    const auto far = label[terminal];
    // H: every edge except the non-ball edges of the terminal's component.
    std::vector<char> in_h(nv, 0);
    std::vector<Edge> h_edges_global;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (!ball_edge[e] && label[edges[e].first] == far) continue;
      h_edges_global.push_back(edges[e]);
      in_h[edges[e].first] = in_h[edges[e].second] = 1;
    }
    std::vector<VertexId> global;
    for (VertexId v = 0; v < nv; ++v) {
      if (in_h[v]) {
        local[v] = static_cast<VertexId>(global.size());
        global.push_back(v);
      }
    }
    std::vector<Edge> h_edges;
    h_edges.reserve(h_edges_global.size());
    for (const auto& [a, b] : h_edges_global) h_edges.push_back(make_edge(local[a], local[b]));
    const AdjacencyGraph h(global.size(), h_edges);
    const DiameterSummary summary = diameter_summary(h);
    const auto dist_h = bfs_distances(h, local[anchor]);
    std::vector<VertexId> u_set;
    for (const auto& [a, b] : summary.pairs) {
      const VertexId ga = global[a], gb = global[b];
      VertexId near;
      if (dist_h[a] != dist_h[b]) near = dist_h[a] < dist_h[b] ? ga : gb;
      else near = g.first_visit(ga) <= g.first_visit(gb) ? ga : gb;
      u_set.push_back(near);
    }
    std::sort(u_set.begin(), u_set.end());
    u_set.erase(std::unique(u_set.begin(), u_set.end()), u_set.end());
    st.horizon = radius;
    st.h_vertices = std::move(global);
    st.U = u_set;
    if (previous && *previous == u_set) {
      st.stabilized = true;
      const auto pick = u_set.size() == 1 ? 0u : rng.below(static_cast<std::uint32_t>(u_set.size()));
      res.outcome.chosen = {u_set[pick]};
      return res;
    }
    previous = std::move(u_set);
  }
  res.outcome.unstable = true;
  return res;
}

GammaResult gamma_finite(const Walk& w, Stream& rng, std::uint32_t max_horizon) {
  const TraceGraph g = build_trace(w);
  const auto terminal = g.find(w.position(w.length()));
  return gamma_finite(g, *terminal, rng, max_horizon);
}

EstimatorSpec EstimatorSpec::parse(const std::string& text) {
  EstimatorSpec spec;
  if (text == "psi") return spec;
  if (text == "gamma") {
    spec.kind = EstimatorKind::Gamma;
    return spec;
  }
  const std::string prefix = "lambda:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string num = text.substr(prefix.size());
    std::size_t k = 0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), k);
    if (ec != std::errc() || ptr != num.data() + num.size() || num.empty())
      throw ConfigError("bad lambda size in '" + text + "'");
    if (k < 2 || k % 2 != 0) throw ConfigError("lambda:K needs an even K >= 2");
    spec.kind = EstimatorKind::Lambda;
    spec.k = k;
    return spec;
  }
  throw ConfigError("unknown estimator '" + text + "' (expected psi, lambda:K or gamma)");
}

std::string EstimatorSpec::to_string() const {
  switch (kind) {
    case EstimatorKind::Psi: return "psi";
    case EstimatorKind::Lambda: return "lambda:" + std::to_string(k);
    case EstimatorKind::Gamma: return "gamma";
  }
  return "psi";
}

EstimatorOutcome localize(const TraceGraph& g, const EstimatorSpec& spec, std::optional<VertexId> truth,
                          Stream& rng, std::optional<VertexId> terminal) {
  EstimatorOutcome out;
  switch (spec.kind) {
    case EstimatorKind::Psi: out = psi(g, rng); break;
    case EstimatorKind::Lambda: out = lambda_k(g, spec.k, rng); break;
    case EstimatorKind::Gamma:
      out = gamma_finite(g, terminal.value_or(latest_vertex(g)), rng, spec.max_horizon).outcome;
      break;
  }
  if (truth && !out.unstable) {
    out.success = std::binary_search(out.chosen.begin(), out.chosen.end(), *truth);
  }
  return out;
}

nlohmann::json to_json(const EstimatorOutcome& o, const TraceGraph& g) {
  nlohmann::json j;
  nlohmann::json chosen = nlohmann::json::array();
  for (VertexId v : o.chosen) {
    const auto c = g.coords(v);
    chosen.push_back(std::vector<Coord>(c.begin(), c.end()));
  }
  j["chosen"] = std::move(chosen);
  if (o.diametric_pair_used) {
    const auto [a, b] = *o.diametric_pair_used;
    const auto ca = g.coords(a), cb = g.coords(b);
    j["diametric_pair"] = {std::vector<Coord>(ca.begin(), ca.end()), std::vector<Coord>(cb.begin(), cb.end())};
  } else {
    j["diametric_pair"] = nullptr;
  }
  j["success"] = o.success ? nlohmann::json(*o.success) : nlohmann::json(nullptr);
  j["unstable"] = o.unstable;
  return j;
}

}  // namespace walklocus
