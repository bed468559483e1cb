#include "walklocus/trace.hpp"

#include <algorithm>
#include <limits>

#include "walklocus/error.hpp"

namespace walklocus {

std::string to_string(TraceKind kind) { return kind == TraceKind::Edge ? "edge" : "vertex"; }

TraceKind parse_trace_kind(const std::string& text) {
  if (text == "edge" || text == "edge-trace") return TraceKind::Edge;
  if (text == "vertex" || text == "vertex-trace") return TraceKind::Vertex;
  throw ConfigError("unknown trace kind '" + text + "'");
}

TraceGraph::TraceGraph(PointIndex vertices, std::vector<Edge> edges,
                       std::vector<std::uint64_t> first_visit, TraceKind kind,
                       std::optional<VertexId> source_index)
    : vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      first_visit_(std::move(first_visit)),
      kind_(kind),
      source_index_(source_index) {
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  graph_ = AdjacencyGraph(vertices_.size(), edges_);
}

std::optional<VertexId> TraceGraph::find(std::span<const Coord> p) const {
  if (static_cast<int>(p.size()) != dim()) return std::nullopt;
  const auto idx = vertices_.find(p);
  if (idx == PointIndex::kNone) return std::nullopt;
  return idx;
}

std::optional<VertexId> TraceGraph::find(const LatticePoint& p) const { return find(p.coords()); }

TraceGraph build_trace(const Walk& w, std::size_t i, std::size_t j) {
  if (i > j || j > w.length()) {
    throw ConfigError("trace segment [" + std::to_string(i) + "," + std::to_string(j) +
                      "] outside walk of length " + std::to_string(w.length()));
  }
  if (j - i >= std::numeric_limits<VertexId>::max()) throw ConfigError("trace too long");
  PointIndex index(w.dim(), j - i + 1);
  std::vector<std::uint64_t> first_visit;
  std::vector<Edge> edges;
  edges.reserve(j - i);
  VertexId prev = 0;
  for (std::size_t k = i; k <= j; ++k) {
    const auto [idx, inserted] = index.insert(w.position(k));
    if (inserted) first_visit.push_back(k - i);
    if (k > i) edges.push_back(make_edge(prev, idx));
    prev = idx;
  }
  std::optional<VertexId> source;
  const auto s = index.find(w.position(0));
  if (s != PointIndex::kNone) source = s;
  return TraceGraph(std::move(index), std::move(edges), std::move(first_visit), TraceKind::Edge,
                    source);
}

TraceGraph build_vertex_trace(const Walk& w) {
  TraceGraph base = build_trace(w);
  const PointIndex& index = base.index();
  std::vector<Edge> edges;
  for (VertexId v = 0; v < index.size(); ++v) {
    for (int a = 0; a < w.dim(); ++a) {
      const auto u = index.find_shifted(index.point(v), a, 1);
      if (u != PointIndex::kNone) edges.push_back(make_edge(u, v));
    }
  }
  return TraceGraph(index, std::move(edges), base.first_visits(), TraceKind::Vertex,
                    base.source_index());
}

std::size_t default_range_budget(std::size_t target_vertices) { return 10000 * target_vertices; }

Walk walk_until_range(int dim, std::size_t target_vertices, Stream& stream,
                      std::optional<std::size_t> step_budget) {
  if (dim < 1 || dim > 127) throw ConfigError("dimension must be in [1, 127]");
  if (target_vertices < 1) throw ConfigError("range target must be >= 1");
  if (dim <= 2 && !step_budget) {
    throw ConfigError("range-stopped walks in d <= 2 need an explicit step budget");
  }
  const std::size_t budget = step_budget.value_or(default_range_budget(target_vertices));
  PointIndex visited(dim, target_vertices);
  std::vector<Coord> pos(static_cast<std::size_t>(dim), 0);
  visited.insert(pos);
  std::vector<Step> steps;
  const auto choices = static_cast<std::uint32_t>(2 * dim);
  while (visited.size() < target_vertices) {
    if (steps.size() >= budget) {
      throw BudgetExceeded("range target " + std::to_string(target_vertices) + " not reached within " +
                           std::to_string(budget) + " steps");
    }
    const Step s = Step::from_code(stream.below(choices));
    steps.push_back(s);
    pos[s.axis] += s.sign;
    visited.insert(pos);
  }
  return Walk(LatticePoint::origin(dim), StepSequence(dim, std::move(steps)));
}

Walk walk_until_range(int dim, std::size_t target_vertices, std::uint64_t seed,
                      std::optional<std::size_t> step_budget) {
  Stream stream = replicate_stream(seed, 0);
  return walk_until_range(dim, target_vertices, stream, step_budget);
}

TraceGraph translated(const TraceGraph& g, const LatticePoint& offset) {
  if (offset.dim() != g.dim()) throw ConfigError("translation of different dimension");
  PointIndex index(g.dim(), g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) index.insert((g.point(v) + offset).coords());
  return TraceGraph(std::move(index), g.edges(), g.first_visits(), g.kind(), g.source_index());
}

bool same_embedding(const TraceGraph& a, const TraceGraph& b) {
  if (a.dim() != b.dim() || a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges())
    return false;
  std::vector<VertexId> to_b(a.num_vertices());
  for (VertexId v = 0; v < a.num_vertices(); ++v) {
    const auto u = b.find(a.coords(v));
    if (!u) return false;
    to_b[v] = *u;
  }
  std::vector<Edge> mapped;
  mapped.reserve(a.num_edges());
  for (const auto& [x, y] : a.edges()) mapped.push_back(make_edge(to_b[x], to_b[y]));
  std::sort(mapped.begin(), mapped.end());
  return mapped == b.edges();
}

nlohmann::json to_json(const TraceGraph& g) {
  nlohmann::json vertices = nlohmann::json::array();
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const auto c = g.coords(v);
    vertices.push_back(std::vector<Coord>(c.begin(), c.end()));
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [a, b] : g.edges()) edges.push_back({a, b});
  nlohmann::json j;
  j["dimension"] = g.dim();
  j["kind"] = to_string(g.kind());
  j["vertices"] = std::move(vertices);
  j["edges"] = std::move(edges);
  j["first_visit"] = g.first_visits();
  j["source_index"] = g.source_index() ? nlohmann::json(*g.source_index()) : nlohmann::json(nullptr);
  return j;
}

namespace {

bool lattice_adjacent(std::span<const Coord> a, std::span<const Coord> b) {
  Coord dist = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Coord diff = a[i] - b[i];
    dist += diff < 0 ? -diff : diff;
    if (dist > 1) return false;
  }
  return dist == 1;
}

bool connected(const AdjacencyGraph& g) {
  if (g.num_vertices() == 0) return false;
  std::vector<char> seen(g.num_vertices(), 0);
  std::vector<VertexId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    for (VertexId u : g.neighbors(v)) {
      if (!seen[u]) {
        seen[u] = 1;
        ++reached;
        stack.push_back(u);
      }
    }
  }
  return reached == g.num_vertices();
}

}  // namespace

TraceGraph trace_from_json(const nlohmann::json& j) {
  try {
    const int dim = j.at("dimension").get<int>();
    if (dim < 1) throw ConfigError("trace dimension must be >= 1");
    const TraceKind kind = parse_trace_kind(j.at("kind").get<std::string>());
    const auto& vs = j.at("vertices");
    if (!vs.is_array() || vs.empty()) throw ConfigError("trace needs at least one vertex");
    PointIndex index(dim, vs.size());
    for (const auto& v : vs) {
      const auto c = v.get<std::vector<Coord>>();
      if (static_cast<int>(c.size()) != dim) throw ConfigError("vertex of wrong dimension");
      if (!index.insert(c).second) throw ConfigError("duplicate vertex in trace");
    }
    const std::size_t n = index.size();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      const auto pair = e.get<std::vector<std::uint64_t>>();
      if (pair.size() != 2 || pair[0] >= n || pair[1] >= n || pair[0] == pair[1])
        throw ConfigError("malformed edge in trace");
      const auto a = static_cast<VertexId>(pair[0]);
      const auto b = static_cast<VertexId>(pair[1]);
      if (!lattice_adjacent(index.point(a), index.point(b)))
        throw ConfigError("trace edge joins non-adjacent lattice points");
      edges.push_back(make_edge(a, b));
    }
    std::vector<std::uint64_t> first_visit;
    if (j.contains("first_visit") && !j.at("first_visit").is_null()) {
      first_visit = j.at("first_visit").get<std::vector<std::uint64_t>>();
      if (first_visit.size() != n) throw ConfigError("first_visit length differs from vertex count");
      auto sorted = first_visit;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ConfigError("first_visit times must be distinct");
    } else {
      first_visit.resize(n);
      for (std::size_t v = 0; v < n; ++v) first_visit[v] = v;
    }
    std::optional<VertexId> source;
    if (j.contains("source_index") && !j.at("source_index").is_null()) {
      const auto s = j.at("source_index").get<std::uint64_t>();
      if (s >= n) throw ConfigError("source_index out of range");
      source = static_cast<VertexId>(s);
    }
    TraceGraph g(std::move(index), std::move(edges), std::move(first_visit), kind, source);
    if (!connected(g.graph())) throw ConfigError("trace is not connected");
    if (kind == TraceKind::Vertex) {
      std::size_t lattice_pairs = 0;
      for (VertexId v = 0; v < n; ++v)
        for (int a = 0; a < dim; ++a)
          if (g.index().find_shifted(g.coords(v), a, 1) != PointIndex::kNone) ++lattice_pairs;
      if (lattice_pairs != g.num_edges())
        throw ConfigError("vertex trace must contain every lattice-adjacent pair");
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed trace JSON: ") + e.what());
  }
}

}  // namespace walklocus
