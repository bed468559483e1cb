#include "doctest.h"

#include "helpers.hpp"
#include "walklocus/error.hpp"
#include "walklocus/graphalg.hpp"
#include "walklocus/trace.hpp"

using namespace walklocus;
using testing_support::walk_of;

TEST_CASE("edge traces of small walks") {
  const TraceGraph path = build_trace(walk_of({{0}, {1}, {2}}), 0, 2);
  CHECK(path.num_vertices() == 3);
  CHECK(path.num_edges() == 2);
  const TraceGraph back = build_trace(walk_of({{0}, {1}, {0}}), 0, 2);
  CHECK(back.num_vertices() == 2);
  CHECK(back.num_edges() == 1);
  const Walk w = generate_walk(3, 100, std::uint64_t{5});
  const TraceGraph single = build_trace(w, 40, 40);
  CHECK(single.num_vertices() == 1);
  CHECK(single.num_edges() == 0);
  CHECK_THROWS_AS(build_trace(w, 50, 40), ConfigError);
  CHECK_THROWS_AS(build_trace(w, 0, 101), ConfigError);
}

TEST_CASE("segment first visits are relative to the segment start") {
  const Walk w = walk_of({{0}, {1}, {2}, {1}, {0}, {-1}});
  const TraceGraph g = build_trace(w, 2, 5);
  CHECK(g.num_vertices() == 4);
  CHECK(g.first_visit(*g.find(LatticePoint(std::vector<Coord>{2}))) == 0);
  CHECK(g.first_visit(*g.find(LatticePoint(std::vector<Coord>{-1}))) == 3);
}

TEST_CASE("vertex traces add lattice-adjacent pairs") {
  const Walk open_square = walk_of({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(build_trace(open_square).num_edges() == 3);
  const TraceGraph vt = build_vertex_trace(open_square);
  CHECK(vt.kind() == TraceKind::Vertex);
  CHECK(vt.num_edges() == 4);
  const Walk line = testing_support::straight_walk(1, 6);
  CHECK(same_embedding(build_trace(line), build_vertex_trace(line)));
  const TraceGraph hook = build_vertex_trace(walk_of({{0, 0}, {1, 0}, {2, 0}, {2, 1}, {1, 1}}));
  const Edge e = make_edge(*hook.find(LatticePoint(std::vector<Coord>{1, 0})),
                           *hook.find(LatticePoint(std::vector<Coord>{1, 1})));
  CHECK(std::binary_search(hook.edges().begin(), hook.edges().end(), e));
}

TEST_CASE("edge trace edges are a subset of vertex trace edges") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Walk w = generate_walk(2, 300, seed);
    const TraceGraph et = build_trace(w), vt = build_vertex_trace(w);
    REQUIRE(et.num_vertices() == vt.num_vertices());
    for (const Edge& e : et.edges()) CHECK(std::binary_search(vt.edges().begin(), vt.edges().end(), e));
  }
}

TEST_CASE("trace size bounds and adjacency of edges") {
  const Walk w = generate_walk(3, 2000, std::uint64_t{17});
  const TraceGraph g = build_trace(w);
  CHECK(g.num_vertices() <= 2001);
  CHECK(g.num_edges() <= 2000);
  for (const auto& [a, b] : g.edges()) CHECK((g.point(a) - g.point(b)).l1_norm() == 1);
  CHECK(g.source_index() == VertexId{0});
}

TEST_CASE("diameter grows by at most one per step") {
  const Walk w = generate_walk(2, 400, std::uint64_t{8});
  std::uint32_t prev = 0;
  for (std::size_t n = 1; n <= w.length(); ++n) {
    const auto d = diameter(build_trace(w, 0, n).graph());
    CHECK(d <= prev + 1);
    prev = d;
  }
}

TEST_CASE("range-stopped walks") {
  const Walk zero = walk_until_range(5, 1, std::uint64_t{1});
  CHECK(zero.length() == 0);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Walk w = walk_until_range(1, 3, seed, std::size_t{100000});
    const TraceGraph g = build_trace(w);
    CHECK(g.num_vertices() == 3);
    CHECK(g.first_visit(*g.find(w.end())) == w.length());
  }
  const Walk big = walk_until_range(5, 1000, std::uint64_t{4});
  CHECK(build_trace(big).num_vertices() == 1000);
  CHECK(big.length() >= 999);
  CHECK_THROWS_AS(walk_until_range(1, 3, std::uint64_t{1}), ConfigError);
  CHECK_THROWS_AS(walk_until_range(1, 50, std::uint64_t{1}, std::size_t{20}), BudgetExceeded);
}

TEST_CASE("reversed walk trace translated by the endpoint equals the original") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Walk w = generate_walk(3, 200, seed);
    std::vector<Step> rev;
    for (std::size_t k = w.length(); k-- > 0;) rev.push_back(-w.steps()[k]);
    const Walk r(LatticePoint::origin(3), StepSequence(3, rev));
    CHECK(same_embedding(translated(build_trace(r), w.end()), build_trace(w)));
  }
}

TEST_CASE("trace JSON round-trip and validation") {
  const TraceGraph g = build_trace(generate_walk(2, 50, std::uint64_t{3}));
  const auto j = to_json(g);
  const TraceGraph back = trace_from_json(j);
  CHECK(same_embedding(g, back));
  CHECK(back.first_visits() == g.first_visits());
  CHECK(back.source_index() == g.source_index());
  auto bad = j;
  bad["edges"].push_back({0, static_cast<std::uint64_t>(g.num_vertices() + 5)});
  CHECK_THROWS_AS(trace_from_json(bad), ConfigError);
  auto vt = to_json(build_vertex_trace(walk_of({{0, 0}, {1, 0}, {1, 1}, {0, 1}})));
  vt["edges"].erase(vt["edges"].begin());
  CHECK_THROWS_AS(trace_from_json(vt), ConfigError);
  nlohmann::json disconnected = {{"dimension", 1}, {"kind", "edge"}, {"vertices", {{0}, {5}}}, {"edges", nlohmann::json::array()}};
  CHECK_THROWS_AS(trace_from_json(disconnected), ConfigError);
}
