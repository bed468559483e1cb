#include "doctest.h"

#include "helpers.hpp"
#include "walklocus/analytics.hpp"
#include "walklocus/cutedges.hpp"
#include "walklocus/error.hpp"
#include "walklocus/graphalg.hpp"
#include "walklocus/trace.hpp"

using namespace walklocus;
using testing_support::walk_of;

namespace {

// Quadratic reference: compares every prefix point with every suffix point.
struct BruteCuts {
  std::vector<char> cut, induced;
};

BruteCuts brute_cuts(const Walk& w) {
  const std::size_t n = w.length();
  BruteCuts out{std::vector<char>(n, 1), std::vector<char>(n, 1)};
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i <= k; ++i) {
      for (std::size_t j = k + 1; j <= n; ++j) {
        const Coord dist = (w.point(i) - w.point(j)).l1_norm();
        if (dist == 0) out.cut[k] = out.induced[k] = 0;
        if (dist == 1 && !(i == k && j == k + 1)) out.induced[k] = 0;
      }
    }
  }
  return out;
}

Walk reversed(const Walk& w) {
  std::vector<Step> rev;
  for (std::size_t k = w.length(); k-- > 0;) rev.push_back(-w.steps()[k]);
  return Walk(w.end(), StepSequence(w.dim(), rev));
}

}  // namespace

TEST_CASE("cut edge examples") {
  const CutEdgeRecord line = finite_cut_edges(testing_support::straight_walk(1, 2));
  CHECK(line.is_cut == std::vector<char>{1, 1});
  CHECK(line.is_induced_cut == std::vector<char>{1, 1});
  CHECK(finite_cut_edges(walk_of({{0}, {1}, {0}})).is_cut == std::vector<char>{0, 0});
  const CutEdgeRecord hook = finite_cut_edges(walk_of({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  CHECK(hook.is_cut[1] == 1);
  CHECK(hook.is_induced_cut[1] == 0);
  CHECK_THROWS_AS(finite_cut_edges(testing_support::straight_walk(2, 0)), ConfigError);
}

TEST_CASE("linear cut detection matches the quadratic reference") {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    const int d = 1 + static_cast<int>(seed % 5);
    const Walk w = generate_walk(d, 120, seed);
    const CutEdgeRecord rec = finite_cut_edges(w);
    const BruteCuts ref = brute_cuts(w);
    CHECK(rec.is_cut == ref.cut);
    CHECK(rec.is_induced_cut == ref.induced);
  }
}

TEST_CASE("cut edges are bridges and bound the endpoint distance") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int d = 2 + static_cast<int>(seed % 4);
    const Walk w = generate_walk(d, 200, seed);
    const CutEdgeRecord rec = finite_cut_edges(w);
    const TraceGraph et = build_trace(w), vt = build_vertex_trace(w);
    for (std::size_t k = 0; k < rec.n; ++k) {
      CHECK((!rec.is_induced_cut[k] || rec.is_cut[k]));
      if (rec.is_cut[k]) {
        const std::vector<Edge> e = {make_edge(*et.find(w.position(k)), *et.find(w.position(k + 1)))};
        CHECK(residual_components(et, e).size() == 2);
      }
      if (rec.is_induced_cut[k]) {
        const std::vector<Edge> e = {make_edge(*vt.find(w.position(k)), *vt.find(w.position(k + 1)))};
        CHECK(residual_components(vt, e).size() == 2);
      }
    }
    const auto dist = bfs_distances(et, *et.find(w.position(0)))[*et.find(w.end())];
    CHECK(dist >= rec.cut_count());
  }
}

TEST_CASE("reversal mirrors cut indices") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Walk w = generate_walk(3, 300, seed);
    const CutEdgeRecord a = finite_cut_edges(w), b = finite_cut_edges(reversed(w));
    for (std::size_t k = 0; k < a.n; ++k) {
      CHECK(a.is_cut[k] == b.is_cut[a.n - 1 - k]);
      CHECK(a.is_induced_cut[k] == b.is_induced_cut[a.n - 1 - k]);
    }
  }
}

TEST_CASE("schedule recurrence") {
  const Schedule s(10, 0.8, 16);
  CHECK(s.lambda() == doctest::Approx(0.1));
  CHECK(s.a() == std::vector<std::size_t>{10, 1, 1, 2, 2});
  CHECK(s.b() == std::vector<std::size_t>{10, 11, 12, 14, 16});
  CHECK(s.block_start(0) == 0);
  CHECK(s.block_start(3) == 12);
  const Schedule longer(10, 0.8, 1000);
  CHECK(longer.a()[5] == 2);
  CHECK_THROWS_AS(Schedule(0, 0.5, 10), ConfigError);
  CHECK_THROWS_AS(Schedule(10, 0.0, 10), ConfigError);
}

TEST_CASE("schedule growth inequalities hold when m >= 8/c") {
  for (double c : {0.3, 0.5, 0.8, 1.0, 1.7}) {
    for (std::size_t mult : {1, 2, 4, 16}) {
      const auto m = static_cast<std::size_t>(std::ceil(8.0 / c)) * mult;
      CHECK(Schedule(m, c, 1u << 22).satisfies_growth_bounds());
    }
  }
}

TEST_CASE("segment counts") {
  const Walk line = testing_support::straight_walk(1, 40);
  const CutEdgeRecord rec = finite_cut_edges(line);
  const Schedule s(10, 0.8, 40);
  for (double c : {0.8, 2.0}) {
    const Schedule sc(10, c, 40);
    const SegmentCounts counts = segment_cut_counts(rec, sc);
    for (std::size_t blk = 0; blk < counts.counts.size(); ++blk) {
      const std::size_t len = std::min<std::size_t>(sc.b()[blk], 40) - sc.block_start(blk);
      CHECK(counts.counts[blk] == len);
    }
    CHECK(counts.event_A);
  }
  std::vector<std::vector<Coord>> zigzag;
  for (int t = 0; t <= 40; ++t) zigzag.push_back({t % 2});
  const SegmentCounts none = segment_cut_counts(finite_cut_edges(walk_of(zigzag)), s);
  CHECK_FALSE(none.event_A);
  CHECK_THROWS_AS(segment_cut_counts(rec, Schedule(10, 0.8, 20)), ConfigError);
}

TEST_CASE("event diagnostics") {
  const Walk line = testing_support::straight_walk(2, 12);
  const EventDiagnostics all = diagnostics(line, 0, 10, 0.1, 0.1, 1.0);
  CHECK(all.cut_count == 10);
  CHECK(all.holds_M);
  CHECK(all.holds_N);
  CHECK(all.holds_C);
  CHECK_FALSE(diagnostics(line, 0, 10, 0.1, 0.1, 2.0).holds_M);
  const EventDiagnostics back = diagnostics(walk_of({{0}, {1}, {0}}), 0, 1, 0.1, 0.1, 1.0);
  CHECK_FALSE(back.holds_C);
  CHECK_THROWS_AS(diagnostics(line, 0, 12, 0.1, 0.1, 1.0), ConfigError);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Walk w = generate_walk(4, 400, seed);
    const EventDiagnostics dg = diagnostics(w, 50, 350, 0.2, 0.2, 0.5);
    const std::size_t ref = finite_cut_edges(walk_of([&] {
      std::vector<std::vector<Coord>> pts;
      for (std::size_t t = 50; t <= 350; ++t) pts.emplace_back(w.position(t).begin(), w.position(t).end());
      return pts;
    }())).cut_count();
    CHECK(dg.cut_count == ref);
    CHECK(dg.min_separating_cuts <= diameter(build_trace(w, 50, 350).graph()));
    const double lo = 0.5 * 300 * 0.8, hi = 0.5 * 300 * 1.2;
    CHECK(dg.holds_M == (dg.cut_count >= lo && dg.cut_count <= hi));
    const bool grows = diameter(build_trace(w, 50, 350).graph()) < diameter(build_trace(w, 50, 351).graph());
    CHECK(dg.holds_C == grows);
  }
}

TEST_CASE("separating cut count equals the cut edges on a diametrical path") {
  // Every cut edge between u and v lies on every u-v path, so counting them
  // on one shortest path from the BFS parent tree gives the same number.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Walk w = generate_walk(3, 150, seed);
    const EventDiagnostics dg = diagnostics(w, 0, 149, 0.1, 0.1, 0.5);
    const TraceGraph g = build_trace(w, 0, 149);
    const DiameterSummary s = diameter_summary(g);
    const CutEdgeRecord rec = finite_cut_edges(Walk(w.start(), StepSequence(3, {w.steps().steps().begin(), w.steps().steps().begin() + 149})));
    std::vector<Edge> cut_edges;
    for (std::size_t k = 0; k < rec.n; ++k)
      if (rec.is_cut[k]) cut_edges.push_back(make_edge(*g.find(w.position(k)), *g.find(w.position(k + 1))));
    std::sort(cut_edges.begin(), cut_edges.end());
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (const auto& [u, v] : s.pairs) {
      const auto du = bfs_distances(g, u);
      std::size_t on_path = 0;
      VertexId x = v;
      while (x != u) {
        for (VertexId y : g.graph().neighbors(x)) {
          if (du[y] + 1 == du[x]) {
            if (std::binary_search(cut_edges.begin(), cut_edges.end(), make_edge(x, y))) ++on_path;
            x = y;
            break;
          }
        }
      }
      best = std::min(best, on_path);
    }
    CHECK(dg.min_separating_cuts == best);
  }
}

TEST_CASE("window indicator") {
  const Walk fwd = testing_support::straight_walk(2, 5);
  const Walk back = walk_of({{0, 0}, {-1, 0}, {-2, 0}});
  CHECK(window_indicator(back, fwd, false));
  CHECK(window_indicator(back, fwd, true));
  const Walk back_touch = walk_of({{0, 0}, {0, 1}, {1, 1}});
  CHECK(window_indicator(back_touch, fwd, false));
  CHECK_FALSE(window_indicator(back_touch, fwd, true));
  const Walk back_hit = walk_of({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  CHECK_FALSE(window_indicator(back_hit, fwd, false));
}

TEST_CASE("lazy window check equals the materialized indicator") {
  for (int d : {2, 3, 5}) {
    for (std::uint64_t r = 0; r < 200; ++r) {
      const std::size_t T = 64;
      const Stream base = replicate_stream(9, r);
      Stream f = base.split(1), b = base.split(2);
      // The lazy check interleaves draws, but each side uses its own stream.
      const Walk forward = generate_walk(d, T, f), backward = generate_walk(d, T, b);
      for (bool induced : {false, true}) {
        CHECK(estimate_c_replicate(d, T, 9, r, induced) == window_indicator(backward, forward, induced));
      }
      CHECK((!estimate_c_replicate(d, T, 9, r, true) || estimate_c_replicate(d, T, 9, r, false)));
    }
  }
}

TEST_CASE("estimate_c report") {
  EstimateCConfig cfg;
  cfg.dim = 5;
  cfg.window = 256;
  cfg.replicates = 400;
  cfg.seed = 3;
  cfg.threads = 2;
  const EstimateReport a = estimate_c(cfg);
  cfg.threads = 1;
  const EstimateReport b = estimate_c(cfg);
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK(a.quantity == "c-window");
  CHECK(a.tally.replicates() == 400);
  CHECK(a.point() > 0.0);
  CHECK(a.point() < 1.0);
  CHECK(a.extra.at("truncation_bias_bound").get<double>() == doctest::Approx(window_bias_bound(5, 256, false)));
  cfg.induced = true;
  const EstimateReport c = estimate_c(cfg);
  CHECK(c.quantity == "c-tilde-window");
  CHECK(c.tally.successes <= b.tally.successes);
  cfg.induced = false;
  cfg.paired = true;
  const EstimateReport p = estimate_c(cfg);
  CHECK(p.tally == b.tally);
  CHECK(p.extra.at("paired_induced_successes").get<std::uint64_t>() == c.tally.successes);
  CHECK(p.extra.at("paired_domination_violations").get<std::uint64_t>() == 0);
}
