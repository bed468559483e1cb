#include "walklocus/cutedges.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "walklocus/analytics.hpp"
#include "walklocus/error.hpp"
#include "walklocus/graphalg.hpp"
#include "walklocus/parallel.hpp"
#include "walklocus/point_index.hpp"
#include "walklocus/trace.hpp"

namespace walklocus {

std::size_t CutEdgeRecord::cut_count() const {
  return static_cast<std::size_t>(std::count(is_cut.begin(), is_cut.end(), 1));
}

std::size_t CutEdgeRecord::induced_cut_count() const {
  return static_cast<std::size_t>(std::count(is_induced_cut.begin(), is_induced_cut.end(), 1));
}

std::size_t CutEdgeRecord::cut_count(std::size_t first, std::size_t last) const {
  last = std::min(last, is_cut.size());
  if (first >= last) return 0;
  return static_cast<std::size_t>(std::count(is_cut.begin() + static_cast<std::ptrdiff_t>(first),
                                             is_cut.begin() + static_cast<std::ptrdiff_t>(last), 1));
}

CutEdgeRecord finite_cut_edges(const Walk& w) {
  const std::size_t n = w.length();
  if (n == 0) throw ConfigError("cut edges need a walk with at least one step");
  PointIndex index(w.dim(), n + 1);
  std::vector<VertexId> vid(n + 1);
  std::vector<std::int64_t> last;
  for (std::size_t t = 0; t <= n; ++t) {
    const auto [v, inserted] = index.insert(w.position(t));
    if (inserted) last.push_back(0);
    vid[t] = v;
    last[v] = static_cast<std::int64_t>(t);
  }
  // Latest visit to any lattice neighbour of each vertex, -1 if none.
  std::vector<std::int64_t> neighbour_last(index.size(), -1);
  for (VertexId v = 0; v < index.size(); ++v) {
    for (int a = 0; a < w.dim(); ++a) {
      for (int sign : {1, -1}) {
        const auto u = index.find_shifted(index.point(v), a, sign);
        if (u != PointIndex::kNone) neighbour_last[v] = std::max(neighbour_last[v], last[u]);
      }
    }
  }
  CutEdgeRecord rec;
  rec.n = n;
  rec.is_cut.assign(n, 0);
  rec.is_induced_cut.assign(n, 0);
  std::int64_t prefix_last = -1;       // max last[X_t], t <= k
  std::int64_t prefix_neighbour = -1;  // max neighbour_last[X_i], i < k
  for (std::size_t k = 0; k < n; ++k) {
    const auto kk = static_cast<std::int64_t>(k);
    prefix_last = std::max(prefix_last, last[vid[k]]);
    const bool cut = prefix_last <= kk;
    rec.is_cut[k] = cut;
    rec.is_induced_cut[k] = cut && prefix_neighbour <= kk && neighbour_last[vid[k]] <= kk + 1;
    prefix_neighbour = std::max(prefix_neighbour, neighbour_last[vid[k]]);
  }
  return rec;
}

namespace {

// ceil with a small tolerance so that products like 0.1 * 10 that land a hair
// above an integer are not rounded up.
std::size_t tolerant_ceil(double x) { return static_cast<std::size_t>(std::ceil(x - 1e-9)); }

}  // namespace

Schedule::Schedule(std::size_t m, double c, std::size_t cover) : m_(m), c_(c) {
  if (m < 1) throw ConfigError("schedule needs m >= 1");
  if (!(c > 0.0 && c <= 2.0)) throw ConfigError("schedule density c must be in (0, 2]");
  const double lambda = c / 8.0;
  a_.push_back(m);
  b_.push_back(m);
  while (b_.back() < cover) {
    const std::size_t n = a_.size();
    const std::size_t next = n == 1 ? tolerant_ceil(lambda * static_cast<double>(m))
                                    : tolerant_ceil(lambda * static_cast<double>(b_[n - 2]));
    a_.push_back(std::max<std::size_t>(next, 1));
    b_.push_back(b_.back() + a_.back());
  }
}

bool Schedule::satisfies_growth_bounds() const {
  const double lam = lambda();
  const double growth = 1.0 + lam / (1.0 + lam);
  for (std::size_t n = 2; n < a_.size(); ++n) {
    const double lower = lam * std::pow(growth, static_cast<double>(n) - 2.0) * static_cast<double>(m_);
    if (static_cast<double>(a_[n]) < lower * (1.0 - 1e-12)) return false;
    if (n + 1 < a_.size() &&
        static_cast<double>(a_[n] + a_[n + 1]) > c_ / 2.0 * static_cast<double>(b_[n - 1]) * (1.0 + 1e-12))
      return false;
  }
  return true;
}

SegmentCounts segment_cut_counts(const CutEdgeRecord& rec, const Schedule& schedule) {
  if (schedule.horizon() < rec.n) {
    throw ConfigError("schedule horizon " + std::to_string(schedule.horizon()) +
                      " is shorter than the walk (" + std::to_string(rec.n) + " edges)");
  }
  SegmentCounts out;
  for (std::size_t blk = 0; blk < schedule.a().size(); ++blk) {
    const std::size_t first = schedule.block_start(blk);
    if (first >= rec.n) break;
    const std::size_t last = schedule.b()[blk];
    const std::size_t count = rec.cut_count(first, last);
    const bool complete = last <= rec.n;
    out.counts.push_back(count);
    out.complete.push_back(complete);
    if (complete && static_cast<double>(count) < schedule.c() / 2.0 * static_cast<double>(schedule.a()[blk]))
      out.event_A = false;
  }
  return out;
}

namespace {

Walk sub_walk(const Walk& w, std::size_t i, std::size_t j) {
  std::vector<Step> steps(w.steps().steps().begin() + static_cast<std::ptrdiff_t>(i),
                          w.steps().steps().begin() + static_cast<std::ptrdiff_t>(j));
  return Walk(w.point(i), StepSequence(w.dim(), std::move(steps)));
}

}  // namespace

EventDiagnostics diagnostics(const Walk& w, std::size_t i, std::size_t j, double delta, double eta,
                             double c_ref) {
  if (i > j || j >= w.length()) {
    throw ConfigError("diagnostics need 0 <= i <= j < walk length");
  }
  EventDiagnostics out;
  out.delta = delta;
  out.eta = eta;
  const Walk seg = sub_walk(w, i, j);
  const double len = static_cast<double>(j - i);
  const TraceGraph g = build_trace(w, i, j);
  const DiameterSummary diam = diameter_summary(g);
  if (j > i) {
    const CutEdgeRecord rec = finite_cut_edges(seg);
    out.cut_count = rec.cut_count();
    // Vertices first visited at time t sit behind the cut edges with index < t.
    std::vector<std::size_t> cuts_before(j - i + 1, 0);
    for (std::size_t k = 0; k < rec.n; ++k) cuts_before[k + 1] = cuts_before[k] + (rec.is_cut[k] ? 1 : 0);
    std::size_t min_sep = std::numeric_limits<std::size_t>::max();
    for (const auto& [u, v] : diam.pairs) {
      const std::size_t cu = cuts_before[g.first_visit(u)];
      const std::size_t cv = cuts_before[g.first_visit(v)];
      min_sep = std::min(min_sep, cu > cv ? cu - cv : cv - cu);
    }
    out.min_separating_cuts = min_sep;
  }
  const double count = static_cast<double>(out.cut_count);
  out.holds_M = count >= c_ref * len * (1.0 - delta) && count <= c_ref * len * (1.0 + delta);
  out.holds_N = static_cast<double>(out.min_separating_cuts) >= (1.0 - eta) * c_ref * len;
  const TraceGraph next = build_trace(w, i, j + 1);
  out.holds_C = diam.diameter < diameter(next.graph());
  return out;
}

bool window_indicator(const Walk& back, const Walk& forward, bool induced) {
  if (back.dim() != forward.dim()) throw ConfigError("window walks differ in dimension");
  if (forward.length() == 0) throw ConfigError("forward window needs at least one step");
  if (back.start() != forward.start()) throw ConfigError("window walks must share their start");
  // Concatenate X_{-T..0} with X_{0..T}; edge {X_0, X_1} then has index T.
  std::vector<Step> steps;
  steps.reserve(back.length() + forward.length());
  for (std::size_t k = back.length(); k-- > 0;) steps.push_back(-back.steps()[k]);
  for (const Step& s : forward.steps().steps()) steps.push_back(s);
  const Walk joined(back.end(), StepSequence(forward.dim(), std::move(steps)));
  const CutEdgeRecord rec = finite_cut_edges(joined);
  const std::size_t k = back.length();
  return induced ? rec.is_induced_cut[k] : rec.is_cut[k];
}

namespace {

// Grows both windows one step at a time and stops at the first violation.
// Step draws match generate_two_sided, so the result equals window_indicator
// on the corresponding walks.
class WindowChecker {
 public:
  explicit WindowChecker(int dim) : dim_(dim), left_(dim, 1024), right_(dim, 1024) {}

  // Plain and induced indicators of one replicate. With `need_plain` false the
  // walk stops at the first induced violation and `plain` is meaningless.
  struct Result {
    bool plain = true;
    bool induced = true;
  };

  Result run(std::size_t window, Stream& stream, bool need_plain, bool need_induced) {
    left_.clear();
    right_.clear();
    Stream fwd = stream.split(1);
    Stream back = stream.split(2);
    const auto choices = static_cast<std::uint32_t>(2 * dim_);
    std::vector<Coord> x(static_cast<std::size_t>(dim_), 0), y(x);
    Result res{true, need_induced};
    left_.insert(y);
    for (std::size_t t = 1; t <= window; ++t) {
      const Step sf = Step::from_code(fwd.below(choices));
      x[sf.axis] += sf.sign;
      if (left_.find(x) != PointIndex::kNone) return {false, false};
      // X_1 may touch X_0 = Y_0; at t = 1 the left side holds only Y_0.
      if (res.induced && t > 1 && touches(left_, x)) {
        res.induced = false;
        if (!need_plain) return res;
      }
      right_.insert(x);
      const Step sb = Step::from_code(back.below(choices));
      y[sb.axis] += sb.sign;
      if (right_.find(y) != PointIndex::kNone) return {false, false};
      if (res.induced && touches(right_, y)) {
        res.induced = false;
        if (!need_plain) return res;
      }
      left_.insert(y);
    }
    return res;
  }

  bool run(std::size_t window, Stream& stream, bool induced) {
    const Result r = run(window, stream, !induced, induced);
    return induced ? r.induced : r.plain;
  }

 private:
  bool touches(const PointIndex& side, const std::vector<Coord>& p) const {
    const std::uint64_t pre = side.prehash(p);
    for (int a = 0; a < dim_; ++a)
      if (side.find_shifted(p, pre, a, 1) != PointIndex::kNone ||
          side.find_shifted(p, pre, a, -1) != PointIndex::kNone)
        return true;
    return false;
  }

  int dim_;
  PointIndex left_;
  PointIndex right_;
};

void validate(const EstimateCConfig& cfg) {
  if (cfg.dim <= 2) throw ConfigError("estimate_c needs d >= 3 (c(d) = 0 for recurrent walks)");
  if (cfg.dim > 127) throw ConfigError("dimension must be <= 127");
  if (cfg.window < 1) throw ConfigError("window must be >= 1");
  if (cfg.replicates < 1) throw ConfigError("replicates must be >= 1");
}

}  // namespace

bool estimate_c_replicate(int dim, std::size_t window, std::uint64_t seed, std::uint64_t replicate,
                          bool induced) {
  WindowChecker checker(dim);
  Stream stream = replicate_stream(seed, replicate);
  return checker.run(window, stream, induced);
}

EstimateReport estimate_c(const EstimateCConfig& cfg, const std::atomic<bool>* stop) {
  validate(cfg);
  std::vector<Outcome> outcomes(cfg.replicates, Outcome::NotRun);
  std::vector<char> paired(cfg.paired ? cfg.replicates : 0, 0), violations(paired.size(), 0);
  const unsigned threads = resolve_threads(cfg.threads);
  // One checker per worker slot keeps the hash tables warm between replicates.
  parallel_for(0, cfg.replicates, threads, [&](std::size_t r) {
    thread_local std::unique_ptr<WindowChecker> checker;
    thread_local int checker_dim = 0;
    if (!checker || checker_dim != cfg.dim) {
      checker = std::make_unique<WindowChecker>(cfg.dim);
      checker_dim = cfg.dim;
    }
    Stream stream = replicate_stream(cfg.seed, r);
    const auto res = checker->run(cfg.window, stream, !cfg.induced || cfg.paired, cfg.induced || cfg.paired);
    outcomes[r] = (cfg.induced ? res.induced : res.plain) ? Outcome::Success : Outcome::Miss;
    if (cfg.paired) {
      paired[r] = res.induced ? 1 : 0;
      violations[r] = res.induced && !res.plain ? 1 : 0;
    }
  }, stop);
  EstimateReport report;
  report.quantity = cfg.induced ? "c-tilde-window" : "c-window";
  for (Outcome o : outcomes) report.tally.add(o);
  report.partial = report.tally.replicates() < cfg.replicates;
  report.config = {{"command", "estimate-c"},
                   {"dimension", cfg.dim},
                   {"window", cfg.window},
                   {"replicates", cfg.replicates},
                   {"seed", cfg.seed},
                   {"induced", cfg.induced},
                   {"paired", cfg.paired}};
  const double bias = window_bias_bound(cfg.dim, cfg.window, cfg.induced);
  report.extra["truncation_bias_bound"] = bias;
  report.extra["estimate_minus_bias"] = report.point() - bias;
  report.extra["note"] = "window estimate is an upper estimate of the two-sided density";
  if (cfg.paired) {
    const auto induced_hits = static_cast<std::uint64_t>(std::count(paired.begin(), paired.end(), 1));
    report.extra["paired_induced_successes"] = induced_hits;
    report.extra["paired_induced_estimate"] =
        report.tally.valid() ? static_cast<double>(induced_hits) / static_cast<double>(report.tally.valid()) : 0.0;
    report.extra["paired_domination_violations"] =
        static_cast<std::uint64_t>(std::count(violations.begin(), violations.end(), 1));
  }
  return report;
}

}  // namespace walklocus
