#include "walklocus/couplings.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "walklocus/error.hpp"
#include "walklocus/estimators.hpp"
#include "walklocus/parallel.hpp"
#include "walklocus/trace.hpp"

namespace walklocus {

namespace {

std::vector<Step> tail(const StepSequence& s) { return {s.steps().begin() + 1, s.steps().end()}; }

Walk walk_from_origin(const StepSequence& s) { return Walk(LatticePoint::origin(s.dim()), s); }

}  // namespace

StepSequence reverse_map_f(const StepSequence& s) {
  if (s.empty()) throw ConfigError("f needs n >= 1");
  std::vector<Step> out;
  out.reserve(s.size());
  for (std::size_t k = s.size(); k-- > 0;) out.push_back(-s[k]);
  return StepSequence(s.dim(), std::move(out));
}

StepSequence reroute_map_g(const StepSequence& s) {
  const std::size_t n = s.size();
  if (n < 3) throw ConfigError("g needs n >= 3");
  std::vector<Step> out = tail(s);
  if (s[0] == -s[1]) out.push_back(-s[n - 1]);
  else if (s[0] == -s[n - 1]) out.push_back(-s[1]);
  else out.push_back(s[0]);
  return StepSequence(s.dim(), std::move(out));
}

StepSequence rotate_map_h(const StepSequence& s) {
  if (s.empty()) return s;
  std::vector<Step> out;
  out.reserve(s.size());
  out.push_back(s[s.size() - 1]);
  out.insert(out.end(), s.steps().begin(), s.steps().end() - 1);
  return StepSequence(s.dim(), std::move(out));
}

StepSequence rotate_map_h_inverse(const StepSequence& s) {
  if (s.empty()) return s;
  std::vector<Step> out = tail(s);
  out.push_back(s[0]);
  return StepSequence(s.dim(), std::move(out));
}

StepSequence reroute_map_g_inverse(const StepSequence& s) {
  return rotate_map_h(reroute_map_g(rotate_map_h(s)));
}

bool check_reverse_identity(const StepSequence& s) {
  const Walk x = walk_from_origin(s);
  const Walk xf = walk_from_origin(reverse_map_f(s));
  return same_embedding(translated(build_trace(xf), x.end()), build_trace(x));
}

std::optional<bool> check_reroute_identity(const StepSequence& s) {
  if (s.size() < 3 || !(s[0] == -s[1])) return std::nullopt;
  const Walk x = walk_from_origin(s);
  const Walk xg = walk_from_origin(reroute_map_g(s));
  return same_embedding(translated(build_trace(xg), x.point(1)), build_trace(x));
}

std::optional<bool> check_distinct_endpoints(const StepSequence& s) {
  const std::size_t n = s.size();
  if (n < 3 || !(s[0] == -s[1])) return std::nullopt;
  std::vector<Coord> mid(static_cast<std::size_t>(s.dim()), 0);
  for (std::size_t k = 2; k + 1 < n; ++k) mid[s[k].axis] += s[k].sign;
  Coord norm = 0;
  for (Coord c : mid) norm += c < 0 ? -c : c;
  if (norm <= 5) return std::nullopt;
  const Walk x = walk_from_origin(s);
  const Walk xg = walk_from_origin(reroute_map_g(s));
  const std::set<LatticePoint> pts{LatticePoint::origin(s.dim()), x.end(), x.point(1), x.point(1) + xg.end()};
  return pts.size() == 4;
}

std::vector<LatticePoint> default_amnesia_starts(int dim, std::size_t k) {
  if (dim < 1 || dim > 2) throw ConfigError("amnesia starts are defined for d in {1, 2}");
  std::vector<LatticePoint> out;
  for (Coord radius = 0; out.size() < k; radius += 2) {
    std::vector<LatticePoint> shell;
    if (dim == 1) {
      shell.emplace_back(std::vector<Coord>{radius});
      if (radius > 0) shell.emplace_back(std::vector<Coord>{-radius});
    } else {
      for (Coord x = -radius; x <= radius; ++x) {
        const Coord rest = radius - (x < 0 ? -x : x);
        shell.emplace_back(std::vector<Coord>{x, rest});
        if (rest != 0) shell.emplace_back(std::vector<Coord>{x, -rest});
      }
      std::sort(shell.begin(), shell.end());
    }
    for (auto& p : shell) {
      if (out.size() == k) break;
      out.push_back(std::move(p));
    }
  }
  return out;
}

nlohmann::json CouplingReport::to_json() const {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["quantity"] = "amnesia-coupling";
  j["k"] = k;
  j["n"] = n;
  j["t1"] = t1;
  j["t2"] = t2;
  const auto reps = traces_equal.replicates();
  j["replicates"] = reps;
  j["traces_equal_count"] = traces_equal.successes;
  j["traces_equal_frequency"] = reps ? static_cast<double>(traces_equal.successes) / static_cast<double>(reps) : 0.0;
  if (reps) {
    const Interval ci = wilson_interval(traces_equal.successes, reps);
    j["traces_equal_interval"] = {{"level", 0.95}, {"method", "wilson"}, {"lo", ci.lo}, {"hi", ci.hi}};
  }
  j["coupled_by_t1"] = coupled_by_t1;
  j["covered_by_t2"] = covered_by_t2;
  j["all_coupled_within_horizon"] = all_coupled;
  j["all_coupled_by"] = max_coupling_time ? nlohmann::json(*max_coupling_time) : nlohmann::json(nullptr);
  j["psi_success_average"] = psi_success_average;
  j["psi_success_stderr"] = psi_success_stderr;
  j["psi_bound_3_over_k"] = k ? 3.0 / static_cast<double>(k) : 0.0;
  j["partial"] = partial;
  j["config"] = config;
  j["config_digest"] = config_digest(config);
  j["rng"] = std::string(kRngName);
  j["seed_rule"] = std::string(kSeedRule);
  return j;
}

namespace {

struct ReplicateResult {
  bool ran = false;
  bool equal = false;
  bool coupled_t1 = false;
  bool covered = false;
  bool all_coupled = false;
  std::uint64_t coupling_time = 0;
  double psi_average = 0.0;
};

Walk coupled_walk(const LatticePoint& start, const Walk& x, Stream& stream, std::uint64_t& met_at, bool& met) {
  const std::size_t n = x.length();
  const auto choices = static_cast<std::uint32_t>(2 * x.dim());
  std::vector<Step> steps;
  steps.reserve(n);
  std::vector<Coord> pos(start.coords().begin(), start.coords().end());
  met = std::equal(pos.begin(), pos.end(), x.position(0).begin());
  met_at = 0;
  for (std::size_t t = 0; t < n; ++t) {
    Step s = met ? x.steps()[t] : Step::from_code(stream.below(choices));
    steps.push_back(s);
    pos[s.axis] += s.sign;
    if (!met && std::equal(pos.begin(), pos.end(), x.position(t + 1).begin())) {
      met = true;
      met_at = t + 1;
    }
  }
  return Walk(start, StepSequence(x.dim(), std::move(steps)));
}

// Every edge traversed by any walk before t1 is traversed by X during (t1, t1+t2].
bool covered(const Walk& x, const std::vector<Walk>& walks, std::size_t t1, std::size_t t2) {
  const std::size_t hi = std::min(x.length(), t1 + t2);
  if (t1 >= hi) return false;
  const TraceGraph later = build_trace(x, t1, hi);
  auto contains = [&](const Walk& w) {
    for (std::size_t t = 0; t < std::min(t1, w.length()); ++t) {
      const auto a = later.find(w.position(t));
      const auto b = later.find(w.position(t + 1));
      if (!a || !b) return false;
      const Edge e = make_edge(*a, *b);
      if (!std::binary_search(later.edges().begin(), later.edges().end(), e)) return false;
    }
    return true;
  };
  if (!contains(x)) return false;
  for (const Walk& w : walks)
    if (!contains(w)) return false;
  return true;
}

}  // namespace

CouplingReport amnesia_experiment(const AmnesiaConfig& cfg, const std::atomic<bool>* stop) {
  if (cfg.dim >= 3 || cfg.dim < 1) throw ConfigError("amnesia experiment needs d in {1, 2}");
  if (cfg.walks < 1) throw ConfigError("need at least one coupled walk");
  if (cfg.horizon < 1) throw ConfigError("horizon must be >= 1");
  if (cfg.replicates < 1) throw ConfigError("replicates must be >= 1");
  const std::vector<LatticePoint> starts =
      cfg.starts.empty() ? default_amnesia_starts(cfg.dim, cfg.walks) : cfg.starts;
  if (starts.size() != cfg.walks) throw ConfigError("number of starts differs from the walk count");
  for (const auto& s : starts) {
    if (s.dim() != cfg.dim) throw ConfigError("start point of wrong dimension");
    if (s.l1_norm() % 2 != 0) throw ConfigError("start " + s.to_string() + " has odd parity");
  }
  if (std::set<LatticePoint>(starts.begin(), starts.end()).size() != starts.size())
    throw ConfigError("start points must be distinct");
  const std::size_t t1 = cfg.t1.value_or(cfg.horizon / 2);
  const std::size_t t2 = cfg.t2.value_or(cfg.horizon - std::min(t1, cfg.horizon));

  std::vector<ReplicateResult> results(cfg.replicates);
  parallel_for(0, cfg.replicates, resolve_threads(cfg.threads), [&](std::size_t r) {
    Stream stream = replicate_stream(cfg.seed, r);
    Stream main = stream.split(1);
    const Walk x = generate_walk(cfg.dim, cfg.horizon, main);
    const TraceGraph tx = build_trace(x);
    ReplicateResult res;
    res.ran = true;
    res.equal = true;
    res.coupled_t1 = true;
    res.all_coupled = true;
    std::vector<Walk> walks;
    walks.reserve(cfg.walks);
    std::size_t successes = 0;
    Stream estimator = stream.split(2);
    for (std::size_t i = 0; i < cfg.walks; ++i) {
      Stream own = stream.split(3 + i);
      std::uint64_t met_at = 0;
      bool met = false;
      walks.push_back(coupled_walk(starts[i], x, own, met_at, met));
      if (!met) res.all_coupled = false;
      else res.coupling_time = std::max(res.coupling_time, met_at);
      if (!met || met_at > t1) res.coupled_t1 = false;
      const TraceGraph ti = build_trace(walks.back());
      if (!same_embedding(ti, tx)) res.equal = false;
      Stream est = estimator.split(i);
      const auto out = psi(ti, est);
      if (ti.point(out.chosen.front()) == starts[i]) ++successes;
    }
    res.covered = covered(x, walks, t1, t2);
    res.psi_average = static_cast<double>(successes) / static_cast<double>(cfg.walks);
    results[r] = res;
  }, stop);

  CouplingReport rep;
  rep.k = cfg.walks;
  rep.n = cfg.horizon;
  rep.t1 = t1;
  rep.t2 = t2;
  double sum = 0, sum_sq = 0;
  std::uint64_t ran = 0;
  for (const auto& res : results) {
    if (!res.ran) continue;
    ++ran;
    rep.traces_equal.add(res.equal ? Outcome::Success : Outcome::Miss);
    rep.coupled_by_t1 += res.coupled_t1;
    rep.covered_by_t2 += res.covered;
    if (res.all_coupled) {
      ++rep.all_coupled;
      rep.max_coupling_time = std::max(rep.max_coupling_time.value_or(0), res.coupling_time);
    }
    sum += res.psi_average;
    sum_sq += res.psi_average * res.psi_average;
  }
  rep.partial = ran < cfg.replicates;
  if (ran > 0) {
    const double n = static_cast<double>(ran);
    rep.psi_success_average = sum / n;
    const double var = ran > 1 ? std::max(0.0, (sum_sq - sum * sum / n) / (n - 1)) : 0.0;
    rep.psi_success_stderr = std::sqrt(var / n);
  }
  nlohmann::json start_list = nlohmann::json::array();
  for (const auto& s : starts) start_list.push_back(s.to_string());
  rep.config = {{"command", "amnesia"}, {"dimension", cfg.dim}, {"walks", cfg.walks},
                {"horizon", cfg.horizon}, {"t1", t1}, {"t2", t2}, {"starts", start_list},
                {"replicates", cfg.replicates}, {"seed", cfg.seed}};
  return rep;
}

}  // namespace walklocus
