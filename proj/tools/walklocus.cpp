#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "walklocus/analytics.hpp"
#include "walklocus/couplings.hpp"
#include "walklocus/cutedges.hpp"
#include "walklocus/error.hpp"
#include "walklocus/estimators.hpp"
#include "walklocus/harness.hpp"
#include "walklocus/parallel.hpp"
#include "walklocus/trace.hpp"

using namespace walklocus;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitFailures = 3;
constexpr int kExitInterrupted = 130;

std::atomic<bool> g_stop{false};

extern "C" void on_sigint(int) { g_stop = true; }

struct Globals {
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string format = "json";
  std::string out;
  bool timing = false;
  double max_failure_rate = 1.0;
};

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw ConfigError("cannot open output file '" + g.out + "'");
  f << text;
}

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string report_csv(const EstimateReport& r) {
  std::ostringstream os;
  const Interval ci = r.interval();
  os << "quantity,replicates,successes,misses,unstable,budget_exhausted,estimate,lo,hi,partial,config_digest\n";
  os << r.quantity << ',' << r.tally.replicates() << ',' << r.tally.successes << ',' << r.tally.misses << ','
     << r.tally.unstable << ',' << r.tally.budget_exhausted << ',' << r.point() << ',' << ci.lo << ','
     << ci.hi << ',' << (r.partial ? 1 : 0) << ',' << config_digest(r.config) << '\n';
  return os.str();
}

// Returns the exit code for a finished report.
int finish_report(const Globals& g, EstimateReport r, const Timer& timer) {
  if (g_stop) r.partial = true;
  if (g.timing) r.wall_clock_seconds = timer.seconds();
  emit(g, g.format == "csv" ? report_csv(r) : r.to_json().dump(2) + "\n");
  if (g_stop) return kExitInterrupted;
  const auto reps = r.tally.replicates();
  if (reps > 0 && static_cast<double>(r.tally.failures()) / static_cast<double>(reps) > g.max_failure_rate)
    return kExitFailures;
  return 0;
}

// Truncated decimal expansion with `digits` fractional digits.
std::string decimal_string(const Rational& q, unsigned digits) {
  BigInt num = boost::multiprecision::numerator(q), den = boost::multiprecision::denominator(q);
  std::string sign;
  if (num < 0) {
    sign = "-";
    num = -num;
  }
  BigInt scale = 1;
  for (unsigned i = 0; i < digits; ++i) scale *= 10;
  const BigInt scaled = num * scale / den;
  std::string s = scaled.str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  s.insert(s.size() - digits, ".");
  return sign + s;
}

json rational_json(const Rational& q) {
  const Envelope e = to_envelope(q);
  return {{"numerator", boost::multiprecision::numerator(q).str()},
          {"denominator", boost::multiprecision::denominator(q).str()},
          {"decimal", decimal_string(q, 40)},
          {"lower", e.lower},
          {"upper", e.upper}};
}

json exact_value_json(const ExactValue& v) {
  json j = {{"lower", v.bounds.lower},
            {"upper", v.bounds.upper},
            {"width", v.bounds.width()},
            {"verdict", to_string(v.verdict)},
            {"provenance", v.provenance}};
  if (v.exact) j["exact"] = rational_json(*v.exact);
  return j;
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> parse_shard(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("shard must look like BEGIN:END");
  try {
    return std::make_pair(std::stoull(text.substr(0, colon)), std::stoull(text.substr(colon + 1)));
  } catch (const std::exception&) {
    throw ConfigError("shard must look like BEGIN:END");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Source localisation experiments for simple random walk traces on Z^d"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0: WALKLOCUS_THREADS or all cores)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--out", g.out, "Write output to PATH instead of stdout");
  app.add_flag("--timing", g.timing, "Record wall-clock seconds in reports");
  app.add_option("--max-failure-rate", g.max_failure_rate,
                 "Exit with status 3 when unstable plus budget failures exceed this fraction")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();

  // walk
  auto* walk = app.add_subcommand("walk", "Generate a walk and print its trace");
  int walk_dim = 2;
  std::size_t walk_steps = 100;
  std::size_t walk_range = 0;
  std::optional<std::size_t> walk_budget;
  std::string walk_kind = "edge";
  walk->add_option("--dim", walk_dim, "Dimension")->capture_default_str();
  auto* steps_opt = walk->add_option("--steps", walk_steps, "Number of steps")->capture_default_str();
  walk->add_option("--range", walk_range, "Stop when this many distinct vertices are visited")->excludes(steps_opt);
  walk->add_option("--range-budget", walk_budget, "Step cap for --range (required in d <= 2)");
  walk->add_option("--kind", walk_kind, "Trace kind")->check(CLI::IsMember({"edge", "vertex"}))->capture_default_str();

  // cutedges
  auto* cut = app.add_subcommand("cutedges", "Per-edge cut and induced-cut indicators of one walk");
  int cut_dim = 5;
  std::size_t cut_steps = 1000;
  bool cut_induced = false;
  std::size_t cut_m = 0;
  double cut_c = 0.0;
  cut->add_option("--dim", cut_dim, "Dimension")->capture_default_str();
  cut->add_option("--steps", cut_steps, "Number of steps")->capture_default_str();
  cut->add_flag("--induced", cut_induced, "List only induced cut edges");
  cut->add_option("--block-m", cut_m, "Block schedule base size; adds per-block counts to JSON output");
  cut->add_option("--c-ref", cut_c, "Reference cut density for the block schedule");

  // estimate-c
  auto* est = app.add_subcommand("estimate-c", "Monte Carlo estimate of the cut-edge density");
  EstimateCConfig ecfg;
  est->add_option("--dim", ecfg.dim, "Dimension")->capture_default_str();
  est->add_option("--window", ecfg.window, "Window length T per side")->capture_default_str();
  est->add_option("--reps", ecfg.replicates, "Replicates")->capture_default_str();
  est->add_flag("--induced", ecfg.induced, "Estimate the induced density");
  est->add_flag("--paired", ecfg.paired, "Also evaluate the induced indicator on every replicate");

  // localize
  auto* loc = app.add_subcommand("localize", "Run an estimator on a trace read from JSON");
  std::string loc_input, loc_estimator = "psi", loc_truth, loc_terminal;
  loc->add_option("--input", loc_input, "Trace JSON file")->required();
  loc->add_option("--estimator", loc_estimator, "psi, lambda:K or gamma")->capture_default_str();
  loc->add_option("--truth", loc_truth, "Source point as \"x,y,...\"");
  loc->add_option("--terminal", loc_terminal, "Terminal point for gamma (default: last discovered vertex)");
  std::uint32_t loc_horizon = kDefaultMaxHorizon;
  loc->add_option("--max-horizon", loc_horizon, "Largest ball radius tried by gamma")->capture_default_str();

  // experiment
  auto* exp = app.add_subcommand("experiment", "Replicated estimator success experiment");
  ExperimentConfig xcfg;
  std::string x_trace = "edge", x_estimator = "psi", x_shard, x_quantity = "localize";
  exp->add_option("--dim", xcfg.dim, "Dimension")->capture_default_str();
  exp->add_option("--length", xcfg.length, "Walk length, or vertex target for range traces")->capture_default_str();
  exp->add_option("--trace", x_trace, "edge, vertex or range")->capture_default_str();
  exp->add_option("--estimator", x_estimator, "psi, lambda:K or gamma")->capture_default_str();
  exp->add_option("--range-budget", xcfg.range_budget, "Step cap for range traces");
  exp->add_option("--reps", xcfg.replicates, "Replicates")->capture_default_str();
  exp->add_option("--shard", x_shard, "Run only replicates BEGIN:END");
  exp->add_option("--quantity", x_quantity, "localize or diameter-growth")
      ->check(CLI::IsMember({"localize", "diameter-growth"}))
      ->capture_default_str();

  // exact
  auto* exact = app.add_subcommand("exact", "Exact return probabilities and series bounds");
  exact->require_subcommand(1);
  exact->fallthrough();
  auto* ex_ret = exact->add_subcommand("return-prob", "P(X_2n = 0) as an exact rational");
  int ex_dim = 5;
  unsigned ex_n = 1, ex_k = 1, ex_cutoff = kDefaultCutoff;
  ex_ret->add_option("--dim", ex_dim, "Dimension")->capture_default_str();
  ex_ret->add_option("--n", ex_n, "Half length")->capture_default_str();
  auto* ex_tail = exact->add_subcommand("tail", "Bounds on sum_{n>=k} n P(X_2n = 0)");
  ex_tail->add_option("--dim", ex_dim, "Dimension")->capture_default_str();
  ex_tail->add_option("--k", ex_k, "First index")->capture_default_str();
  ex_tail->add_option("--cutoff", ex_cutoff, "Last exactly summed index")->capture_default_str();
  auto* ex_bounds = exact->add_subcommand("bounds", "Lower bounds on the cut densities");
  ex_bounds->add_option("--dim", ex_dim, "Dimension")->capture_default_str();
  ex_bounds->add_option("--cutoff", ex_cutoff, "Last exactly summed index")->capture_default_str();

  // amnesia
  auto* amn = app.add_subcommand("amnesia", "Meet-then-follow coupling of several walks");
  AmnesiaConfig acfg;
  std::vector<std::string> a_starts;
  amn->add_option("--dim", acfg.dim, "Dimension (1 or 2)")->capture_default_str();
  amn->add_option("--walks", acfg.walks, "Number of coupled walks k")->capture_default_str();
  amn->add_option("--horizon", acfg.horizon, "Horizon n")->capture_default_str();
  amn->add_option("--t1", acfg.t1, "Coupling budget (default n/2)");
  amn->add_option("--t2", acfg.t2, "Covering budget (default n - t1)");
  amn->add_option("--start", a_starts, "Starting point \"x,y\" (repeat k times)");
  amn->add_option("--reps", acfg.replicates, "Replicates")->capture_default_str();

  // report
  auto* rep = app.add_subcommand("report", "Merge shard reports of one experiment");
  std::vector<std::string> rep_files;
  rep->add_option("files", rep_files, "Report JSON files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  std::signal(SIGINT, on_sigint);
  const Timer timer;
  try {
    if (*walk) {
      Stream stream = replicate_stream(g.seed, 0);
      const Walk w = walk_range > 0 ? walk_until_range(walk_dim, walk_range, stream, walk_budget)
                                    : generate_walk(walk_dim, walk_steps, stream);
      if (g.format == "csv") {
        std::ostringstream os;
        os << 't';
        for (int a = 0; a < w.dim(); ++a) os << ",x" << a + 1;
        os << '\n';
        for (std::size_t t = 0; t <= w.length(); ++t) {
          os << t;
          for (Coord c : w.position(t)) os << ',' << c;
          os << '\n';
        }
        emit(g, os.str());
      } else {
        const TraceGraph tg = walk_kind == "vertex" ? build_vertex_trace(w) : build_trace(w);
        json j = to_json(tg);
        j["steps"] = w.length();
        j["seed"] = g.seed;
        emit(g, j.dump() + "\n");
      }
      return 0;
    }

    if (*cut) {
      Stream stream = replicate_stream(g.seed, 0);
      const Walk w = generate_walk(cut_dim, cut_steps, stream);
      const CutEdgeRecord rec = finite_cut_edges(w);
      if (g.format == "csv") {
        std::ostringstream os;
        os << "index,is_cut,is_induced_cut\n";
        for (std::size_t k = 0; k < rec.n; ++k) {
          if (cut_induced && !rec.is_induced_cut[k]) continue;
          os << k << ',' << int(rec.is_cut[k]) << ',' << int(rec.is_induced_cut[k]) << '\n';
        }
        emit(g, os.str());
        return 0;
      }
      json j = {{"schema", kSchema}, {"dimension", cut_dim}, {"steps", rec.n}, {"seed", g.seed},
                {"cut_count", rec.cut_count()}, {"induced_cut_count", rec.induced_cut_count()}};
      std::vector<std::size_t> listed;
      for (std::size_t k = 0; k < rec.n; ++k)
        if (cut_induced ? rec.is_induced_cut[k] : rec.is_cut[k]) listed.push_back(k);
      j[cut_induced ? "induced_cut_edges" : "cut_edges"] = listed;
      if (cut_m > 0) {
        if (cut_c <= 0.0) throw ConfigError("--block-m needs --c-ref");
        const Schedule s(cut_m, cut_c, rec.n);
        const SegmentCounts sc = segment_cut_counts(rec, s);
        j["schedule"] = {{"m", cut_m}, {"c", cut_c}, {"a", s.a()}, {"b", s.b()},
                         {"counts", sc.counts}, {"event_A", sc.event_A}};
      }
      emit(g, j.dump(2) + "\n");
      return 0;
    }

    if (*est) {
      ecfg.seed = g.seed;
      ecfg.threads = resolve_threads(g.threads);
      return finish_report(g, estimate_c(ecfg, &g_stop), timer);
    }

    if (*loc) {
      const TraceGraph tg = trace_from_json(read_json_file(loc_input));
      EstimatorSpec spec = EstimatorSpec::parse(loc_estimator);
      spec.max_horizon = loc_horizon;
      auto lookup = [&](const std::string& text) -> VertexId {
        const LatticePoint p = LatticePoint::parse(text);
        if (p.dim() != tg.dim()) throw ConfigError("point '" + text + "' has the wrong dimension");
        const auto v = tg.find(p);
        if (!v) throw ConfigError("point '" + text + "' is not a vertex of the trace");
        return *v;
      };
      std::optional<VertexId> truth, terminal;
      if (!loc_truth.empty()) truth = lookup(loc_truth);
      if (!loc_terminal.empty()) terminal = lookup(loc_terminal);
      Stream rng = replicate_stream(g.seed, 0).split(2);
      const EstimatorOutcome out = localize(tg, spec, truth, rng, terminal);
      json j = to_json(out, tg);
      j["estimator"] = spec.to_string();
      j["seed"] = g.seed;
      emit(g, j.dump(2) + "\n");
      return out.unstable && g.max_failure_rate < 1.0 ? kExitFailures : 0;
    }

    if (*exp) {
      xcfg.input = parse_input_kind(x_trace);
      xcfg.estimator = EstimatorSpec::parse(x_estimator);
      xcfg.seed = g.seed;
      xcfg.threads = resolve_threads(g.threads);
      xcfg.output_path = g.out;
      xcfg.shard = parse_shard(x_shard);
      const EstimateReport r = x_quantity == "diameter-growth" ? run_diameter_growth(xcfg, &g_stop)
                                                              : run_experiment(xcfg, &g_stop);
      return finish_report(g, r, timer);
    }

    if (*exact) {
      json j = {{"schema", kSchema}, {"dimension", ex_dim}};
      if (*ex_ret) {
        j["n"] = ex_n;
        j["return_probability"] = rational_json(return_probability(ex_dim, ex_n));
        if (ex_n >= 1) j["lclt_bound"] = lclt_bound(ex_dim, ex_n);
      } else if (*ex_tail) {
        j["k"] = ex_k;
        j["cutoff"] = ex_cutoff;
        j["tail_sum"] = exact_value_json(tail_sum(ex_dim, ex_k, ex_cutoff));
      } else {
        j["cutoff"] = ex_cutoff;
        j["intersection_expectation"] = exact_value_json(intersection_expectation(ex_dim, ex_cutoff, false));
        j["adjacency_expectation"] = exact_value_json(intersection_expectation(ex_dim, ex_cutoff, true));
        const LowerBounds lb = localisation_lower_bounds(ex_dim, ex_cutoff);
        j["s_lower"] = lb.s_lower;
        j["c_lower"] = lb.c_lower;
        j["c_tilde_lower"] = lb.c_tilde_lower;
        j["verdict"] = to_string(lb.verdict);
        const TransienceReport tr = strong_transience_verdict(ex_dim);
        j["transience"] = to_string(tr.verdict);
        j["transience_certified_bound"] = tr.certified_bound ? json(*tr.certified_bound) : json(nullptr);
      }
      emit(g, j.dump(2) + "\n");
      return 0;
    }

    if (*amn) {
      acfg.seed = g.seed;
      acfg.threads = resolve_threads(g.threads);
      for (const auto& s : a_starts) acfg.starts.push_back(LatticePoint::parse(s));
      const CouplingReport r = amnesia_experiment(acfg, &g_stop);
      json j = r.to_json();
      if (g_stop) j["partial"] = true;
      if (g.timing) j["wall_clock_seconds"] = timer.seconds();
      emit(g, j.dump(2) + "\n");
      return g_stop ? kExitInterrupted : 0;
    }

    if (*rep) {
      std::vector<EstimateReport> shards;
      for (const auto& f : rep_files) shards.push_back(EstimateReport::from_json(read_json_file(f)));
      EstimateReport merged = merge_reports(shards);
      emit(g, g.format == "csv" ? report_csv(merged) : merged.to_json().dump(2) + "\n");
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "walklocus: " << e.what() << '\n';
    return kExitConfig;
  } catch (const GraphError& e) {
    std::cerr << "walklocus: " << e.what() << '\n';
    return kExitConfig;
  } catch (const BudgetExceeded& e) {
    std::cerr << "walklocus: " << e.what() << '\n';
    return kExitFailures;
  }
  return 0;
}
