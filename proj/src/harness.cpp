#include "walklocus/harness.hpp"

#include <algorithm>
#include <functional>

#include "walklocus/error.hpp"
#include "walklocus/graphalg.hpp"
#include "walklocus/parallel.hpp"
#include "walklocus/trace.hpp"

namespace walklocus {

std::string to_string(InputKind k) {
  switch (k) {
    case InputKind::Edge: return "edge";
    case InputKind::Vertex: return "vertex";
    case InputKind::Range: return "range";
  }
  return "edge";
}

InputKind parse_input_kind(const std::string& text) {
  if (text == "edge") return InputKind::Edge;
  if (text == "vertex") return InputKind::Vertex;
  if (text == "range") return InputKind::Range;
  throw ConfigError("unknown trace kind '" + text + "' (expected edge, vertex or range)");
}

void ExperimentConfig::validate() const {
  if (dim < 1 || dim > 127) throw ConfigError("dimension must be in [1, 127]");
  if (replicates < 1) throw ConfigError("replicates must be >= 1");
  if (input == InputKind::Range) {
    if (length < 1) throw ConfigError("range target must be >= 1");
    if (dim <= 2 && !range_budget) throw ConfigError("range traces in d <= 2 need --range-budget");
  }
  if (shard && (shard->first > shard->second || shard->second > replicates))
    throw ConfigError("shard range must satisfy begin <= end <= replicates");
}

nlohmann::json ExperimentConfig::canonical(const std::string& quantity) const {
  nlohmann::json j = {{"command", "experiment"},
                      {"quantity", quantity},
                      {"dimension", dim},
                      {"length", length},
                      {"trace", to_string(input)},
                      {"estimator", estimator.to_string()},
                      {"replicates", replicates},
                      {"seed", seed}};
  if (input == InputKind::Range) {
    j["range_budget"] = range_budget.value_or(default_range_budget(length));
  }
  if (estimator.kind == EstimatorKind::Gamma) j["max_horizon"] = estimator.max_horizon;
  return j;
}

namespace {

EstimateReport run_replicates(const ExperimentConfig& cfg, const std::string& quantity,
                              const std::function<Outcome(Stream&)>& replicate,
                              const std::atomic<bool>* stop) {
  cfg.validate();
  const std::uint64_t begin = cfg.shard ? cfg.shard->first : 0;
  const std::uint64_t end = cfg.shard ? cfg.shard->second : cfg.replicates;
  std::vector<Outcome> outcomes(end - begin, Outcome::NotRun);
  parallel_for(begin, end, resolve_threads(cfg.threads), [&](std::size_t r) {
    Stream stream = replicate_stream(cfg.seed, r);
    outcomes[r - begin] = replicate(stream);
  }, stop);
  EstimateReport report;
  report.quantity = quantity;
  for (Outcome o : outcomes) report.tally.add(o);
  report.config = cfg.canonical(quantity);
  report.partial = report.tally.replicates() < end - begin;
  if (cfg.shard) report.extra["shard"] = {begin, end};
  return report;
}

}  // namespace

EstimateReport run_experiment(const ExperimentConfig& cfg, const std::atomic<bool>* stop) {
  const std::string quantity = "localize:" + cfg.estimator.to_string();
  return run_replicates(cfg, quantity, [&](Stream& stream) {
    Stream walk_stream = stream.split(1);
    Stream est_stream = stream.split(2);
    Walk w;
    try {
      w = cfg.input == InputKind::Range
              ? walk_until_range(cfg.dim, cfg.length, walk_stream,
                                 cfg.range_budget.value_or(default_range_budget(cfg.length)))
              : generate_walk(cfg.dim, cfg.length, walk_stream);
    } catch (const BudgetExceeded&) {
      return Outcome::BudgetExhausted;
    }
    const TraceGraph g = cfg.input == InputKind::Vertex ? build_vertex_trace(w) : build_trace(w);
    const auto terminal = g.find(w.position(w.length()));
    const EstimatorOutcome out = localize(g, cfg.estimator, g.source_index(), est_stream, terminal);
    if (out.unstable) return Outcome::Unstable;
    return *out.success ? Outcome::Success : Outcome::Miss;
  }, stop);
}

EstimateReport run_diameter_growth(const ExperimentConfig& cfg, const std::atomic<bool>* stop) {
  if (cfg.input == InputKind::Range) throw ConfigError("diameter growth needs an edge or vertex trace");
  if (cfg.length < 2) throw ConfigError("diameter growth needs n >= 2");
  return run_replicates(cfg, "diameter-growth", [&](Stream& stream) {
    Stream walk_stream = stream.split(1);
    const Walk w = generate_walk(cfg.dim, cfg.length, walk_stream);
    const std::size_t n = w.length();
    std::uint32_t before, after;
    if (cfg.input == InputKind::Vertex) {
      const Walk shorter(w.start(), StepSequence(w.dim(), {w.steps().steps().begin(), w.steps().steps().end() - 1}));
      before = diameter(build_vertex_trace(shorter).graph());
      after = diameter(build_vertex_trace(w).graph());
    } else {
      before = diameter(build_trace(w, 0, n - 1).graph());
      after = diameter(build_trace(w, 0, n).graph());
    }
    return before < after ? Outcome::Success : Outcome::Miss;
  }, stop);
}

EstimateReport merge_reports(const std::vector<EstimateReport>& shards) {
  if (shards.empty()) throw ConfigError("nothing to merge");
  EstimateReport merged;
  merged.quantity = shards.front().quantity;
  merged.config = shards.front().config;
  const std::string digest = config_digest(merged.config);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
  for (const auto& s : shards) {
    if (s.extra.contains("shard")) {
      ranges.emplace_back(s.extra["shard"][0].get<std::uint64_t>(), s.extra["shard"][1].get<std::uint64_t>());
    }
  }
  std::sort(ranges.begin(), ranges.end());
  for (std::size_t i = 1; i < ranges.size(); ++i)
    if (ranges[i].first < ranges[i - 1].second) throw ConfigError("shard ranges overlap");
  for (const auto& s : shards) {
    if (s.quantity != merged.quantity || config_digest(s.config) != digest)
      throw ConfigError("reports belong to different experiments");
    merged.tally += s.tally;
    merged.partial = merged.partial || s.partial;
  }
  std::uint64_t expected = merged.config.value("replicates", std::uint64_t{0});
  if (merged.tally.replicates() != expected) merged.partial = true;
  return merged;
}

}  // namespace walklocus
