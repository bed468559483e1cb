#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "walklocus/estimators.hpp"
#include "walklocus/report.hpp"

namespace walklocus {

enum class InputKind { Edge, Vertex, Range };
std::string to_string(InputKind k);
InputKind parse_input_kind(const std::string& text);

struct ExperimentConfig {
  int dim = 5;
  // Walk length for edge/vertex traces, vertex target for range traces.
  std::size_t length = 4096;
  InputKind input = InputKind::Edge;
  EstimatorSpec estimator;
  std::optional<std::size_t> range_budget;  // step cap for range traces
  std::uint64_t replicates = 1000;
  std::uint64_t seed = 1;
  // Not part of the experiment's identity:
  unsigned threads = 0;  // 0 = WALKLOCUS_THREADS or hardware
  std::string output_path;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> shard;  // [begin, end)

  void validate() const;
  // Everything that determines the numbers, with stable key order.
  nlohmann::json canonical(const std::string& quantity) const;
};

// Per replicate r: stream = replicate_stream(seed, r); the walk draws from
// split(1), the estimator from split(2). Success means the estimator output
// equals (or contains) X_0.
EstimateReport run_experiment(const ExperimentConfig& cfg, const std::atomic<bool>* stop = nullptr);

// Frequency of diam(G_{n-1}) < diam(G_n) for n = cfg.length, walk from split(1).
EstimateReport run_diameter_growth(const ExperimentConfig& cfg, const std::atomic<bool>* stop = nullptr);

// Sums the tallies of shard reports of one experiment. All inputs must carry
// the same quantity and config digest.
EstimateReport merge_reports(const std::vector<EstimateReport>& shards);

}  // namespace walklocus
