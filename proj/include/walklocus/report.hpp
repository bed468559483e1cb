#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

namespace walklocus {

inline constexpr const char* kSchema = "walk-locus/1";

enum class Outcome : std::uint8_t { Success, Miss, Unstable, BudgetExhausted, NotRun };

// Merge-only replicate counts.
struct Tally {
  std::uint64_t successes = 0;
  std::uint64_t misses = 0;
  std::uint64_t unstable = 0;
  std::uint64_t budget_exhausted = 0;

  void add(Outcome o);
  Tally& operator+=(const Tally& other);
  std::uint64_t failures() const { return unstable + budget_exhausted; }
  std::uint64_t replicates() const { return successes + misses + failures(); }
  // Replicates with a well-defined estimator output.
  std::uint64_t valid() const { return successes + misses; }

  friend bool operator==(const Tally&, const Tally&) = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Wilson score interval for a binomial proportion; `level` is two-sided.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double level = 0.95);

// FNV-1a 64 of the canonical (sorted-key, compact) JSON dump, as 16 hex digits.
std::string config_digest(const nlohmann::json& canonical_config);

struct EstimateReport {
  std::string quantity;
  Tally tally;
  nlohmann::json config;  // canonical, digest input
  bool partial = false;
  std::optional<double> wall_clock_seconds;
  nlohmann::json extra = nlohmann::json::object();

  // successes / (replicates - failures); 0 when no replicate is valid.
  double point() const;
  Interval interval() const;
  nlohmann::json to_json() const;
  static EstimateReport from_json(const nlohmann::json& j);
};

}  // namespace walklocus
