#include "walklocus/report.hpp"

#include <cmath>
#include <cstdio>

#include <boost/math/distributions/normal.hpp>

#include "walklocus/error.hpp"
#include "walklocus/rng.hpp"

namespace walklocus {

void Tally::add(Outcome o) {
  switch (o) {
    case Outcome::Success: ++successes; break;
    case Outcome::Miss: ++misses; break;
    case Outcome::Unstable: ++unstable; break;
    case Outcome::BudgetExhausted: ++budget_exhausted; break;
    case Outcome::NotRun: break;
  }
}

Tally& Tally::operator+=(const Tally& other) {
  successes += other.successes;
  misses += other.misses;
  unstable += other.unstable;
  budget_exhausted += other.budget_exhausted;
  return *this;
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double level) {
  if (trials == 0) throw ConfigError("wilson interval needs at least one trial");
  if (successes > trials) throw ConfigError("successes exceed trials");
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("confidence level must be in (0, 1)");
  const boost::math::normal_distribution<double> normal;
  const double z = boost::math::quantile(normal, 0.5 + level / 2.0);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  Interval out{centre - half, centre + half};
  if (successes == 0) out.lo = 0.0;
  if (successes == trials) out.hi = 1.0;
  out.lo = std::max(0.0, std::min(out.lo, p));
  out.hi = std::min(1.0, std::max(out.hi, p));
  return out;
}

std::string config_digest(const nlohmann::json& canonical_config) {
  const std::string text = canonical_config.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double EstimateReport::point() const {
  const auto valid = tally.valid();
  return valid == 0 ? 0.0 : static_cast<double>(tally.successes) / static_cast<double>(valid);
}

Interval EstimateReport::interval() const {
  const auto valid = tally.valid();
  if (valid == 0) return {};
  return wilson_interval(tally.successes, valid);
}

nlohmann::json EstimateReport::to_json() const {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["quantity"] = quantity;
  j["estimate"] = point();
  const Interval ci = interval();
  j["interval"] = {{"level", 0.95}, {"method", "wilson"}, {"lo", ci.lo}, {"hi", ci.hi}};
  j["replicates"] = tally.replicates();
  j["tally"] = {{"successes", tally.successes},
                {"misses", tally.misses},
                {"unstable", tally.unstable},
                {"budget_exhausted", tally.budget_exhausted}};
  j["failures"] = tally.failures();
  j["partial"] = partial;
  j["config"] = config;
  j["config_digest"] = config_digest(config);
  j["rng"] = std::string(kRngName);
  j["seed_rule"] = std::string(kSeedRule);
  if (wall_clock_seconds) j["wall_clock_seconds"] = *wall_clock_seconds;
  if (!extra.empty()) j["extra"] = extra;
  return j;
}

EstimateReport EstimateReport::from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<std::string>() != kSchema) throw ConfigError("unsupported report schema");
    EstimateReport r;
    r.quantity = j.at("quantity").get<std::string>();
    const auto& t = j.at("tally");
    r.tally.successes = t.at("successes").get<std::uint64_t>();
    r.tally.misses = t.at("misses").get<std::uint64_t>();
    r.tally.unstable = t.at("unstable").get<std::uint64_t>();
    r.tally.budget_exhausted = t.at("budget_exhausted").get<std::uint64_t>();
    r.partial = j.value("partial", false);
    r.config = j.at("config");
    if (j.contains("wall_clock_seconds")) r.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
    if (j.contains("extra")) r.extra = j.at("extra");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed report JSON: ") + e.what());
  }
}

}  // namespace walklocus
