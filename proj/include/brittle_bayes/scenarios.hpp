#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace brittle_bayes {

struct UnknownScenario : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidOverride : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Where a metric's expected value comes from: a published number, a direct
/// consequence of definitions, or an independent oracle computation.
enum class Provenance { paper, trivial, derived };

const char* to_string(Provenance p);

struct MetricRow {
  std::string label;
  double value = 0.0;
  std::optional<double> expected;
  double tolerance = 0.0;
  Provenance tag = Provenance::derived;
  bool pass = true;  // |value - expected| <= tolerance when expected is present
};

struct ScenarioReport {
  std::string name;
  std::map<std::string, double> parameters;
  std::vector<MetricRow> results;
  double runtime_ms = 0.0;

  bool all_pass() const;
  const MetricRow* find(const std::string& label) const;
};

/// Registry order is fixed; reports and sweeps follow it deterministically.
std::vector<std::string> scenario_names();

/// Runs one named scenario with paper-default parameters, the given overrides
/// applied on top, and all randomness derived from (seed, name). Throws
/// UnknownScenario / InvalidOverride.
ScenarioReport run_scenario(const std::string& name,
                            const std::map<std::string, double>& overrides, std::uint64_t seed);

/// One report per value, in input order; the parameter must be overridable.
std::vector<ScenarioReport> sweep(const std::string& name, const std::string& parameter,
                                  const std::vector<double>& values, std::uint64_t seed);

// ---- serialization -----------------------------------------------------------

/// JSON is the canonical format; keys are emitted in sorted order. runtime_ms
/// is present but excluded from the determinism contract.
nlohmann::json report_to_json(const ScenarioReport& report);
nlohmann::json reports_to_json(const std::vector<ScenarioReport>& reports);

/// Recursively drops runtime_ms fields and dumps with 2-space indent: the
/// byte-comparable canonical form.
std::string canonical_json(const nlohmann::json& j);

/// Flattened projection: header row, one metric per row, RFC-4180 quoting,
/// LF line endings, shortest round-trip numbers; runtimes go to trailing
/// comment lines.
std::string reports_to_csv(const std::vector<ScenarioReport>& reports);

}  // namespace brittle_bayes
