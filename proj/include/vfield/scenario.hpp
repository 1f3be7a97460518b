#pragma once

// Scenario runner: builds fixtures and potentials from a JSON configuration,
// evaluates a check suite over a sample cloud and returns a Report.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vfield/core4.hpp"
#include "vfield/report.hpp"

namespace vfield {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

struct CloudSpec {
  enum class Kind { kRay, kRandomBall, kEvents };

  Kind kind = Kind::kRay;
  // ray
  double r_min = 0.5;
  double r_max = 5.0;
  double t = 0.0;
  std::array<double, 3> direction{1.0, 0.0, 0.0};
  // random ball (uniform in the 4-ball of (x1, x2, x3, c t))
  Event center;
  double radius = 2.0;
  std::optional<std::uint64_t> seed;
  // shared
  int count = 50;
  std::vector<Event> events;
};

std::vector<Event> sample_cloud(const CloudSpec& spec, double c);

enum class OutputFormat { kJson, kCsv };

OutputFormat parse_format(const std::string& s);

struct ScenarioConfig {
  std::string scenario;
  PhysicalConstants constants;
  nlohmann::json fixture = nlohmann::json::object();
  std::optional<DerivativeMethod> method;
  std::optional<CloudSpec> cloud;
  std::optional<std::uint64_t> seed;
  std::map<std::string, double> tolerances;
  std::optional<std::string> output_path;
  OutputFormat format = OutputFormat::kJson;
  bool timestamp = true;
};

/// Command-line overrides applied on top of a configuration.
struct RunOverrides {
  std::optional<std::string> output_path;
  std::optional<OutputFormat> format;
  std::optional<double> h;
  std::optional<DerivativeMethod::Mode> mode;
  std::optional<std::uint64_t> seed;
  bool no_timestamp = false;
};

/// Parses a configuration document. Throws kConfig on any schema violation
/// (the "scenario" key is mandatory).
ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig default_config(const std::string& scenario);
void apply_overrides(ScenarioConfig& cfg, const RunOverrides& o);

/// Sorted scenario names.
std::vector<std::string> list_scenarios();

/// Throws kUnknownScenario / kConfig on bad input; check failures are
/// reported in the returned Report, never thrown.
Report run_scenario(const ScenarioConfig& cfg);

/// Serialized report in the configured format.
std::string render(const Report& r, OutputFormat f);

/// Writes to `path`; throws kIo on failure.
void write_report(const Report& r, OutputFormat f, const std::string& path);

std::string toolkit_version();

}  // namespace vfield
