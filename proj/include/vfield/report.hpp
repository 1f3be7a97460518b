#pragma once

// Residual reports: per-check norms, per-sample detail rows, JSON and CSV
// serialization.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vfield/core4.hpp"

namespace vfield {

inline constexpr const char* kReportSchema = "vfield.report/1";

enum class CheckKind { kAssert, kMeasure };

struct CheckResult {
  std::string name;
  CheckKind kind = CheckKind::kAssert;
  double tolerance = 0.0;
  double linf = 0.0;
  /// sqrt(sum of squared sample values).
  double l2 = 0.0;
  int samples = 0;
  bool passed = false;
  std::string description;

  friend bool operator==(const CheckResult&, const CheckResult&);
};

struct DetailRow {
  int index = 0;
  /// Absent for samples that are not space-time events (random momenta,
  /// scan results, ...).
  std::optional<Event> event;
  std::string check;
  double value = 0.0;

  friend bool operator==(const DetailRow&, const DetailRow&);
};

struct Report {
  std::string schema = kReportSchema;
  std::string toolkit_version;
  nlohmann::json scenario;
  std::vector<CheckResult> checks;
  std::vector<DetailRow> rows;
  /// Scenario-specific measurements that are not pass/fail checks.
  nlohmann::json measurements = nlohmann::json::object();
  bool all_passed = false;
  std::optional<std::string> timestamp;
  std::optional<double> duration_seconds;

  int exit_code() const { return all_passed ? 0 : 1; }

  friend bool operator==(const Report&, const Report&);
};

/// Accumulates samples for one check and folds them into a CheckResult.
class CheckBuilder {
 public:
  CheckBuilder(std::string name, CheckKind kind, double tolerance, std::string description);

  void add(double value, std::optional<Event> event = std::nullopt);
  const std::string& name() const { return name_; }

  CheckResult finish(std::vector<DetailRow>& rows) const;

 private:
  std::string name_;
  CheckKind kind_;
  double tolerance_;
  std::string description_;
  std::vector<std::pair<double, std::optional<Event>>> samples_;
};

nlohmann::json to_json(const Report& r);
/// Throws kConfig on schema violations.
Report report_from_json(const nlohmann::json& j);
std::string to_json_string(const Report& r);
/// Header "index,x1,x2,x3,t,check,value"; one row per detail row, CRLF line
/// endings, empty coordinates for non-event samples.
std::string to_csv(const Report& r);

std::string to_string(CheckKind k);

}  // namespace vfield
