#include "vfield/report.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "vfield/errors.hpp"

namespace vfield {

namespace {

bool same_double(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

nlohmann::json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double read_number(const nlohmann::json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) fail(ErrorCode::kConfig, "report field is not a number");
  return j.get<double>();
}

std::string shortest(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    fail(ErrorCode::kConfig, std::string("report is missing field '") + key + "'");
  }
  return j.at(key);
}

}  // namespace

bool operator==(const CheckResult& a, const CheckResult& b) {
  return a.name == b.name && a.kind == b.kind && same_double(a.tolerance, b.tolerance) &&
         same_double(a.linf, b.linf) && same_double(a.l2, b.l2) && a.samples == b.samples &&
         a.passed == b.passed && a.description == b.description;
}

bool operator==(const DetailRow& a, const DetailRow& b) {
  return a.index == b.index && a.event == b.event && a.check == b.check &&
         same_double(a.value, b.value);
}

bool operator==(const Report& a, const Report& b) {
  return a.schema == b.schema && a.toolkit_version == b.toolkit_version &&
         a.scenario == b.scenario && a.checks == b.checks && a.rows == b.rows &&
         a.measurements == b.measurements && a.all_passed == b.all_passed &&
         a.timestamp == b.timestamp && a.duration_seconds == b.duration_seconds;
}

std::string to_string(CheckKind k) { return k == CheckKind::kAssert ? "assert" : "measure"; }

CheckBuilder::CheckBuilder(std::string name, CheckKind kind, double tolerance,
                           std::string description)
    : name_(std::move(name)),
      kind_(kind),
      tolerance_(tolerance),
      description_(std::move(description)) {}

void CheckBuilder::add(double value, std::optional<Event> event) {
  samples_.emplace_back(value, event);
}

CheckResult CheckBuilder::finish(std::vector<DetailRow>& rows) const {
  CheckResult r;
  r.name = name_;
  r.kind = kind_;
  r.tolerance = tolerance_;
  r.description = description_;
  r.samples = static_cast<int>(samples_.size());
  double linf = 0.0, sum2 = 0.0;
  bool finite = true;
  int index = 0;
  for (const auto& [v, e] : samples_) {
    rows.push_back({index++, e, name_, v});
    if (!std::isfinite(v)) {
      finite = false;
      continue;
    }
    linf = std::max(linf, std::abs(v));
    sum2 += v * v;
  }
  r.linf = finite ? linf : std::numeric_limits<double>::quiet_NaN();
  r.l2 = finite ? std::sqrt(sum2) : std::numeric_limits<double>::quiet_NaN();
  if (kind_ == CheckKind::kMeasure) {
    r.passed = true;
  } else {
    r.passed = !samples_.empty() && finite && (linf < tolerance_ || linf == 0.0);
  }
  return r;
}

nlohmann::json to_json(const Report& r) {
  nlohmann::json j;
  j["schema"] = r.schema;
  j["toolkit_version"] = r.toolkit_version;
  j["scenario"] = r.scenario;
  j["all_passed"] = r.all_passed;
  j["measurements"] = r.measurements;
  auto checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"kind", to_string(c.kind)},
                      {"tolerance", number(c.tolerance)},
                      {"linf", number(c.linf)},
                      {"l2", number(c.l2)},
                      {"samples", c.samples},
                      {"passed", c.passed},
                      {"description", c.description}});
  }
  j["checks"] = std::move(checks);
  auto rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json jr{{"index", row.index}, {"check", row.check}, {"value", number(row.value)}};
    if (row.event) {
      jr["event"] = {row.event->x1, row.event->x2, row.event->x3, row.event->t};
    } else {
      jr["event"] = nullptr;
    }
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  if (r.timestamp) j["timestamp"] = *r.timestamp;
  if (r.duration_seconds) j["duration_seconds"] = *r.duration_seconds;
  return j;
}

Report report_from_json(const nlohmann::json& j) {
  Report r;
  r.schema = field(j, "schema").get<std::string>();
  if (r.schema != kReportSchema) fail(ErrorCode::kConfig, "unsupported report schema " + r.schema);
  r.toolkit_version = field(j, "toolkit_version").get<std::string>();
  r.scenario = field(j, "scenario");
  r.all_passed = field(j, "all_passed").get<bool>();
  r.measurements = field(j, "measurements");
  for (const auto& c : field(j, "checks")) {
    CheckResult cr;
    cr.name = field(c, "name").get<std::string>();
    const auto kind = field(c, "kind").get<std::string>();
    if (kind != "assert" && kind != "measure") fail(ErrorCode::kConfig, "bad check kind " + kind);
    cr.kind = kind == "assert" ? CheckKind::kAssert : CheckKind::kMeasure;
    cr.tolerance = read_number(field(c, "tolerance"));
    cr.linf = read_number(field(c, "linf"));
    cr.l2 = read_number(field(c, "l2"));
    cr.samples = field(c, "samples").get<int>();
    cr.passed = field(c, "passed").get<bool>();
    cr.description = field(c, "description").get<std::string>();
    r.checks.push_back(std::move(cr));
  }
  for (const auto& jr : field(j, "rows")) {
    DetailRow row;
    row.index = field(jr, "index").get<int>();
    row.check = field(jr, "check").get<std::string>();
    row.value = read_number(field(jr, "value"));
    const auto& ev = field(jr, "event");
    if (!ev.is_null()) {
      if (!ev.is_array() || ev.size() != 4) fail(ErrorCode::kConfig, "row event must have 4 entries");
      row.event = Event{ev[0].get<double>(), ev[1].get<double>(), ev[2].get<double>(),
                        ev[3].get<double>()};
    }
    r.rows.push_back(std::move(row));
  }
  if (j.contains("timestamp")) r.timestamp = j.at("timestamp").get<std::string>();
  if (j.contains("duration_seconds")) r.duration_seconds = j.at("duration_seconds").get<double>();
  return r;
}

std::string to_json_string(const Report& r) { return to_json(r).dump(2) + "\n"; }

std::string to_csv(const Report& r) {
  std::ostringstream os;
  os << "index,x1,x2,x3,t,check,value\r\n";
  for (const auto& row : r.rows) {
    os << row.index << ',';
    if (row.event) {
      os << shortest(row.event->x1) << ',' << shortest(row.event->x2) << ','
         << shortest(row.event->x3) << ',' << shortest(row.event->t) << ',';
    } else {
      os << ",,,,";
    }
    os << row.check << ',' << shortest(row.value) << "\r\n";
  }
  return os.str();
}

}  // namespace vfield
