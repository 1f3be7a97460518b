#include "vfield/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <deque>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "vfield/dirac.hpp"
#include "vfield/errors.hpp"
#include "vfield/fields.hpp"
#include "vfield/random.hpp"
#include "vfield/velocityfield.hpp"
#include "vfield/wavefunctions.hpp"
#include "vfield/worldline.hpp"

namespace vfield {

using nlohmann::json;

std::string toolkit_version() { return VFIELD_VERSION_STRING; }

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void config_error(const std::string& what) { fail(ErrorCode::kConfig, what); }

void allow_keys(const json& j, const char* where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) config_error(std::string(where) + " must be an object");
  for (const auto& [k, _] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
      config_error(std::string("unknown key '") + k + "' in " + where);
    }
  }
}

double get_number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) config_error(std::string("'") + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) config_error(std::string("'") + key + "' must be finite");
  return x;
}

int get_count(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) config_error(std::string("'") + key + "' must be an integer");
  const auto n = v.get<long long>();
  if (n < 1 || n > 1000000) config_error(std::string("'") + key + "' must be in [1, 1e6]");
  return static_cast<int>(n);
}

std::uint64_t get_seed(const json& v) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    config_error("seed must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::array<double, 3> get_vec3(const json& j, const char* key, std::array<double, 3> fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 3) config_error(std::string("'") + key + "' must be a 3-array");
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!v[i].is_number()) config_error(std::string("'") + key + "' entries must be numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

Event get_event(const json& v) {
  if (!v.is_array() || v.size() != 4) config_error("events must be [x1, x2, x3, t] arrays");
  Event e;
  for (int i = 0; i < 4; ++i) {
    if (!v[static_cast<std::size_t>(i)].is_number()) config_error("event entries must be numbers");
    e[i] = v[static_cast<std::size_t>(i)].get<double>();
  }
  return e;
}

json event_json(const Event& e) { return json::array({e.x1, e.x2, e.x3, e.t}); }

CloudSpec parse_cloud(const json& j) {
  allow_keys(j, "cloud", {"kind", "r_min", "r_max", "count", "t", "direction", "center",
                          "radius", "seed", "events"});
  if (!j.contains("kind") || !j.at("kind").is_string()) config_error("cloud.kind is required");
  const auto kind = j.at("kind").get<std::string>();
  CloudSpec c;
  if (kind == "ray") {
    c.kind = CloudSpec::Kind::kRay;
    c.r_min = get_number(j, "r_min", 0.5);
    c.r_max = get_number(j, "r_max", 5.0);
    c.count = get_count(j, "count", 50);
    c.t = get_number(j, "t", 0.0);
    c.direction = get_vec3(j, "direction", {1.0, 0.0, 0.0});
    if (!(c.r_min > 0.0) || c.r_max < c.r_min) config_error("ray needs 0 < r_min <= r_max");
    const double n = std::hypot(c.direction[0], c.direction[1], c.direction[2]);
    if (!(n > 0.0)) config_error("ray direction must be nonzero");
  } else if (kind == "random-ball") {
    c.kind = CloudSpec::Kind::kRandomBall;
    c.count = get_count(j, "count", 100);
    c.radius = get_number(j, "radius", 2.0);
    if (!(c.radius > 0.0)) config_error("random-ball radius must be positive");
    if (j.contains("center")) c.center = get_event(j.at("center"));
    if (j.contains("seed")) c.seed = get_seed(j.at("seed"));
  } else if (kind == "events") {
    c.kind = CloudSpec::Kind::kEvents;
    if (!j.contains("events") || !j.at("events").is_array() || j.at("events").empty())
      config_error("cloud.events must be a non-empty array");
    for (const auto& e : j.at("events")) c.events.push_back(get_event(e));
    c.count = static_cast<int>(c.events.size());
  } else {
    config_error("unknown cloud kind '" + kind + "'");
  }
  return c;
}

json cloud_json(const CloudSpec& c) {
  switch (c.kind) {
    case CloudSpec::Kind::kRay:
      return {{"kind", "ray"}, {"r_min", c.r_min}, {"r_max", c.r_max}, {"count", c.count},
              {"t", c.t}, {"direction", c.direction}};
    case CloudSpec::Kind::kRandomBall: {
      json j{{"kind", "random-ball"}, {"count", c.count}, {"radius", c.radius},
             {"center", event_json(c.center)}};
      if (c.seed) j["seed"] = *c.seed;
      return j;
    }
    case CloudSpec::Kind::kEvents: {
      json ev = json::array();
      for (const auto& e : c.events) ev.push_back(event_json(e));
      return {{"kind", "events"}, {"events", ev}};
    }
  }
  return nullptr;
}

std::string mode_name(DerivativeMethod::Mode m) {
  return m == DerivativeMethod::Mode::kAnalytic ? "analytic" : "numeric";
}

}  // namespace

std::vector<Event> sample_cloud(const CloudSpec& spec, double c) {
  std::vector<Event> out;
  switch (spec.kind) {
    case CloudSpec::Kind::kRay: {
      const auto& d = spec.direction;
      const double n = std::hypot(d[0], d[1], d[2]);
      for (int i = 0; i < spec.count; ++i) {
        const double r = spec.count == 1
                             ? spec.r_min
                             : spec.r_min + (spec.r_max - spec.r_min) * i / (spec.count - 1);
        out.push_back({r * d[0] / n, r * d[1] / n, r * d[2] / n, spec.t});
      }
      break;
    }
    case CloudSpec::Kind::kRandomBall: {
      if (!spec.seed) config_error("random-ball clouds need an rng seed");
      SplitRng rng(*spec.seed);
      while (static_cast<int>(out.size()) < spec.count) {
        std::array<double, 4> x{};
        double r2 = 0.0;
        for (auto& xi : x) {
          xi = rng.uniform(-1.0, 1.0);
          r2 += xi * xi;
        }
        if (r2 > 1.0) continue;
        out.push_back({spec.center.x1 + spec.radius * x[0], spec.center.x2 + spec.radius * x[1],
                       spec.center.x3 + spec.radius * x[2],
                       spec.center.t + spec.radius * x[3] / c});
      }
      break;
    }
    case CloudSpec::Kind::kEvents:
      out = spec.events;
      break;
  }
  return out;
}

OutputFormat parse_format(const std::string& s) {
  if (s == "json") return OutputFormat::kJson;
  if (s == "csv") return OutputFormat::kCsv;
  config_error("unknown output format '" + s + "' (expected json or csv)");
}

std::vector<std::string> list_scenarios() {
  std::vector<std::string> names{"plane-wave",       "kg-coulomb-1s", "dirac-plane-wave",
                                 "dirac-coulomb-1s", "gauge-orbit",   "clifford",
                                 "action-path",      "worldline-pierce"};
  std::sort(names.begin(), names.end());
  return names;
}

namespace {

void require_known(const std::string& name) {
  const auto names = list_scenarios();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    fail(ErrorCode::kUnknownScenario, "unknown scenario '" + name + "'");
  }
}

}  // namespace

ScenarioConfig parse_config(const json& j) {
  allow_keys(j, "config", {"scenario", "constants", "fixture", "derivative", "cloud", "seed",
                           "tolerances", "output", "timestamp"});
  if (!j.contains("scenario") || !j.at("scenario").is_string()) {
    config_error("config is missing the 'scenario' name");
  }
  ScenarioConfig cfg;
  cfg.scenario = j.at("scenario").get<std::string>();
  require_known(cfg.scenario);
  if (j.contains("constants")) {
    const auto& k = j.at("constants");
    allow_keys(k, "constants", {"hbar", "c", "m", "q"});
    cfg.constants.hbar = get_number(k, "hbar", 1.0);
    cfg.constants.c = get_number(k, "c", 1.0);
    cfg.constants.m = get_number(k, "m", 1.0);
    cfg.constants.q = get_number(k, "q", -1.0);
    try {
      cfg.constants.validate();
    } catch (const Error& e) {
      config_error(e.what());
    }
  }
  if (j.contains("fixture")) {
    if (!j.at("fixture").is_object()) config_error("fixture must be an object");
    cfg.fixture = j.at("fixture");
  }
  if (j.contains("derivative")) {
    const auto& d = j.at("derivative");
    allow_keys(d, "derivative", {"mode", "h", "richardson"});
    DerivativeMethod m;
    if (d.contains("mode")) {
      if (!d.at("mode").is_string()) config_error("derivative.mode must be a string");
      const auto mode = d.at("mode").get<std::string>();
      if (mode == "analytic") m.mode = DerivativeMethod::Mode::kAnalytic;
      else if (mode == "numeric") m.mode = DerivativeMethod::Mode::kCentralDifference;
      else config_error("derivative.mode must be analytic or numeric");
    }
    m.h = get_number(d, "h", 1e-3);
    if (!(m.h > 0.0)) config_error("derivative.h must be positive");
    if (d.contains("richardson")) {
      if (!d.at("richardson").is_boolean()) config_error("derivative.richardson must be boolean");
      m.richardson = d.at("richardson").get<bool>();
    }
    cfg.method = m;
  }
  if (j.contains("cloud")) cfg.cloud = parse_cloud(j.at("cloud"));
  if (j.contains("seed")) cfg.seed = get_seed(j.at("seed"));
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    if (!t.is_object()) config_error("tolerances must be an object");
    for (const auto& [k, v] : t.items()) {
      if (!v.is_number() || !(v.get<double>() >= 0.0)) {
        config_error("tolerance '" + k + "' must be a non-negative number");
      }
      cfg.tolerances[k] = v.get<double>();
    }
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    allow_keys(o, "output", {"path", "format"});
    if (o.contains("path")) {
      if (!o.at("path").is_string()) config_error("output.path must be a string");
      cfg.output_path = o.at("path").get<std::string>();
    }
    if (o.contains("format")) {
      if (!o.at("format").is_string()) config_error("output.format must be a string");
      cfg.format = parse_format(o.at("format").get<std::string>());
    }
  }
  if (j.contains("timestamp")) {
    if (!j.at("timestamp").is_boolean()) config_error("timestamp must be boolean");
    cfg.timestamp = j.at("timestamp").get<bool>();
  }
  return cfg;
}

ScenarioConfig default_config(const std::string& scenario) {
  require_known(scenario);
  ScenarioConfig cfg;
  cfg.scenario = scenario;
  return cfg;
}

void apply_overrides(ScenarioConfig& cfg, const RunOverrides& o) {
  if (o.output_path) cfg.output_path = o.output_path;
  if (o.format) cfg.format = *o.format;
  if (o.mode || o.h) {
    DerivativeMethod m = cfg.method.value_or(DerivativeMethod{});
    if (o.mode) m.mode = *o.mode;
    if (o.h) {
      if (!(*o.h > 0.0) || !std::isfinite(*o.h)) config_error("--h must be positive");
      m.h = *o.h;
    }
    cfg.method = m;
  }
  if (o.seed) {
    cfg.seed = o.seed;
    if (cfg.cloud && cfg.cloud->kind == CloudSpec::Kind::kRandomBall) cfg.cloud->seed = o.seed;
  }
  if (o.no_timestamp) cfg.timestamp = false;
}

namespace {

// Shared state while a scenario runs.
class Suite {
 public:
  Suite(const ScenarioConfig& cfg, bool analytic) : cfg_(cfg), analytic_(analytic) {}

  /// Registers a pass/fail check; tolerance defaults differ by derivative path.
  CheckBuilder& check(const std::string& name, double analytic_tol, double numeric_tol,
                      const std::string& description) {
    double tol = analytic_ ? analytic_tol : numeric_tol;
    if (auto it = cfg_.tolerances.find(name); it != cfg_.tolerances.end()) tol = it->second;
    return add(CheckBuilder(name, CheckKind::kAssert, tol, description));
  }

  CheckBuilder& measure(const std::string& name, const std::string& description) {
    return add(CheckBuilder(name, CheckKind::kMeasure, 0.0, description));
  }

  CheckBuilder& get(const std::string& name) {
    for (auto& c : checks_)
      if (c.name() == name) return c;
    fail(ErrorCode::kConfig, "internal: no check named " + name);
  }

  void finish(Report& r) {
    std::set<std::string> names;
    for (const auto& c : checks_) names.insert(c.name());
    for (const auto& [k, _] : cfg_.tolerances) {
      if (!names.count(k)) config_error("tolerance override for unknown check '" + k + "'");
    }
    r.all_passed = true;
    for (const auto& c : checks_) {
      r.checks.push_back(c.finish(r.rows));
      r.all_passed = r.all_passed && r.checks.back().passed;
    }
  }

  json measurements = json::object();

 private:
  CheckBuilder& add(CheckBuilder b) {
    for (const auto& c : checks_)
      if (c.name() == b.name()) fail(ErrorCode::kConfig, "internal: duplicate check " + b.name());
    checks_.push_back(std::move(b));
    return checks_.back();
  }

  const ScenarioConfig& cfg_;
  bool analytic_;
  std::deque<CheckBuilder> checks_;  // stable references across push_back
};

// Evaluates fn, turning toolkit errors into NaN so the sample fails its check.
template <class F>
double guarded(F&& fn) {
  try {
    return fn();
  } catch (const Error&) {
    return kNaN;
  }
}

double spinor_max(const Spinor& s) { return max_abs(s); }

Spinor spinor_diff(const Spinor& a, const Spinor& b) {
  Spinor r{};
  for (std::size_t i = 0; i < 4; ++i) r[i] = a[i] - b[i];
  return r;
}

struct Resolved {
  PhysicalConstants k;
  DerivativeMethod method;
  std::uint64_t seed;
  std::optional<CloudSpec> cloud;
};

class Fixture {
 public:
  Fixture(const json& j, const char* scenario) : j_(j), scenario_(scenario) {}

  void allow(std::initializer_list<const char*> keys) const {
    allow_keys(j_, (std::string("fixture of ") + scenario_).c_str(), keys);
  }
  double number(const char* key, double fallback) const { return get_number(j_, key, fallback); }
  int count(const char* key, int fallback) const { return get_count(j_, key, fallback); }
  std::array<double, 3> vec3(const char* key, std::array<double, 3> fallback) const {
    return get_vec3(j_, key, fallback);
  }
  Spin spin() const {
    if (!j_.contains("spin")) return Spin::kUp;
    const auto& v = j_.at("spin");
    if (v == "up") return Spin::kUp;
    if (v == "down") return Spin::kDown;
    config_error("fixture.spin must be \"up\" or \"down\"");
  }
  std::optional<std::string> text(const char* key) const {
    if (!j_.contains(key)) return std::nullopt;
    if (!j_.at(key).is_string()) config_error(std::string("fixture.") + key + " must be a string");
    return j_.at(key).get<std::string>();
  }

 private:
  const json& j_;
  const char* scenario_;
};

template <class F>
auto config_guard(F&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidArgument) config_error(e.what());
    throw;
  }
}

CloudSpec default_ray() { return CloudSpec{}; }

CloudSpec default_ball(std::uint64_t seed, Event center, double radius, int count) {
  CloudSpec c;
  c.kind = CloudSpec::Kind::kRandomBall;
  c.center = center;
  c.radius = radius;
  c.count = count;
  c.seed = seed;
  return c;
}

EvalContext make_context(const Resolved& r) { return EvalContext{r.k, r.method, 1e-12}; }

// ---------------------------------------------------------------------------

void run_plane_wave(const Resolved& r, const Fixture& fx, Suite& s, std::vector<Event>& cloud) {
  fx.allow({"p"});
  const auto p = fx.vec3("p", {1.0, 0.0, 0.0});
  const ScalarWave w = config_guard([&] { return plane_wave(p, r.k); });
  const PotentialField A = zero_potential();
  EvalContext ctx = make_context(r);
  cloud = sample_cloud(r.cloud.value_or(default_ball(r.seed, {}, 2.0, 100)), r.k.c);
  ctx.psi_floor = calibrate_psi_floor(w.field, cloud);
  const double m2 = r.k.m * r.k.m;

  auto& ms = s.check("mass_shell", 1e-12, 1e-6, "|u.u + c^2|");
  auto& nw = s.check("newton", 1e-12, 1e-6, "|u_nu d_nu u_mu - (q/m) F_mu_nu u_nu| / |u|");
  auto& ck = s.check("curl_k", 1e-12, 1e-6, "max |K_mu_nu|");
  auto& uk = s.check("u_dot_k", 1e-12, 1e-6, "max |u_nu K_mu_nu|");
  auto& dv = s.check("divergence", 1e-12, 1e-6, "|d_mu (m u_mu)|");
  auto& di = s.check("divergence_identity", 1e-12, 1e-6,
                     "|d_mu(m u_mu) + i hbar d_mu d_mu ln psi| (two evaluations)");
  auto& kg = s.check("kg", 1e-12, 1e-6, "Klein-Gordon residual / psi");
  auto& nl = s.check("nonlinear", 1e-12, 1e-6, "corrected wave equation residual / psi");
  auto& nm = s.check("nonlinear_vs_mass_shell", 1e-12, 1e-6,
                     "|nonlinear - m^2 mass_shell|");
  for (const auto& e : cloud) {
    const ResidualSample d = diagnose_point(w.field, A, e, ctx);
    auto val = [&](auto&& opt, auto&& f) { return opt ? f(*opt) : kNaN; };
    ms.add(val(d.mass_shell, [](Complex v) { return std::abs(v); }), e);
    nw.add(val(d.newton, [](const NewtonResult& n) { return n.normalized.max_abs(); }), e);
    ck.add(val(d.curl_k, [](const Matrix4& k) { return k.max_abs(); }), e);
    uk.add(val(d.u_dot_k, [](const FourVector& v) { return v.max_abs(); }), e);
    dv.add(val(d.divergence, [](const DivergenceResult& x) { return std::abs(x.from_velocity); }), e);
    di.add(val(d.divergence,
               [](const DivergenceResult& x) {
                 return std::abs(x.from_velocity - x.from_log_laplacian);
               }),
           e);
    kg.add(d.kg && d.kg->normalized ? std::abs(d.kg->value) : kNaN, e);
    nl.add(val(d.nonlinear, [](Complex v) { return std::abs(v); }), e);
    nm.add(d.nonlinear && d.mass_shell ? std::abs(*d.nonlinear - m2 * *d.mass_shell) : kNaN, e);
  }
  s.measurements["energy"] = w.energy;
}

void run_kg_coulomb(const Resolved& r, const Fixture& fx, Suite& s, std::vector<Event>& cloud) {
  fx.allow({"z_alpha", "energy_scale"});
  const double za = fx.number("z_alpha", 0.4);
  const double scale = fx.number("energy_scale", 1.0);
  const ScalarWave base = config_guard([&] { return kg_coulomb_1s(za, r.k); });
  const ScalarWave w = scale == 1.0 ? base
                                    : config_guard([&] {
                                        return kg_coulomb_1s(za, r.k, base.energy * scale);
                                      });
  const PotentialField A = config_guard([&] { return coulomb_potential(za, r.k); });
  EvalContext ctx = make_context(r);
  cloud = sample_cloud(r.cloud.value_or(default_ray()), r.k.c);
  ctx.psi_floor = calibrate_psi_floor(w.field, cloud);
  const auto& k = r.k;
  const double m2 = k.m * k.m;

  auto& kg = s.check("kg", 1e-8, 1e-6, "Klein-Gordon residual / psi");
  auto& di = s.check("divergence_identity", 1e-8, 1e-6,
                     "|d_mu(m u_mu) + i hbar d_mu d_mu ln psi| (two evaluations)");
  auto& nm = s.check("nonlinear_vs_mass_shell", 1e-8, 1e-6, "|nonlinear - m^2 mass_shell|");
  auto& ck = s.check("curl_k", 1e-8, 1e-5, "max |K_mu_nu|");
  auto& uk = s.check("u_dot_k", 1e-10, 1e-5, "max |u_nu K_mu_nu|");
  auto& cs = s.check("corrected_mass_shell", 1e-7, 1e-5,
                     "|m^2 (u.u + c^2) - i hbar m d_mu u_mu|");
  auto& nc = s.check("newton_chain", 1e-10, 1e-5,
                     "|newton - (1/2) d_mu(u.u)| (vanishing-curl step)");
  auto& lg = s.check("lorenz_gauge", 1e-10, 1e-8, "|d_mu A_mu|");
  auto& ms = s.measure("mass_shell", "|u.u + c^2| (nonzero for bound states)");
  auto& dv = s.measure("divergence", "|d_mu (m u_mu)| (nonzero for bound states)");
  auto& nw = s.measure("newton", "|Newton residual| / |u|");
  for (const auto& e : cloud) {
    const ResidualSample d = diagnose_point(w.field, A, e, ctx);
    kg.add(d.kg && d.kg->normalized ? std::abs(d.kg->value) : kNaN, e);
    di.add(d.divergence ? std::abs(d.divergence->from_velocity - d.divergence->from_log_laplacian)
                        : kNaN,
           e);
    nm.add(d.nonlinear && d.mass_shell ? std::abs(*d.nonlinear - m2 * *d.mass_shell) : kNaN, e);
    ck.add(d.curl_k ? d.curl_k->max_abs() : kNaN, e);
    uk.add(d.u_dot_k ? d.u_dot_k->max_abs() : kNaN, e);
    cs.add(d.mass_shell && d.divergence
               ? std::abs(m2 * *d.mass_shell - kI * k.hbar * d.divergence->from_velocity)
               : kNaN,
           e);
    nc.add(d.newton ? (d.newton->raw - d.newton->shell_gradient).max_abs() : kNaN, e);
    lg.add(d.divergence ? std::abs(d.divergence->lorenz_residual) : kNaN, e);
    ms.add(d.mass_shell ? std::abs(*d.mass_shell) : kNaN, e);
    dv.add(d.divergence ? std::abs(d.divergence->from_velocity) : kNaN, e);
    nw.add(d.newton ? d.newton->normalized.max_abs() : kNaN, e);
  }
  s.measurements["energy"] = w.energy;
  s.measurements["closed_form_energy"] = base.energy;
}

void run_dirac_plane(const Resolved& r, const Fixture& fx, Suite& s, std::vector<Event>& cloud) {
  fx.allow({"p", "spin", "spinor_samples"});
  const auto p = fx.vec3("p", {1.0, 0.0, 0.0});
  const Spin spin = fx.spin();
  const int samples = fx.count("spinor_samples", 20);
  const SpinorWave w = config_guard([&] { return dirac_plane_wave(p, spin, r.k); });
  const PotentialField A = zero_potential();
  EvalContext ctx = make_context(r);
  cloud = sample_cloud(r.cloud.value_or(default_ball(r.seed, {}, 2.0, 100)), r.k.c);
  const GammaSet g = gamma_matrices();
  const Matrix4 factor = form_factor(g, r.k.c);
  const int nonzero =
      static_cast<int>(std::count(w.vanishing.begin(), w.vanishing.end(), false));

  auto& dg = s.check("dirac_gamma", 1e-12, 1e-6, "gamma-form residual / max|Psi|");
  auto& da = s.check("dirac_alphabeta", 1e-12, 1e-6, "alpha/beta-form residual / max|Psi|");
  auto& fe = s.check("form_equivalence", 1e-12, 1e-12,
                     "|R_gamma - M R_alphabeta| on random smooth spinors, M = (-i/c) beta");
  CheckBuilder* vc = nullptr;
  if (nonzero >= 2) {
    vc = &s.check("velocity_consistency", 1e-12, 1e-6,
                  "max componentwise difference of per-component velocities");
  } else {
    s.measurements["velocity_consistency"] = "skipped: fewer than two nonzero components";
  }
  auto& dk = s.check("dirac_to_kg", 1e-12, 1e-6, "squared Dirac operator on the fixture");
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Event& e = cloud[i];
    dg.add(guarded([&] { return spinor_max(dirac_residual(w, A, e, ctx, DiracForm::kGamma, g)); }), e);
    da.add(guarded([&] { return spinor_max(dirac_residual(w, A, e, ctx, DiracForm::kAlphaBeta, g)); }), e);
    fe.add(guarded([&] {
             const SpinorWave rs = random_smooth_spinor(r.seed + 1000 + i, Event{});
             const Spinor rg = dirac_residual(rs, A, e, ctx, DiracForm::kGamma, g);
             const Spinor rab = dirac_residual(rs, A, e, ctx, DiracForm::kAlphaBeta, g);
             const FourVector mapped = factor * FourVector{rab};
             return spinor_max(spinor_diff(rg, mapped.v));
           }),
           e);
    if (vc) {
      vc->add(guarded([&] { return spinor_velocity_consistency(w, A, e, ctx).max_deviation; }), e);
    }
    dk.add(guarded([&] { return spinor_max(dirac_to_kg_check(w, A, e, ctx, g).squared); }), e);
  }
  auto& ki = s.check("kg_operator_identity", 1e-8, 1e-6,
                     "|(gamma.p + imc)(gamma.p - imc) Psi - (p.p + m^2c^2) Psi| on random spinors");
  SplitRng rng(r.seed + 7);
  for (int i = 0; i < samples; ++i) {
    const Event e{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5),
                  rng.uniform(-1.5, 1.5)};
    const SpinorWave rs = random_smooth_spinor(r.seed + 5000 + static_cast<std::uint64_t>(i), Event{});
    ki.add(guarded([&] { return spinor_max(dirac_to_kg_check(rs, A, e, ctx, g).difference); }), e);
  }
  s.measurements["energy"] = w.energy;
}

void run_dirac_coulomb(const Resolved& r, const Fixture& fx, Suite& s, std::vector<Event>& cloud) {
  fx.allow({"z_alpha", "spin", "energy_scale", "scan_lo", "scan_hi"});
  const double za = fx.number("z_alpha", 0.4);
  const Spin spin = fx.spin();
  const double scale = fx.number("energy_scale", 1.0);
  const auto& k = r.k;
  const double mc2 = k.m * k.c * k.c;
  const double lo = fx.number("scan_lo", 0.85) * mc2;
  const double hi = fx.number("scan_hi", 0.95) * mc2;
  if (!(lo < hi)) config_error("scan_lo must be below scan_hi");
  const SpinorWave base = config_guard([&] { return dirac_coulomb_1s(za, k, spin); });
  const SpinorWave w = scale == 1.0 ? base
                                    : config_guard([&] {
                                        return dirac_coulomb_1s(za, k, spin, base.energy * scale);
                                      });
  // The Dirac fixture admits Z alpha up to 1; the catalog potential caps it at 1/2.
  const PotentialField A = config_guard([&] { return coulomb_potential(za, k); });
  EvalContext ctx = make_context(r);
  cloud = sample_cloud(r.cloud.value_or(default_ray()), k.c);
  const GammaSet g = gamma_matrices();

  auto& dg = s.check("dirac_gamma", 1e-10, 1e-6, "gamma-form residual / max|Psi|");
  auto& da = s.check("dirac_alphabeta", 1e-10, 1e-6, "alpha/beta-form residual / max|Psi|");
  auto& vd = s.measure("velocity_deviation",
                       "max componentwise difference of per-component velocities");
  for (const auto& e : cloud) {
    dg.add(guarded([&] { return spinor_max(dirac_residual(w, A, e, ctx, DiracForm::kGamma, g)); }), e);
    da.add(guarded([&] { return spinor_max(dirac_residual(w, A, e, ctx, DiracForm::kAlphaBeta, g)); }), e);
    vd.add(guarded([&] { return spinor_velocity_consistency(w, A, e, ctx).max_deviation; }), e);
  }
  const EnergyScan scan = energy_scan(
      [&](double energy) { return dirac_coulomb_1s(za, k, spin, energy); }, A, cloud, ctx, lo, hi);
  const double expected = mc2 * std::sqrt(1.0 - za * za);
  auto& es = s.check("energy_scan", 1e-6, 1e-6,
                     "|argmin_E residual - m c^2 sqrt(1 - (Z alpha)^2)|");
  es.add(std::abs(scan.energy - expected));
  s.measurements["energy_scan"] = {{"minimizer", scan.energy},
                                   {"objective", scan.objective},
                                   {"evaluations", scan.evaluations},
                                   {"expected", expected}};
  s.measurements["energy"] = w.energy;
}

void run_gauge_orbit(const Resolved& r, const Fixture& fx, Suite& s, std::vector<Event>& cloud) {
  fx.allow({"z_alpha", "chi_count", "chi_degree", "chi_scale"});
  const double za = fx.number("z_alpha", 0.4);
  const int chi_count = fx.count("chi_count", 10);
  const int chi_degree = fx.count("chi_degree", 2);
  const double chi_scale = fx.number("chi_scale", 1.0);
  if (chi_degree > 6) config_error("chi_degree must be at most 6");
  const auto& k = r.k;
  const ScalarWave w = config_guard([&] { return kg_coulomb_1s(za, k); });
  const PotentialField A = config_guard([&] { return coulomb_potential(za, k); });
  const Event center{2.0, 0.0, 0.0, 0.0};
  const SpinorWave spinor = random_smooth_spinor(r.seed + 11, center);
  EvalContext ctx = make_context(r);
  cloud = sample_cloud(r.cloud.value_or(default_ball(r.seed, center, 1.0, 100)), k.c);
  ctx.psi_floor = calibrate_psi_floor(w.field, cloud);
  const GammaSet g = gamma_matrices();

  auto& ui = s.check("u_invariance", 1e-9, 1e-6, "max |u' - u| under A -> A + d chi");
  auto& fi = s.check("field_strength_invariance", 1e-10, 1e-6, "max |F' - F|");
  auto& di = s.check("dirac_residual_invariance", 1e-10, 1e-6,
                     "max_k ||R'_k| - |R_k|| for a smooth spinor in the Coulomb field");
  auto& rt = s.check("gauge_round_trip", 1e-12, 1e-12,
                     "chi then -chi restores (A, psi): relative psi and absolute A error");
  for (int j = 0; j < chi_count; ++j) {
    const Polynomial4 poly =
        Polynomial4::random(r.seed + 100 + static_cast<std::uint64_t>(j), chi_degree, chi_scale, false);
    const GaugeFunction chi = GaugeFunction::from_polynomial(poly);
    const GaugedPair gp = gauge_transform(A, w.field, chi, k);
    const GaugedPair back = gauge_transform(gp.potential, gp.wave, chi.negated(), k);
    const SpinorWave spinor_g = gauge_transform_spinor(spinor, chi, k);
    for (const auto& e : cloud) {
      ui.add(guarded([&] {
               return (extract_u(gp.wave, gp.potential, e, ctx) - extract_u(w.field, A, e, ctx))
                   .max_abs();
             }),
             e);
      fi.add(guarded([&] {
               return (field_strength(gp.potential, e, ctx.method, k.c) -
                       field_strength(A, e, ctx.method, k.c))
                   .max_abs();
             }),
             e);
      di.add(guarded([&] {
               const Spinor r0 = dirac_residual(spinor, A, e, ctx, DiracForm::kGamma, g);
               const Spinor r1 = dirac_residual(spinor_g, gp.potential, e, ctx, DiracForm::kGamma, g);
               double worst = 0.0;
               for (std::size_t i = 0; i < 4; ++i)
                 worst = std::max(worst, std::abs(std::abs(r1[i]) - std::abs(r0[i])));
               return worst;
             }),
             e);
      rt.add(guarded([&] {
               const Complex p0 = w.field.value(e);
               const double dpsi = std::abs(back.wave.value(e) - p0) / std::abs(p0);
               const double da = (back.potential.value(e) - A.value(e)).max_abs();
               return std::max(dpsi, da);
             }),
             e);
    }
  }
  s.measurements["chi_count"] = chi_count;
  s.measurements["chi_degree"] = chi_degree;
}

void run_clifford(const Resolved& r, const Fixture& fx, Suite& s) {
  fx.allow({"gamma1_scale", "samples", "momentum_scale", "representation"});
  const double scale = fx.number("gamma1_scale", 1.0);
  const int samples = fx.count("samples", 100);
  const double pscale = fx.number("momentum_scale", 2.0);
  const Representation rep = parse_representation(fx.text("representation").value_or("dirac-standard"));
  GammaSet g = gamma_matrices(rep);
  g.gamma[0] = Complex(scale) * g.gamma[0];

  auto& cr = s.check("clifford_residual", 0.0, 0.0, "max |{g_mu, g_nu} - 2 delta I| (exact)");
  cr.add(clifford_residual(g));
  auto& sq = s.check("slash_square", 1e-12, 1e-12, "max |(gamma.P)^2 - (P.P) I| over random P");
  auto& fa = s.check("factorization", 1e-12, 1e-12,
                     "max |(gamma.P + imc)(gamma.P - imc) - (P.P + m^2c^2) I|");
  SplitRng rng(r.seed + 3);
  const Matrix4 id = Matrix4::identity();
  for (int i = 0; i < samples; ++i) {
    FourVector p;
    for (int mu = 0; mu < 4; ++mu)
      p[mu] = Complex(rng.uniform(-pscale, pscale), rng.uniform(-pscale, pscale));
    const Matrix4 gp = slash(g, p);
    sq.add((gp * gp - contract(p, p) * id).max_abs());
    fa.add(factorization_residual(g, p, r.k));
  }
  s.measurements["representation"] = to_string(rep);
  s.measurements["gamma1_scale"] = scale;
}

void run_action(const Resolved& r, const Fixture& fx, Suite& s) {
  fx.allow({"p", "z_alpha"});
  const auto p = fx.vec3("p", {1.0, 0.0, 0.0});
  const double za = fx.number("z_alpha", 0.4);
  const auto& k = r.k;
  const ScalarWave pw = config_guard([&] { return plane_wave(p, k); });
  const ScalarWave kg = config_guard([&] { return kg_coulomb_1s(za, k); });
  const PotentialField zero = zero_potential();
  const PotentialField coul = config_guard([&] { return coulomb_potential(za, k); });
  EvalContext ctx = make_context(r);

  auto& rc = s.check("plane_wave_reconstruction", 1e-12, 1e-12,
                     "|exp(i(Phi + theta)/hbar) - psi(end)| / |psi(end)|");
  auto& cf = s.check("plane_wave_closed_form", 1e-12, 1e-9, "|Phi - (p.dx - E dt)|");
  const std::vector<std::vector<Event>> plane_paths{
      {{0, 0, 0, 0}, {1, 0, 0, 0}},
      {{0, 0, 0, 0}, {0.5, 1.0, 0.0, 0.0}, {0.5, 1.0, -0.7, 0.8}, {1.2, 0.3, 0.2, 1.5}},
  };
  json plane = json::array();
  for (const auto& path : plane_paths) {
    const Event end = path.back(), start = path.front();
    const double expected = p[0] * (end.x1 - start.x1) + p[1] * (end.x2 - start.x2) +
                            p[2] * (end.x3 - start.x3) - pw.energy * (end.t - start.t);
    double phi_re = kNaN;
    rc.add(guarded([&] {
             const ActionResult a = action_integral(pw.field, zero, path, ctx);
             phi_re = a.phi.real();
             cf.add(std::abs(a.phi - expected), end);
             return a.reconstruction_error;
           }),
           end);
    plane.push_back({{"phi", phi_re}, {"expected", expected}});
  }

  auto& pi = s.check("kg_path_independence", 1e-8, 1e-6,
                     "|Phi_A - Phi_B| for two polylines with shared endpoints");
  auto& lp = s.check("kg_closed_loop", 1e-8, 1e-6, "|Phi| around closed loops");
  auto& kr = s.check("kg_reconstruction", 1e-8, 1e-6,
                     "|exp(i(Phi + theta)/hbar) - psi(end)| / |psi(end)|");
  const std::vector<Event> path_a{{1, 0, 0, 0}, {3, 0, 0, 0}};
  const std::vector<Event> path_b{{1, 0, 0, 0}, {1, 1.5, 0, 0}, {3, 1, 0.5, 0}, {3, 0, 0, 0}};
  json kgj;
  pi.add(guarded([&] {
           const ActionResult a = action_integral(kg.field, coul, path_a, ctx);
           const ActionResult b = action_integral(kg.field, coul, path_b, ctx);
           kr.add(a.reconstruction_error, path_a.back());
           kr.add(b.reconstruction_error, path_b.back());
           kgj = {{"phi_a", {a.phi.real(), a.phi.imag()}}, {"phi_b", {b.phi.real(), b.phi.imag()}}};
           return std::abs(a.phi - b.phi);
         }),
         path_a.back());
  const std::vector<std::vector<Event>> loops{
      {{1.5, -0.5, 0, 0}, {2.5, -0.5, 0, 0}, {2.5, 0.5, 0, 0}, {1.5, 0.5, 0, 0}, {1.5, -0.5, 0, 0}},
      {{1, 1, 0, 0}, {2, 1, 0, 1}, {2, 1, 1, 1}, {1, 1, 1, 0}, {1, 1, 0, 0}},
  };
  for (const auto& loop : loops) {
    lp.add(guarded([&] { return std::abs(action_integral(kg.field, coul, loop, ctx).phi); }),
           loop.front());
  }
  s.measurements["plane_wave"] = plane;
  s.measurements["kg_coulomb"] = kgj;
}

void run_worldline(const Resolved& r, const Fixture& fx, Suite& s) {
  fx.allow({"radius", "ct0", "line_velocity", "line_t0", "boost_count", "max_boost",
            "helix_radius", "helix_omega", "cells", "pierce_csv"});
  const auto& k = r.k;
  const double radius = fx.number("radius", 1.0);
  const double ct0 = fx.number("ct0", 0.5);
  const double line_v = fx.number("line_velocity", 0.5);
  const double line_t0 = fx.number("line_t0", 0.3);
  const int boosts = fx.count("boost_count", 20);
  const double max_boost = fx.number("max_boost", 0.99);
  const double helix_r = fx.number("helix_radius", 1.0);
  const double helix_w = fx.number("helix_omega", 0.5);
  PierceOptions opt;
  opt.cells = fx.count("cells", 4096);
  if (!(std::abs(max_boost) < 1.0)) config_error("max_boost must be below 1 (units of c)");
  if (!(std::abs(line_v) < k.c)) config_error("line_velocity must be below c");

  const Worldline circle = config_guard([&] { return make_circle_x1x4({radius}, k.c); });
  const double t0 = ct0 / k.c;
  const auto pts = pierce_points(circle, t0, opt);

  auto& cnt = s.check("circle_pierce_count", 0.0, 0.0, "|#points - 2| on the slice c t0");
  cnt.add(std::abs(static_cast<double>(pts.size()) - 2.0));
  auto& cx = s.check("circle_pierce_x1", 1e-9, 1e-9, "|x1 - (+/-)sqrt(R^2 - (c t0)^2)|");
  std::vector<double> xs;
  for (const auto& p : pts) xs.push_back(p.event.x1);
  std::sort(xs.begin(), xs.end());
  const double expect = std::sqrt(std::max(0.0, radius * radius - ct0 * ct0));
  if (xs.size() == 2) {
    cx.add(std::abs(xs[0] + expect));
    cx.add(std::abs(xs[1] - expect));
  } else {
    cx.add(kNaN);
  }
  auto& slice = s.check("slice_error", 1e-10, 1e-10, "|t(lambda) - t0| at every pierce point");
  auto& shell = s.check("timelike_mass_shell", 1e-10, 1e-10,
                        "|u.u + c^2| at timelike pierce points");
  auto record = [&](const std::vector<PiercePoint>& list, double tslice) {
    for (const auto& p : list) {
      slice.add(std::abs(p.event.t - tslice), p.event);
      if (p.u) shell.add(std::abs(contract(*p.u, *p.u) + k.c * k.c), p.event);
    }
  };
  record(pts, t0);

  auto& tan = s.check("circle_tangent", 0.0, 0.0,
                      "slice c t0 = R touches once, flagged tangent (0 = as expected)");
  const auto touch = pierce_points(circle, radius / k.c, opt);
  tan.add(touch.size() == 1 && touch[0].tangent ? 0.0 : 1.0);
  record(touch, radius / k.c);

  auto& single = s.check("boosted_line_single_pierce", 0.0, 0.0,
                         "|#points - 1| for a timelike line under boosts up to max_boost");
  auto& helix1 = s.check("boosted_helix_single_pierce", 0.0, 0.0,
                         "|#points - 1| for a timelike helix under the same boosts");
  const Worldline line = make_line({Event{}, {line_v, 0.0, 0.0}, -100.0, 100.0}, k.c);
  const Worldline helix = config_guard([&] {
    return make_helix({helix_r, helix_w, -100.0, 100.0}, k.c);
  });
  json helix_classes = json::array();
  for (int i = 0; i < boosts; ++i) {
    const double v = boosts == 1 ? max_boost * k.c
                                 : (-max_boost + 2.0 * max_boost * i / (boosts - 1)) * k.c;
    const auto lp = pierce_points(boost_worldline(line, v), line_t0, opt);
    single.add(std::abs(static_cast<double>(lp.size()) - 1.0));
    record(lp, line_t0);
    const auto hp = pierce_points(boost_worldline(helix, v), line_t0, opt);
    helix1.add(std::abs(static_cast<double>(hp.size()) - 1.0));
    record(hp, line_t0);
  }

  // Multiplicity appears only once the curve has spacelike arcs.
  json circle_json = json::array();
  for (const auto& p : pts) {
    circle_json.push_back({{"lambda", p.lambda},
                           {"event", event_json(p.event)},
                           {"class", to_string(p.speed)},
                           {"tangent", p.tangent}});
  }
  s.measurements["circle_points"] = circle_json;
  s.measurements["circle_class_lambda_0"] = to_string(classify_speed(circle, 0.0));
  s.measurements["circle_class_lambda_pi_2"] = to_string(classify_speed(circle, M_PI / 2));
  {
    const Worldline fast = make_helix({1.0, 2.0 * M_PI, 0.0, 2.0}, k.c);
    const auto fp = pierce_points(boost_worldline(fast, 0.9 * k.c), 0.5, opt);
    s.measurements["superluminal_helix_boosted_points"] = static_cast<int>(fp.size());
    s.measurements["superluminal_helix_class"] = to_string(classify_speed(fast, 0.0));
  }
  if (auto path = fx.text("pierce_csv")) {
    std::ofstream os(*path, std::ios::binary);
    if (!os) fail(ErrorCode::kIo, "cannot write pierce CSV to " + *path);
    os << pierce_points_csv(pts);
    if (!os) fail(ErrorCode::kIo, "failed writing pierce CSV to " + *path);
  }
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

DerivativeMethod default_method(const std::string& scenario) {
  if (scenario == "dirac-coulomb-1s") return DerivativeMethod::numeric(1e-3);
  return DerivativeMethod::analytic();
}

}  // namespace

Report run_scenario(const ScenarioConfig& cfg) {
  require_known(cfg.scenario);
  const auto started = std::chrono::steady_clock::now();
  Resolved r;
  r.k = cfg.constants;
  try {
    r.k.validate();
  } catch (const Error& e) {
    config_error(e.what());
  }
  r.method = cfg.method.value_or(default_method(cfg.scenario));
  r.seed = cfg.seed.value_or(kDefaultSeed);
  r.cloud = cfg.cloud;
  if (r.cloud && r.cloud->kind == CloudSpec::Kind::kRandomBall && !r.cloud->seed) {
    config_error("random-ball clouds need an explicit rng seed (cloud.seed or --seed)");
  }

  const bool analytic = r.method.is_analytic();
  Suite suite(cfg, analytic);
  const Fixture fx(cfg.fixture, cfg.scenario.c_str());
  std::vector<Event> cloud;
  const auto& name = cfg.scenario;
  if (name == "plane-wave") run_plane_wave(r, fx, suite, cloud);
  else if (name == "kg-coulomb-1s") run_kg_coulomb(r, fx, suite, cloud);
  else if (name == "dirac-plane-wave") run_dirac_plane(r, fx, suite, cloud);
  else if (name == "dirac-coulomb-1s") run_dirac_coulomb(r, fx, suite, cloud);
  else if (name == "gauge-orbit") run_gauge_orbit(r, fx, suite, cloud);
  else if (name == "clifford") run_clifford(r, fx, suite);
  else if (name == "action-path") run_action(r, fx, suite);
  else if (name == "worldline-pierce") run_worldline(r, fx, suite);

  Report report;
  report.toolkit_version = toolkit_version();
  json echo{{"scenario", cfg.scenario},
            {"constants",
             {{"hbar", r.k.hbar}, {"c", r.k.c}, {"m", r.k.m}, {"q", r.k.q}}},
            {"fixture", cfg.fixture},
            {"derivative",
             {{"mode", mode_name(r.method.mode)}, {"h", r.method.h},
              {"richardson", r.method.richardson}}},
            {"seed", r.seed},
            {"tolerances", cfg.tolerances}};
  if (r.cloud) echo["cloud"] = cloud_json(*r.cloud);
  echo["sample_count"] = cloud.size();
  report.scenario = std::move(echo);
  suite.finish(report);
  report.measurements = suite.measurements;
  if (cfg.timestamp) {
    report.timestamp = utc_timestamp();
    report.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  }
  return report;
}

std::string render(const Report& r, OutputFormat f) {
  return f == OutputFormat::kJson ? to_json_string(r) : to_csv(r);
}

void write_report(const Report& r, OutputFormat f, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail(ErrorCode::kIo, "cannot open report output '" + path + "'");
  os << render(r, f);
  os.flush();
  if (!os) fail(ErrorCode::kIo, "failed writing report to '" + path + "'");
}

}  // namespace vfield
