#include "vfield/vfield.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "vfield/dirac.hpp"
#include "vfield/errors.hpp"
#include "vfield/fields.hpp"
#include "vfield/scenario.hpp"
#include "vfield/velocityfield.hpp"
#include "vfield/wavefunctions.hpp"
#include "vfield/worldline.hpp"

struct vf_potential {
  vfield::PotentialField field;
};
struct vf_scalar_wave {
  vfield::ScalarWave wave;
};
struct vf_spinor_wave {
  vfield::SpinorWave wave;
};
struct vf_worldline {
  vfield::Worldline line;
};
struct vf_report {
  vfield::Report report;
  vfield::OutputFormat format = vfield::OutputFormat::kJson;
  std::string output_path;
  bool has_output_path = false;
  std::string name_scratch;
};

namespace {

using namespace vfield;

thread_local std::string g_last_error;

vf_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::kInvalidArgument: return VF_INVALID_ARGUMENT;
    case ErrorCode::kInvalidBoost: return VF_INVALID_BOOST;
    case ErrorCode::kSingularPoint: return VF_SINGULAR_POINT;
    case ErrorCode::kNearZeroWavefunction: return VF_NEAR_ZERO_WAVEFUNCTION;
    case ErrorCode::kInsufficientComponents: return VF_INSUFFICIENT_COMPONENTS;
    case ErrorCode::kUnsupportedConfiguration: return VF_UNSUPPORTED_CONFIGURATION;
    case ErrorCode::kQuadratureFailure: return VF_QUADRATURE_FAILURE;
    case ErrorCode::kDegenerateParameter: return VF_DEGENERATE_PARAMETER;
    case ErrorCode::kUnknownRepresentation: return VF_UNKNOWN_REPRESENTATION;
    case ErrorCode::kConfig: return VF_CONFIG_ERROR;
    case ErrorCode::kIo: return VF_IO_ERROR;
    case ErrorCode::kUnknownScenario: return VF_UNKNOWN_SCENARIO;
  }
  return VF_INTERNAL_ERROR;
}

vf_status set_error(vf_status s, const std::string& what) {
  g_last_error = what;
  return s;
}

template <class F>
vf_status guard(F&& fn) {
  try {
    fn();
    return VF_OK;
  } catch (const Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return set_error(VF_CONFIG_ERROR, std::string("malformed JSON: ") + e.what());
  } catch (const std::bad_alloc&) {
    return set_error(VF_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return set_error(VF_INTERNAL_ERROR, e.what());
  } catch (...) {
    return set_error(VF_INTERNAL_ERROR, "unknown exception");
  }
}

void need(const void* p, const char* what) {
  if (!p) fail(ErrorCode::kInvalidArgument, std::string("null ") + what);
}

Event ev(vf_event e) { return {e.x1, e.x2, e.x3, e.t}; }
vf_event ev(const Event& e) { return {e.x1, e.x2, e.x3, e.t}; }
vf_complex cx(Complex z) { return {z.real(), z.imag()}; }
Complex cx(vf_complex z) { return {z.re, z.im}; }

PhysicalConstants constants(const vf_constants* k) {
  need(k, "constants");
  PhysicalConstants out{k->hbar, k->c, k->m, k->q};
  out.validate();
  return out;
}

EvalContext context(const vf_context* c) {
  need(c, "context");
  EvalContext out;
  out.constants = constants(&c->constants);
  out.method.mode = c->mode == VF_NUMERIC ? DerivativeMethod::Mode::kCentralDifference
                                          : DerivativeMethod::Mode::kAnalytic;
  out.method.h = c->h;
  out.method.richardson = c->richardson != 0;
  out.method.validate();
  out.psi_floor = c->psi_floor;
  return out;
}

void put(const FourVector& v, vf_complex out[4]) {
  for (int i = 0; i < 4; ++i) out[i] = cx(v[i]);
}

void put(const Matrix4& m, vf_complex out[16]) {
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out[4 * r + c] = cx(m(r, c));
}

OutputFormat format_or(vf_format f, OutputFormat fallback) {
  if (f == VF_FORMAT_DEFAULT) return fallback;
  if (f == VF_FORMAT_JSON) return OutputFormat::kJson;
  if (f == VF_FORMAT_CSV) return OutputFormat::kCsv;
  fail(ErrorCode::kInvalidArgument, "unknown output format");
}

vf_speed_class speed(SpeedClass s) {
  switch (s) {
    case SpeedClass::kTimelike: return VF_TIMELIKE;
    case SpeedClass::kNull: return VF_NULL;
    case SpeedClass::kSpacelike: return VF_SPACELIKE;
  }
  return VF_NULL;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = list_scenarios();
  return names;
}

}  // namespace

extern "C" {

const char* vf_version(void) { return VFIELD_VERSION_STRING; }

const char* vf_last_error(void) { return g_last_error.c_str(); }

const char* vf_status_name(vf_status s) {
  switch (s) {
    case VF_OK: return "ok";
    case VF_INVALID_ARGUMENT: return "invalid argument";
    case VF_INVALID_BOOST: return "invalid boost";
    case VF_SINGULAR_POINT: return "singular point";
    case VF_NEAR_ZERO_WAVEFUNCTION: return "near-zero wavefunction";
    case VF_INSUFFICIENT_COMPONENTS: return "insufficient components";
    case VF_UNSUPPORTED_CONFIGURATION: return "unsupported configuration";
    case VF_QUADRATURE_FAILURE: return "quadrature failure";
    case VF_DEGENERATE_PARAMETER: return "degenerate parameter";
    case VF_UNKNOWN_REPRESENTATION: return "unknown representation";
    case VF_CONFIG_ERROR: return "config error";
    case VF_IO_ERROR: return "i/o error";
    case VF_UNKNOWN_SCENARIO: return "unknown scenario";
    case VF_BUFFER_TOO_SMALL: return "buffer too small";
    case VF_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

vf_constants vf_default_constants(void) { return {1.0, 1.0, 1.0, -1.0}; }

vf_context vf_default_context(void) {
  return {vf_default_constants(), VF_ANALYTIC, 1e-3, 0, 1e-12};
}

vf_status vf_potential_zero(vf_potential** out) {
  return guard([&] {
    need(out, "output");
    *out = new vf_potential{zero_potential()};
  });
}

vf_status vf_potential_coulomb(double z_alpha, const vf_constants* k, vf_potential** out) {
  return guard([&] {
    need(out, "output");
    *out = new vf_potential{coulomb_potential(z_alpha, constants(k))};
  });
}

vf_status vf_potential_value(const vf_potential* a, vf_event e, vf_complex out[4]) {
  return guard([&] {
    need(a, "potential");
    need(out, "output");
    put(a->field.value(ev(e)), out);
  });
}

vf_status vf_field_strength(const vf_potential* a, vf_event e, const vf_context* ctx,
                            vf_complex out[16]) {
  return guard([&] {
    need(a, "potential");
    need(out, "output");
    const EvalContext c = context(ctx);
    put(field_strength(a->field, ev(e), c.method, c.constants.c), out);
  });
}

void vf_potential_destroy(vf_potential* a) { delete a; }

vf_status vf_scalar_plane_wave(const double p[3], const vf_constants* k, vf_scalar_wave** out) {
  return guard([&] {
    need(p, "momentum");
    need(out, "output");
    *out = new vf_scalar_wave{plane_wave({p[0], p[1], p[2]}, constants(k))};
  });
}

vf_status vf_scalar_kg_coulomb_1s(double z_alpha, const vf_constants* k, vf_scalar_wave** out) {
  return guard([&] {
    need(out, "output");
    *out = new vf_scalar_wave{kg_coulomb_1s(z_alpha, constants(k))};
  });
}

vf_status vf_scalar_kg_coulomb_1s_detuned(double z_alpha, double energy, const vf_constants* k,
                                          vf_scalar_wave** out) {
  return guard([&] {
    need(out, "output");
    *out = new vf_scalar_wave{kg_coulomb_1s(z_alpha, constants(k), energy)};
  });
}

vf_status vf_scalar_value(const vf_scalar_wave* w, vf_event e, vf_complex* out) {
  return guard([&] {
    need(w, "wave");
    need(out, "output");
    *out = cx(w->wave.field.value(ev(e)));
  });
}

double vf_scalar_energy(const vf_scalar_wave* w) { return w ? w->wave.energy : 0.0; }

vf_status vf_gauge_transform_polynomial(const vf_potential* a, const vf_scalar_wave* w,
                                        size_t n_terms, const double* coefs, const int* exps,
                                        const vf_constants* k, vf_potential** a_out,
                                        vf_scalar_wave** w_out) {
  return guard([&] {
    need(a, "potential");
    need(w, "wave");
    need(a_out, "output");
    need(w_out, "output");
    if (n_terms > 0) {
      need(coefs, "coefficients");
      need(exps, "exponents");
    }
    std::vector<Polynomial4::Term> terms;
    for (size_t i = 0; i < n_terms; ++i) {
      Polynomial4::Term t;
      t.coef = coefs[i];
      for (size_t j = 0; j < 4; ++j) {
        if (exps[4 * i + j] < 0) fail(ErrorCode::kInvalidArgument, "negative exponent");
        t.exps[j] = exps[4 * i + j];
      }
      terms.push_back(t);
    }
    const GaugeFunction chi = GaugeFunction::from_polynomial(Polynomial4(std::move(terms)));
    const PhysicalConstants pk = constants(k);
    GaugedPair g = gauge_transform(a->field, w->wave.field, chi, pk);
    ScalarWave nw = w->wave;
    nw.field = std::move(g.wave);
    nw.label += " [gauge " + chi.description + "]";
    auto* pa = new vf_potential{std::move(g.potential)};
    *w_out = new vf_scalar_wave{std::move(nw)};
    *a_out = pa;
  });
}

void vf_scalar_destroy(vf_scalar_wave* w) { delete w; }

vf_status vf_extract_u(const vf_scalar_wave* w, const vf_potential* a, vf_event e,
                       const vf_context* ctx, vf_complex out[4]) {
  return guard([&] {
    need(w, "wave");
    need(a, "potential");
    need(out, "output");
    put(extract_u(w->wave.field, a->field, ev(e), context(ctx)), out);
  });
}

vf_status vf_mass_shell_residual(const vf_scalar_wave* w, const vf_potential* a, vf_event e,
                                 const vf_context* ctx, vf_complex* out) {
  return guard([&] {
    need(w, "wave");
    need(a, "potential");
    need(out, "output");
    *out = cx(mass_shell_residual(w->wave.field, a->field, ev(e), context(ctx)));
  });
}

vf_status vf_newton_residual(const vf_scalar_wave* w, const vf_potential* a, vf_event e,
                             const vf_context* ctx, vf_complex out[4]) {
  return guard([&] {
    need(w, "wave");
    need(a, "potential");
    need(out, "output");
    put(newton_residual(w->wave.field, a->field, ev(e), context(ctx)).normalized, out);
  });
}

vf_status vf_curl_k(const vf_scalar_wave* w, const vf_potential* a, vf_event e,
                    const vf_context* ctx, vf_complex out[16]) {
  return guard([&] {
    need(w, "wave");
    need(a, "potential");
    need(out, "output");
    put(curl_K(w->wave.field, a->field, ev(e), context(ctx)), out);
  });
}

vf_status vf_divergence(const vf_scalar_wave* w, const vf_potential* a, vf_event e,
                        const vf_context* ctx, vf_complex* from_velocity,
                        vf_complex* from_log_laplacian) {
  return guard([&] {
    need(w, "wave");
    need(a, "potential");
    const DivergenceResult d = divergence_mu(w->wave.field, a->field, ev(e), context(ctx));
    if (from_velocity) *from_velocity = cx(d.from_velocity);
    if (from_log_laplacian) *from_log_laplacian = cx(d.from_log_laplacian);
  });
}

vf_status vf_kg_residual(const vf_scalar_wave* w, const vf_potential* a, vf_event e,
                         const vf_context* ctx, vf_complex* out) {
  return guard([&] {
    need(w, "wave");
    need(a, "potential");
    need(out, "output");
    *out = cx(kg_residual(w->wave.field, a->field, ev(e), context(ctx)).value);
  });
}

vf_status vf_nonlinear_residual(const vf_scalar_wave* w, const vf_potential* a, vf_event e,
                                const vf_context* ctx, vf_complex* out) {
  return guard([&] {
    need(w, "wave");
    need(a, "potential");
    need(out, "output");
    *out = cx(nonlinear_wave_residual(w->wave.field, a->field, ev(e), context(ctx)));
  });
}

vf_status vf_action_integral(const vf_scalar_wave* w, const vf_potential* a,
                             const vf_event* path, size_t n, const vf_context* ctx,
                             vf_complex* phi, double* reconstruction_error) {
  return guard([&] {
    need(w, "wave");
    need(a, "potential");
    need(path, "path");
    std::vector<Event> pts;
    for (size_t i = 0; i < n; ++i) pts.push_back(ev(path[i]));
    const ActionResult r = action_integral(w->wave.field, a->field, pts, context(ctx));
    if (phi) *phi = cx(r.phi);
    if (reconstruction_error) *reconstruction_error = r.reconstruction_error;
  });
}

vf_status vf_spinor_dirac_plane_wave(const double p[3], vf_spin spin, const vf_constants* k,
                                     vf_spinor_wave** out) {
  return guard([&] {
    need(p, "momentum");
    need(out, "output");
    const Spin s = spin == VF_SPIN_DOWN ? Spin::kDown : Spin::kUp;
    *out = new vf_spinor_wave{dirac_plane_wave({p[0], p[1], p[2]}, s, constants(k))};
  });
}

vf_status vf_spinor_dirac_coulomb_1s(double z_alpha, vf_spin spin, const vf_constants* k,
                                     vf_spinor_wave** out) {
  return guard([&] {
    need(out, "output");
    const Spin s = spin == VF_SPIN_DOWN ? Spin::kDown : Spin::kUp;
    *out = new vf_spinor_wave{dirac_coulomb_1s(z_alpha, constants(k), s)};
  });
}

vf_status vf_spinor_value(const vf_spinor_wave* w, vf_event e, vf_complex out[4]) {
  return guard([&] {
    need(w, "wave");
    need(out, "output");
    const Spinor s = spinor_value(w->wave, ev(e));
    for (size_t i = 0; i < 4; ++i) out[i] = cx(s[i]);
  });
}

double vf_spinor_energy(const vf_spinor_wave* w) { return w ? w->wave.energy : 0.0; }

vf_status vf_dirac_residual(const vf_spinor_wave* w, const vf_potential* a, vf_event e,
                            const vf_context* ctx, vf_dirac_form form, vf_complex out[4]) {
  return guard([&] {
    need(w, "wave");
    need(a, "potential");
    need(out, "output");
    const DiracForm f = form == VF_FORM_ALPHA_BETA ? DiracForm::kAlphaBeta : DiracForm::kGamma;
    const Spinor r = dirac_residual(w->wave, a->field, ev(e), context(ctx), f);
    for (size_t i = 0; i < 4; ++i) out[i] = cx(r[i]);
  });
}

vf_status vf_spinor_velocity_consistency(const vf_spinor_wave* w, const vf_potential* a,
                                         vf_event e, const vf_context* ctx,
                                         double* max_deviation) {
  return guard([&] {
    need(w, "wave");
    need(a, "potential");
    need(max_deviation, "output");
    *max_deviation =
        spinor_velocity_consistency(w->wave, a->field, ev(e), context(ctx)).max_deviation;
  });
}

void vf_spinor_destroy(vf_spinor_wave* w) { delete w; }

vf_status vf_gamma_matrix(int mu, vf_complex out[16]) {
  return guard([&] {
    need(out, "output");
    if (mu < 0 || mu > 3) fail(ErrorCode::kInvalidArgument, "gamma index must be 0..3");
    put(gamma_matrices().gamma[static_cast<size_t>(mu)], out);
  });
}

double vf_clifford_residual(void) { return clifford_residual(gamma_matrices()); }

vf_status vf_factorization_residual(const vf_complex p[4], const vf_constants* k, double* out) {
  return guard([&] {
    need(p, "momentum");
    need(out, "output");
    FourVector v;
    for (int i = 0; i < 4; ++i) v[i] = cx(p[i]);
    *out = factorization_residual(gamma_matrices(), v, constants(k));
  });
}

vf_status vf_worldline_line(vf_event origin, const double velocity[3], double lambda_min,
                            double lambda_max, double c, vf_worldline** out) {
  return guard([&] {
    need(velocity, "velocity");
    need(out, "output");
    LineParams p{ev(origin), {velocity[0], velocity[1], velocity[2]}, lambda_min, lambda_max};
    *out = new vf_worldline{make_line(p, c)};
  });
}

vf_status vf_worldline_helix(double radius, double omega, double lambda_min, double lambda_max,
                             double c, vf_worldline** out) {
  return guard([&] {
    need(out, "output");
    *out = new vf_worldline{make_helix({radius, omega, lambda_min, lambda_max}, c)};
  });
}

vf_status vf_worldline_circle(double radius, double c, vf_worldline** out) {
  return guard([&] {
    need(out, "output");
    *out = new vf_worldline{make_circle_x1x4({radius}, c)};
  });
}

vf_status vf_worldline_boost(const vf_worldline* w, double v, vf_worldline** out) {
  return guard([&] {
    need(w, "worldline");
    need(out, "output");
    *out = new vf_worldline{boost_worldline(w->line, v)};
  });
}

vf_status vf_worldline_position(const vf_worldline* w, double lambda, vf_event* out) {
  return guard([&] {
    need(w, "worldline");
    need(out, "output");
    *out = ev(w->line.position(lambda));
  });
}

vf_status vf_worldline_speed_class(const vf_worldline* w, double lambda, vf_speed_class* out) {
  return guard([&] {
    need(w, "worldline");
    need(out, "output");
    *out = speed(classify_speed(w->line, lambda));
  });
}

void vf_worldline_destroy(vf_worldline* w) { delete w; }

vf_status vf_pierce_points(const vf_worldline* w, double t0, vf_pierce* out, size_t cap,
                           size_t* count) {
  bool short_buffer = false;
  const vf_status s = guard([&] {
    need(w, "worldline");
    need(count, "count");
    if (cap > 0) need(out, "output");
    const auto pts = pierce_points(w->line, t0);
    *count = pts.size();
    for (size_t i = 0; i < pts.size() && i < cap; ++i) {
      vf_pierce& p = out[i];
      p.lambda = pts[i].lambda;
      p.event = ev(pts[i].event);
      p.speed = speed(pts[i].speed);
      p.tangent = pts[i].tangent ? 1 : 0;
      p.has_u = pts[i].u ? 1 : 0;
      for (int mu = 0; mu < 4; ++mu) p.u[mu] = pts[i].u ? cx((*pts[i].u)[mu]) : vf_complex{0, 0};
    }
    short_buffer = pts.size() > cap;
  });
  if (s == VF_OK && short_buffer) return set_error(VF_BUFFER_TOO_SMALL, "pierce buffer too small");
  return s;
}

vf_run_options vf_default_run_options(void) {
  return {VF_FORMAT_DEFAULT, nullptr, 0.0, -1, 0, 0, 0};
}

size_t vf_scenario_count(void) { return scenario_names().size(); }

const char* vf_scenario_name(size_t index) {
  const auto& names = scenario_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

vf_status vf_run_scenario(const char* name, const char* config_json, const vf_run_options* opts,
                          vf_report** out) {
  return guard([&] {
    need(out, "output");
    *out = nullptr;
    if (!name && !config_json) fail(ErrorCode::kConfig, "need a scenario name or a config");
    ScenarioConfig cfg;
    if (config_json) {
      cfg = parse_config(nlohmann::json::parse(config_json));
      if (name && cfg.scenario != name) {
        fail(ErrorCode::kConfig, "config names scenario '" + cfg.scenario +
                                     "' but '" + name + "' was requested");
      }
    } else {
      cfg = default_config(name);
    }
    if (opts) {
      RunOverrides o;
      if (opts->out_path) o.output_path = opts->out_path;
      if (opts->format != VF_FORMAT_DEFAULT) o.format = format_or(opts->format, cfg.format);
      if (opts->h > 0.0) o.h = opts->h;
      if (opts->mode == VF_ANALYTIC) o.mode = DerivativeMethod::Mode::kAnalytic;
      else if (opts->mode == VF_NUMERIC) o.mode = DerivativeMethod::Mode::kCentralDifference;
      else if (opts->mode != -1) fail(ErrorCode::kConfig, "unknown derivative mode");
      if (opts->has_seed) o.seed = opts->seed;
      o.no_timestamp = opts->no_timestamp != 0;
      apply_overrides(cfg, o);
    }
    auto* r = new vf_report;
    try {
      r->report = run_scenario(cfg);
    } catch (...) {
      delete r;
      throw;
    }
    r->format = cfg.format;
    if (cfg.output_path) {
      r->output_path = *cfg.output_path;
      r->has_output_path = true;
    }
    *out = r;
  });
}

int vf_report_exit_code(const vf_report* r) { return r ? r->report.exit_code() : 2; }

int vf_report_all_passed(const vf_report* r) { return r && r->report.all_passed ? 1 : 0; }

size_t vf_report_check_count(const vf_report* r) { return r ? r->report.checks.size() : 0; }

vf_status vf_report_check(const vf_report* r, size_t index, const char** name, double* linf,
                          int* passed) {
  return guard([&] {
    need(r, "report");
    if (index >= r->report.checks.size()) fail(ErrorCode::kInvalidArgument, "check index out of range");
    const auto& c = r->report.checks[index];
    if (name) *name = c.name.c_str();
    if (linf) *linf = c.linf;
    if (passed) *passed = c.passed ? 1 : 0;
  });
}

const char* vf_report_output_path(const vf_report* r) {
  return r && r->has_output_path ? r->output_path.c_str() : nullptr;
}

vf_status vf_report_render(const vf_report* r, vf_format format, char* buf, size_t cap,
                           size_t* len) {
  bool short_buffer = false;
  const vf_status s = guard([&] {
    need(r, "report");
    const std::string text = render(r->report, format_or(format, r->format));
    if (len) *len = text.size();
    if (!buf) return;
    if (cap == 0) {
      short_buffer = true;
      return;
    }
    const size_t n = std::min(cap - 1, text.size());
    std::memcpy(buf, text.data(), n);
    buf[n] = '\0';
    short_buffer = n < text.size();
  });
  if (s == VF_OK && short_buffer) return set_error(VF_BUFFER_TOO_SMALL, "render buffer too small");
  return s;
}

vf_status vf_report_write(const vf_report* r, const char* path, vf_format format) {
  return guard([&] {
    need(r, "report");
    std::string target;
    if (path) target = path;
    else if (r->has_output_path) target = r->output_path;
    else fail(ErrorCode::kInvalidArgument, "no output path given or configured");
    write_report(r->report, format_or(format, r->format), target);
  });
}

void vf_report_destroy(vf_report* r) { delete r; }

}  // extern "C"
