#include "vfield/velocityfield.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vfield/errors.hpp"

namespace vfield {

namespace {

void require_regular(const ScalarField& psi, const Event& e, double floor, Complex v) {
  (void)psi;
  if (!(std::abs(v) > floor)) {
    std::ostringstream os;
    os << "|psi| = " << std::abs(v) << " <= floor " << floor << " at (" << e.x1 << ", "
       << e.x2 << ", " << e.x3 << ", t=" << e.t << ")";
    fail(ErrorCode::kNearZeroWavefunction, os.str());
  }
}

FourVector velocity_from(const FourVector& dlog_psi, const FourVector& a,
                         const PhysicalConstants& k) {
  FourVector u;
  for (int mu = 0; mu < 4; ++mu)
    u[mu] = (-kI * k.hbar * dlog_psi[mu] - k.q * a[mu]) / k.m;
  return u;
}

// Everything the residuals need at one event, evaluated once.
struct Local {
  Jet jet;
  FourVector dlog;
  FourVector a;
  Matrix4 da;
  FourVector u;
  Matrix4 jac;  // jac(nu, mu) = d_nu u_mu
};

Matrix4 jacobian_from(const Jet& jet, const Matrix4& da, const PhysicalConstants& k) {
  Matrix4 J;
  const Complex inv = 1.0 / jet.value;
  for (int nu = 0; nu < 4; ++nu)
    for (int mu = 0; mu < 4; ++mu) {
      const Complex dd_log = jet.hess(nu, mu) * inv - jet.grad[nu] * jet.grad[mu] * inv * inv;
      J(nu, mu) = (-kI * k.hbar * dd_log - k.q * da(nu, mu)) / k.m;
    }
  return J;
}

Matrix4 numeric_jacobian(const ScalarField& psi, const PotentialField& A, const Event& e,
                         const EvalContext& ctx) {
  auto u_at = [&](const Event& x) { return extract_u(psi, A, x, ctx); };
  const auto rows = central_grad4(u_at, e, ctx.method, ctx.constants.c);
  Matrix4 J;
  for (int nu = 0; nu < 4; ++nu)
    for (int mu = 0; mu < 4; ++mu) J(nu, mu) = rows[static_cast<std::size_t>(nu)][mu];
  return J;
}

Local local_state(const ScalarField& psi, const PotentialField& A, const Event& e,
                  const EvalContext& ctx) {
  const auto& k = ctx.constants;
  Local s;
  s.jet = evaluate_jet(psi, e, ctx.method, k.c);
  require_regular(psi, e, ctx.psi_floor, s.jet.value);
  s.dlog = s.jet.grad;
  s.dlog *= 1.0 / s.jet.value;
  s.a = A.value(e);
  s.da = potential_gradient(A, e, ctx.method, k.c);
  s.u = velocity_from(s.dlog, s.a, k);
  s.jac = ctx.method.is_analytic() ? jacobian_from(s.jet, s.da, k)
                                   : numeric_jacobian(psi, A, e, ctx);
  return s;
}

Complex trace(const Matrix4& m) { return m(0, 0) + m(1, 1) + m(2, 2) + m(3, 3); }

Complex kg_operator(const Local& s, const PhysicalConstants& k) {
  // (-i hbar d - qA)^2 psi + m^2 c^2 psi
  const Complex psi = s.jet.value;
  const Complex div_a = trace(s.da);
  const Complex a_dot_grad = contract(s.a, s.jet.grad);
  const Complex a_dot_a = contract(s.a, s.a);
  return -k.hbar * k.hbar * s.jet.laplace + kI * k.hbar * k.q * div_a * psi +
         2.0 * kI * k.hbar * k.q * a_dot_grad + k.q * k.q * a_dot_a * psi +
         k.m * k.m * k.c * k.c * psi;
}

Complex log_laplacian(const Local& s) {
  return s.jet.laplace / s.jet.value - contract(s.dlog, s.dlog);
}

Matrix4 curl_from(const Local& s, const PhysicalConstants& k) {
  Matrix4 K;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      K(mu, nu) = k.m * (s.jac(mu, nu) - s.jac(nu, mu)) + k.q * (s.da(mu, nu) - s.da(nu, mu));
  return K;
}

FourVector u_dot(const Matrix4& K, const FourVector& u) {
  FourVector r;
  for (int mu = 0; mu < 4; ++mu) {
    Complex acc = 0.0;
    for (int nu = 0; nu < 4; ++nu) acc += u[nu] * K(mu, nu);
    r[mu] = acc;
  }
  return r;
}

NewtonResult newton_from(const Local& s, const PhysicalConstants& k) {
  NewtonResult r;
  for (int mu = 0; mu < 4; ++mu) {
    Complex convective = 0.0;
    Complex lorentz = 0.0;
    Complex shell = 0.0;
    for (int nu = 0; nu < 4; ++nu) {
      convective += s.u[nu] * s.jac(nu, mu);
      lorentz += (s.da(mu, nu) - s.da(nu, mu)) * s.u[nu];
      shell += s.u[nu] * s.jac(mu, nu);
    }
    r.raw[mu] = convective - (k.q / k.m) * lorentz;
    r.shell_gradient[mu] = shell;
  }
  r.normalized = r.raw;
  const double un = s.u.norm();
  if (un > 0.0) r.normalized *= 1.0 / un;
  return r;
}

DivergenceResult divergence_from(const Local& s, const PhysicalConstants& k) {
  DivergenceResult d;
  d.from_velocity = k.m * trace(s.jac);
  d.from_log_laplacian = -kI * k.hbar * log_laplacian(s);
  d.lorenz_residual = trace(s.da);
  d.gauge_violation = std::abs(d.lorenz_residual) > 1e-10;
  return d;
}

}  // namespace

double calibrate_psi_floor(const ScalarField& psi, std::span<const Event> events) {
  double m = 0.0;
  for (const auto& e : events) {
    try {
      m = std::max(m, std::abs(psi.value(e)));
    } catch (const Error&) {
    }
  }
  return 1e-12 * m;
}

FourVector extract_u(const ScalarField& psi, const PotentialField& A, const Event& e,
                     const EvalContext& ctx) {
  const auto& k = ctx.constants;
  const FourVector dl = dlog(psi, e, ctx.method, k.c, ctx.psi_floor);
  return velocity_from(dl, A.value(e), k);
}

Matrix4 velocity_jacobian(const ScalarField& psi, const PotentialField& A,
                          const Event& e, const EvalContext& ctx) {
  return local_state(psi, A, e, ctx).jac;
}

Complex mass_shell_residual(const ScalarField& psi, const PotentialField& A,
                            const Event& e, const EvalContext& ctx) {
  const FourVector u = extract_u(psi, A, e, ctx);
  return contract(u, u) + ctx.constants.c * ctx.constants.c;
}

NewtonResult newton_residual(const ScalarField& psi, const PotentialField& A,
                             const Event& e, const EvalContext& ctx) {
  return newton_from(local_state(psi, A, e, ctx), ctx.constants);
}

Matrix4 curl_K(const ScalarField& psi, const PotentialField& A, const Event& e,
               const EvalContext& ctx) {
  return curl_from(local_state(psi, A, e, ctx), ctx.constants);
}

FourVector u_dot_K(const ScalarField& psi, const PotentialField& A, const Event& e,
                   const EvalContext& ctx) {
  const Local s = local_state(psi, A, e, ctx);
  return u_dot(curl_from(s, ctx.constants), s.u);
}

DivergenceResult divergence_mu(const ScalarField& psi, const PotentialField& A,
                               const Event& e, const EvalContext& ctx) {
  return divergence_from(local_state(psi, A, e, ctx), ctx.constants);
}

ScalarResidual kg_residual(const ScalarField& psi, const PotentialField& A,
                           const Event& e, const EvalContext& ctx) {
  const auto& k = ctx.constants;
  Local s;
  s.jet = evaluate_jet(psi, e, ctx.method, k.c);
  s.a = A.value(e);
  s.da = potential_gradient(A, e, ctx.method, k.c);
  const Complex op = kg_operator(s, k);
  if (!(std::abs(s.jet.value) > ctx.psi_floor)) return {op, false};
  return {op / s.jet.value, true};
}

Complex nonlinear_wave_residual(const ScalarField& psi, const PotentialField& A,
                                const Event& e, const EvalContext& ctx) {
  const auto& k = ctx.constants;
  Local s;
  s.jet = evaluate_jet(psi, e, ctx.method, k.c);
  require_regular(psi, e, ctx.psi_floor, s.jet.value);
  s.dlog = s.jet.grad;
  s.dlog *= 1.0 / s.jet.value;
  s.a = A.value(e);
  s.da = potential_gradient(A, e, ctx.method, k.c);
  return kg_operator(s, k) / s.jet.value + k.hbar * k.hbar * log_laplacian(s);
}

namespace {

struct GaussLegendre {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;

  explicit GaussLegendre(int n) {
    nodes.resize(static_cast<std::size_t>(n));
    weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[static_cast<std::size_t>(i)] = x;
      weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

const GaussLegendre& rule() {
  static const GaussLegendre gl(10);
  return gl;
}

// Smallest spatial radius on the segment p0 + s delta, s in [0, 1].
double closest_radius(const Event& p0, const Event& delta) {
  const double dd = delta.x1 * delta.x1 + delta.x2 * delta.x2 + delta.x3 * delta.x3;
  const double pd = p0.x1 * delta.x1 + p0.x2 * delta.x2 + p0.x3 * delta.x3;
  const double s = dd > 0.0 ? std::clamp(-pd / dd, 0.0, 1.0) : 0.0;
  return (p0 + s * delta).radius();
}

template <class F>
Complex gl_integrate(const F& f, double a, double b) {
  const auto& gl = rule();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  Complex s = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * f(mid + half * gl.nodes[i]);
  return half * s;
}

template <class F>
Complex adaptive(const F& f, double a, double b, Complex whole, int depth, int& intervals) {
  const double m = 0.5 * (a + b);
  const Complex left = gl_integrate(f, a, m);
  const Complex right = gl_integrate(f, m, b);
  const Complex halves = left + right;
  if (std::abs(halves - whole) < 1e-10) {
    ++intervals;
    return halves;
  }
  if (depth >= 20 || !std::isfinite(std::abs(halves))) {
    fail(ErrorCode::kQuadratureFailure,
         "action integral did not converge (bisection depth 20 exceeded)");
  }
  return adaptive(f, a, m, left, depth + 1, intervals) +
         adaptive(f, m, b, right, depth + 1, intervals);
}

}  // namespace

ActionResult action_integral(const ScalarField& psi, const PotentialField& A,
                             std::span<const Event> path, const EvalContext& ctx) {
  const auto& k = ctx.constants;
  if (path.size() < 2) {
    fail(ErrorCode::kInvalidArgument, "action path needs at least two events");
  }
  ActionResult out;
  out.path.assign(path.begin(), path.end());
  try {
    for (const auto& e : path) {
      require_regular(psi, e, ctx.psi_floor, psi.value(e));
      (void)A.value(e);
    }
    Complex phi = 0.0;
    for (std::size_t leg = 0; leg + 1 < path.size(); ++leg) {
      const Event p0 = path[leg];
      const Event delta = path[leg + 1] - p0;
      const FourVector dx = displacement(delta, k.c);
      if (A.singular_radius > 0.0 &&
          !(closest_radius(p0, delta) > A.singular_radius)) {
        fail(ErrorCode::kSingularPoint, "leg " + std::to_string(leg) +
                                            " passes through the potential's singular core");
      }
      auto integrand = [&](double s) {
        const Event x = p0 + s * delta;
        const FourVector u = extract_u(psi, A, x, ctx);
        const FourVector a = A.value(x);
        Complex acc = 0.0;
        for (int mu = 0; mu < 4; ++mu) acc += (k.m * u[mu] + k.q * a[mu]) * dx[mu];
        return acc;
      };
      phi += adaptive(integrand, 0.0, 1.0, gl_integrate(integrand, 0.0, 1.0), 0,
                      out.intervals);
    }
    out.phi = phi;
  } catch (const Error& err) {
    if (err.code() == ErrorCode::kNearZeroWavefunction ||
        err.code() == ErrorCode::kSingularPoint) {
      fail(ErrorCode::kSingularPoint,
           std::string("action path passes through a singularity: ") + err.what());
    }
    throw;
  }
  out.psi_start = psi.value(path.front());
  out.psi_end = psi.value(path.back());
  out.theta = -kI * k.hbar * std::log(out.psi_start);
  out.psi_reconstructed = std::exp(kI * (out.phi + out.theta) / k.hbar);
  out.reconstruction_error =
      std::abs(out.psi_reconstructed - out.psi_end) / std::abs(out.psi_end);
  return out;
}

std::optional<Complex> ResidualSample::continuity() const {
  if (!divergence) return std::nullopt;
  return divergence->from_velocity;
}

ResidualSample diagnose_point(const ScalarField& psi, const PotentialField& A,
                              const Event& e, const EvalContext& ctx) {
  ResidualSample r;
  r.event = e;
  const auto& k = ctx.constants;
  auto guard = [&](const char* name, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& ex) {
      r.flags.push_back(std::string(name) + ": " + ex.what());
    }
  };
  std::optional<Local> s;
  guard("velocity", [&] {
    s = local_state(psi, A, e, ctx);
    r.u = s->u;
  });
  if (s) {
    r.mass_shell = contract(s->u, s->u) + k.c * k.c;
    r.newton = newton_from(*s, k);
    r.curl_k = curl_from(*s, k);
    r.u_dot_k = u_dot(*r.curl_k, s->u);
    r.divergence = divergence_from(*s, k);
  }
  guard("kg", [&] { r.kg = kg_residual(psi, A, e, ctx); });
  if (r.kg && !r.kg->normalized) r.flags.push_back("kg: unnormalized (|psi| below floor)");
  guard("nonlinear", [&] { r.nonlinear = nonlinear_wave_residual(psi, A, e, ctx); });
  return r;
}

}  // namespace vfield
