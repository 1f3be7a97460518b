#include "vfield/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vfield/errors.hpp"

namespace vfield {

Representation parse_representation(const std::string& tag) {
  if (tag == "dirac-standard" || tag == "dirac") return Representation::kDiracStandard;
  fail(ErrorCode::kUnknownRepresentation, "unknown gamma-matrix representation '" + tag + "'");
}

std::string to_string(Representation r) {
  switch (r) {
    case Representation::kDiracStandard: return "dirac-standard";
  }
  return "unknown";
}

GammaSet gamma_matrices(Representation rep) {
  GammaSet g;
  g.representation = rep;
  // Pauli matrices.
  const std::array<std::array<std::array<Complex, 2>, 2>, 3> sigma{{
      {{{0.0, 1.0}, {1.0, 0.0}}},
      {{{0.0, -kI}, {kI, 0.0}}},
      {{{1.0, 0.0}, {0.0, -1.0}}},
  }};
  g.beta = Matrix4::identity();
  g.beta(2, 2) = -1.0;
  g.beta(3, 3) = -1.0;
  for (std::size_t n = 0; n < 3; ++n) {
    Matrix4 a;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        const Complex s = sigma[n][static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        a(r, c + 2) = s;
        a(r + 2, c) = s;
      }
    g.alpha[n] = a;
    g.gamma[n] = -kI * (g.beta * a);
  }
  g.gamma[3] = g.beta;
  return g;
}

Matrix4 slash(const GammaSet& g, const FourVector& p) {
  Matrix4 s;
  for (int mu = 0; mu < 4; ++mu) s = s + p[mu] * g.gamma[static_cast<std::size_t>(mu)];
  return s;
}

double clifford_residual(const GammaSet& g) {
  double worst = 0.0;
  const Matrix4 id = Matrix4::identity();
  for (std::size_t mu = 0; mu < 4; ++mu)
    for (std::size_t nu = 0; nu < 4; ++nu) {
      Matrix4 anti = g.gamma[mu] * g.gamma[nu] + g.gamma[nu] * g.gamma[mu];
      if (mu == nu) anti = anti - Complex(2.0) * id;
      worst = std::max(worst, anti.max_abs());
    }
  return worst;
}

double factorization_residual(const GammaSet& g, const FourVector& p,
                              const PhysicalConstants& k) {
  const Matrix4 gp = slash(g, p);
  const Complex imc = kI * k.m * k.c;
  const Matrix4 id = Matrix4::identity();
  const Matrix4 lhs = (gp + imc * id) * (gp - imc * id);
  const Matrix4 rhs = (contract(p, p) + k.m * k.m * k.c * k.c) * id;
  return (lhs - rhs).max_abs();
}

Matrix4 form_factor(const GammaSet& g, double c) { return Complex(0.0, -1.0 / c) * g.beta; }

namespace {

FourVector as_vec(const Spinor& s) { return FourVector{s}; }
Spinor as_spinor(const FourVector& v) { return v.v; }

double normalizer(const Spinor& value, const Event& e, double floor) {
  const double m = max_abs(value);
  if (!(m > floor)) {
    std::ostringstream os;
    os << "spinor magnitude " << m << " below floor " << floor << " at (" << e.x1 << ", "
       << e.x2 << ", " << e.x3 << ", t=" << e.t << ")";
    fail(ErrorCode::kNearZeroWavefunction, os.str());
  }
  return m;
}

// pi_mu Psi for every mu, indexed [mu][component].
std::array<FourVector, 4> kinetic(const SpinorWave& psi, const FourVector& a,
                                  const Spinor& value, const Event& e,
                                  const EvalContext& ctx) {
  const auto& k = ctx.constants;
  std::array<FourVector, 4> out{};
  for (int comp = 0; comp < 4; ++comp) {
    const auto uc = static_cast<std::size_t>(comp);
    FourVector g;
    if (!psi.vanishing[uc]) g = grad4(psi.components[uc], e, ctx.method, k.c);
    for (std::size_t mu = 0; mu < 4; ++mu)
      out[mu][comp] = -kI * k.hbar * g.v[mu] - k.q * a.v[mu] * value[uc];
  }
  return out;
}

}  // namespace

Spinor dirac_residual(const SpinorWave& psi, const PotentialField& A, const Event& e,
                      const EvalContext& ctx, DiracForm form, const GammaSet& g) {
  const auto& k = ctx.constants;
  const Spinor value = spinor_value(psi, e);
  const double norm = normalizer(value, e, ctx.psi_floor);
  const FourVector a = A.value(e);
  const auto pi = kinetic(psi, a, value, e, ctx);
  const FourVector v = as_vec(value);
  FourVector r;
  if (form == DiracForm::kGamma) {
    for (std::size_t mu = 0; mu < 4; ++mu) r += g.gamma[mu] * pi[mu];
    r -= (kI * k.m * k.c) * v;
  } else {
    r = (kI * k.c) * pi[3];
    for (std::size_t n = 0; n < 3; ++n) r += Complex(k.c) * (g.alpha[n] * pi[n]);
    r += Complex(k.m * k.c * k.c) * (g.beta * v);
  }
  r *= 1.0 / norm;
  return as_spinor(r);
}

VelocityConsistency spinor_velocity_consistency(const SpinorWave& psi,
                                                const PotentialField& A,
                                                const Event& e, const EvalContext& ctx) {
  VelocityConsistency out;
  for (int comp = 0; comp < 4; ++comp) {
    const auto uc = static_cast<std::size_t>(comp);
    if (psi.vanishing[uc]) continue;
    if (!(std::abs(psi.components[uc].value(e)) > ctx.psi_floor)) continue;
    out.components.push_back(comp);
    out.velocities.push_back(extract_u(psi.components[uc], A, e, ctx));
  }
  if (out.components.size() < 2) {
    std::ostringstream os;
    os << "velocity consistency needs two admissible components, found "
       << out.components.size();
    fail(ErrorCode::kInsufficientComponents, os.str());
  }
  for (std::size_t i = 0; i < out.velocities.size(); ++i)
    for (std::size_t j = i + 1; j < out.velocities.size(); ++j)
      out.max_deviation =
          std::max(out.max_deviation, (out.velocities[i] - out.velocities[j]).max_abs());
  return out;
}

DiracKgCheck dirac_to_kg_check(const SpinorWave& psi, const PotentialField& A,
                               const Event& e, const EvalContext& ctx, const GammaSet& g) {
  if (A.kind != PotentialKind::kZero) {
    fail(ErrorCode::kUnsupportedConfiguration,
         "Dirac to Klein-Gordon check is implemented for the free field only (got " +
             A.description + ")");
  }
  const auto& k = ctx.constants;
  std::array<Jet, 4> jets;
  Spinor value{};
  for (std::size_t comp = 0; comp < 4; ++comp) {
    if (psi.vanishing[comp]) continue;
    jets[comp] = evaluate_jet(psi.components[comp], e, ctx.method, k.c);
    value[comp] = jets[comp].value;
  }
  const double norm = normalizer(value, e, ctx.psi_floor);
  const Complex imc = kI * k.m * k.c;

  // d_mu R where R = (gamma.p - i m c) Psi and p = -i hbar d.
  auto component_vector = [&](auto&& pick) {
    FourVector v;
    for (int comp = 0; comp < 4; ++comp) v[comp] = pick(jets[static_cast<std::size_t>(comp)]);
    return v;
  };
  const FourVector psi_v = as_vec(value);
  FourVector residual = Complex(-1.0) * imc * psi_v;
  std::array<FourVector, 4> d_residual{};
  for (int mu = 0; mu < 4; ++mu) {
    const FourVector d_mu_psi = component_vector([&](const Jet& j) { return j.grad[mu]; });
    residual += g.gamma[static_cast<std::size_t>(mu)] * ((-kI * k.hbar) * d_mu_psi);
    FourVector acc = Complex(-1.0) * imc * d_mu_psi;
    for (int nu = 0; nu < 4; ++nu) {
      const FourVector dd = component_vector([&](const Jet& j) { return j.hess(mu, nu); });
      acc += g.gamma[static_cast<std::size_t>(nu)] * ((-kI * k.hbar) * dd);
    }
    d_residual[static_cast<std::size_t>(mu)] = acc;
  }
  FourVector squared = imc * residual;
  for (std::size_t mu = 0; mu < 4; ++mu)
    squared += g.gamma[mu] * ((-kI * k.hbar) * d_residual[mu]);

  FourVector kg;
  for (int comp = 0; comp < 4; ++comp) {
    const Jet& j = jets[static_cast<std::size_t>(comp)];
    kg[comp] = -k.hbar * k.hbar * j.laplace + k.m * k.m * k.c * k.c * j.value;
  }
  squared *= 1.0 / norm;
  kg *= 1.0 / norm;
  return {as_spinor(squared), as_spinor(kg), as_spinor(squared - kg)};
}

SpinorWave gauge_transform_spinor(const SpinorWave& psi, const GaugeFunction& chi,
                                  const PhysicalConstants& k) {
  SpinorWave out = psi;
  for (std::size_t i = 0; i < 4; ++i) {
    if (!psi.vanishing[i]) out.components[i] = gauge_transform_field(psi.components[i], chi, k);
  }
  out.label = psi.label + " [gauge " + chi.description + "]";
  return out;
}

EnergyScan energy_scan(const std::function<SpinorWave(double)>& family,
                       const PotentialField& A, std::span<const Event> events,
                       const EvalContext& ctx, double lo, double hi, double tolerance) {
  if (!(lo < hi)) fail(ErrorCode::kInvalidArgument, "energy scan needs lo < hi");
  EnergyScan out;
  const GammaSet g = gamma_matrices();
  auto objective = [&](double energy) {
    ++out.evaluations;
    const SpinorWave w = family(energy);
    double s = 0.0;
    for (const auto& e : events) {
      const Spinor r = dirac_residual(w, A, e, ctx, DiracForm::kGamma, g);
      for (const auto& x : r) s += std::norm(x);
    }
    return s;
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  while (b - a > tolerance) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = objective(x2);
    }
  }
  out.energy = 0.5 * (a + b);
  out.objective = objective(out.energy);
  return out;
}

}  // namespace vfield
