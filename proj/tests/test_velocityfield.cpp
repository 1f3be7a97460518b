#include <cmath>
#include <vector>

#include "support.hpp"
#include "vfield/random.hpp"
#include "vfield/velocityfield.hpp"
#include "vfield/wavefunctions.hpp"

using namespace vfield;
using vfield::testing::dist;

namespace {

FourVector vec(Complex a, Complex b, Complex c, Complex d) { return FourVector{{a, b, c, d}}; }

EvalContext context(const PhysicalConstants& k, DerivativeMethod d = DerivativeMethod::analytic()) {
  return EvalContext{k, d, 1e-12};
}

struct KgRef {
  double gamma, lambda, energy;
  explicit KgRef(double za) {
    gamma = 0.5 * (1.0 + std::sqrt(1.0 - 4.0 * za * za));
    energy = 1.0 / std::sqrt(1.0 + za * za / (gamma * gamma));
    lambda = energy * za / gamma;
  }
};

GaugeFunction polynomial_gauge(std::vector<Polynomial4::Term> terms) {
  return GaugeFunction::from_polynomial(Polynomial4(std::move(terms)));
}

std::vector<Event> ray(int n) {
  std::vector<Event> out;
  for (int i = 0; i < n; ++i) {
    const double r = 0.5 + 4.5 * i / (n - 1);
    out.push_back({r * 0.48, r * 0.6, r * 0.64, 0.25 * i});
  }
  return out;
}

}  // namespace

TEST(ExtractU, PlaneWaveVelocity) {
  for (double c : {1.0, 3.0}) {
    const PhysicalConstants k{1.0, c, 2.0, -1.0};
    const ScalarWave w = plane_wave({0.5, -1.0, 0.25}, k);
    const FourVector expected = vec(0.25, -0.5, 0.125, kI * w.energy / (k.m * c));
    for (const auto& d : {DerivativeMethod::analytic(), DerivativeMethod::numeric()}) {
      const FourVector u = extract_u(w.field, zero_potential(), {0.4, 0.1, -0.7, 1.3}, context(k, d));
      EXPECT_LT(dist(u, expected), d.is_analytic() ? 1e-14 : 1e-8) << c;
    }
  }
}

TEST(ExtractU, RestFrameVelocityIsTimeAxis) {
  const PhysicalConstants k{1.0, 3.0, 1.0, -1.0};
  const FourVector u = extract_u(plane_wave({0, 0, 0}, k).field, zero_potential(), {}, context(k));
  EXPECT_LT(dist(u, vec(0, 0, 0, kI * 3.0)), 1e-14);
}

TEST(ExtractU, KgCoulombAtUnitRadius) {
  const PhysicalConstants k;
  const KgRef ref(0.4);
  const FourVector u = extract_u(kg_coulomb_1s(0.4, k).field, coulomb_potential(0.4, k),
                                 {1, 0, 0, 0}, context(k));
  EXPECT_LT(dist(u[0], -kI * ((ref.gamma - 1.0) - ref.lambda)), 1e-14);
  EXPECT_LT(std::abs(u[1]) + std::abs(u[2]), 1e-14);
  EXPECT_LT(dist(u[3], kI * (ref.energy + 0.4)), 1e-14);
}

TEST(ExtractU, ZeroWavefunctionIsRejected) {
  const ScalarField f = ScalarField::from_jet(
      [](const Event& e) { return Polynomial4({Polynomial4::Term{1.0, {1, 0, 0, 0}}}).jet(e); });
  EXPECT_VF_ERROR(extract_u(f, zero_potential(), {0, 1, 1, 1}, context({})),
                  ErrorCode::kNearZeroWavefunction);
}

TEST(MassShell, PlaneWavesLieOnShell) {
  SplitRng rng(3);
  for (int n = 0; n < 50; ++n) {
    const PhysicalConstants k{1.0, rng.uniform(0.5, 3.0), rng.uniform(0.5, 2.0), -1.0};
    const ScalarWave w = plane_wave({rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)}, k);
    const Event e{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    EXPECT_LT(std::abs(mass_shell_residual(w.field, zero_potential(), e, context(k))), 1e-12);
  }
}

TEST(MassShell, KgCoulombIsOffShellByTheDivergence) {
  // Where the KG equation holds, m^2 (u.u + c^2) = i hbar d_mu(m u_mu).
  const PhysicalConstants k;
  const ScalarWave w = kg_coulomb_1s(0.4, k);
  const PotentialField A = coulomb_potential(0.4, k);
  for (const Event& e : ray(10)) {
    const Complex ms = mass_shell_residual(w.field, A, e, context(k));
    const Complex div = divergence_mu(w.field, A, e, context(k)).from_velocity;
    EXPECT_GT(std::abs(ms), 1e-3);
    EXPECT_LT(dist(ms, kI * k.hbar * div / (k.m * k.m)), 1e-12);
  }
}

TEST(Newton, PlaneWaveIsForceFree) {
  const PhysicalConstants k{1.0, 2.0, 1.0, -1.0};
  const ScalarWave w = plane_wave({0.3, 0.2, -0.6}, k);
  for (const auto& d : {DerivativeMethod::analytic(), DerivativeMethod::numeric()}) {
    const NewtonResult r = newton_residual(w.field, zero_potential(), {1, 2, 3, 4}, context(k, d));
    EXPECT_LT(r.raw.max_abs(), d.is_analytic() ? 1e-14 : 1e-6);
  }
}

TEST(Newton, GaugeDressedPlaneWaveIsForceFree) {
  const PhysicalConstants k;
  const GaugeFunction chi = polynomial_gauge(
      {{0.3, {3, 0, 0, 0}}, {-0.2, {1, 1, 0, 1}}, {0.5, {0, 0, 2, 0}}});
  const GaugedPair g = gauge_transform(zero_potential(), plane_wave({0.4, 0, 0.1}, k).field, chi, k);
  SplitRng rng(9);
  for (int n = 0; n < 50; ++n) {
    const Event e{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    EXPECT_LT(newton_residual(g.wave, g.potential, e, context(k)).raw.max_abs(), 1e-10);
  }
}

TEST(Newton, ChainIdentityWithCurl) {
  // raw - shell_gradient = -(1/m) u_nu K_mu_nu for any wavefunction.
  const PhysicalConstants k{1.0, 1.0, 1.5, -1.0};
  const GaugeFunction chi = polynomial_gauge({{0.2, {2, 1, 0, 0}}});
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ScalarWave w = random_smooth_scalar(seed, {});
    for (const PotentialField& A : {coulomb_potential(0.3, k), pure_gauge_potential(chi, k.c)}) {
      const Event e{0.3, -0.5, 0.6, 0.1};
      const auto ctx = context(k);
      const NewtonResult r = newton_residual(w.field, A, e, ctx);
      FourVector rhs = u_dot_K(w.field, A, e, ctx);
      rhs *= -1.0 / k.m;
      EXPECT_LT(dist(r.raw - r.shell_gradient, rhs), 1e-10 * std::max(1.0, rhs.max_abs()));
    }
  }
}

TEST(Curl, VanishesForKgCoulomb) {
  const PhysicalConstants k;
  const ScalarWave w = kg_coulomb_1s(0.4, k);
  const PotentialField A = coulomb_potential(0.4, k);
  for (const Event& e : ray(20)) {
    EXPECT_LT(curl_K(w.field, A, e, context(k)).max_abs(), 1e-8);
    EXPECT_LT(curl_K(w.field, A, e, context(k, DerivativeMethod::numeric())).max_abs(), 1e-5);
    EXPECT_LT(u_dot_K(w.field, A, e, context(k)).max_abs(), 1e-10);
  }
}

TEST(Divergence, KgCoulombClosedForm) {
  const PhysicalConstants k;
  const KgRef ref(0.4);
  const ScalarWave w = kg_coulomb_1s(0.4, k);
  const PotentialField A = coulomb_potential(0.4, k);
  for (const Event& e : ray(10)) {
    const double r = e.radius();
    const Complex expected = -kI * ((ref.gamma - 1.0) / (r * r) - 2.0 * ref.lambda / r);
    const DivergenceResult d = divergence_mu(w.field, A, e, context(k));
    EXPECT_LT(dist(d.from_velocity, expected), 1e-12);
    EXPECT_LT(dist(d.from_velocity, d.from_log_laplacian), 1e-8);
    EXPECT_FALSE(d.gauge_violation);
    const DivergenceResult dn = divergence_mu(w.field, A, e, context(k, DerivativeMethod::numeric()));
    EXPECT_LT(dist(dn.from_velocity, expected), 1e-6);
  }
}

TEST(Divergence, FlagsNonLorenzPotential) {
  const PhysicalConstants k;
  const PotentialField A = pure_gauge_potential(polynomial_gauge({{1.0, {2, 0, 0, 0}}}), k.c);
  const DivergenceResult d = divergence_mu(plane_wave({0.1, 0, 0}, k).field, A, {0.5, 0, 0, 0}, context(k));
  EXPECT_TRUE(d.gauge_violation);
  EXPECT_LT(dist(d.lorenz_residual, 2.0), 1e-12);
}

TEST(KleinGordon, SolutionsHaveZeroResidual) {
  const PhysicalConstants k;
  const ScalarWave w = kg_coulomb_1s(0.4, k);
  const PotentialField A = coulomb_potential(0.4, k);
  for (const Event& e : ray(20)) {
    EXPECT_LT(std::abs(kg_residual(w.field, A, e, context(k)).value), 1e-12);
    EXPECT_LT(std::abs(kg_residual(w.field, A, e, context(k, DerivativeMethod::numeric())).value), 1e-6);
  }
  const ScalarWave p = plane_wave({1, 2, 0}, k);
  EXPECT_LT(std::abs(kg_residual(p.field, zero_potential(), {1, 1, 1, 1}, context(k)).value), 1e-12);
}

TEST(KleinGordon, DetunedEnergyIsDetected) {
  const PhysicalConstants k;
  const ScalarWave base = kg_coulomb_1s(0.4, k);
  const ScalarWave detuned = kg_coulomb_1s(0.4, k, 1.01 * base.energy);
  const ScalarResidual r = kg_residual(detuned.field, coulomb_potential(0.4, k), {1, 0, 0, 0}, context(k));
  EXPECT_GT(std::abs(r.value), 1e-3);
  EXPECT_TRUE(r.normalized);
}

TEST(KleinGordon, ZeroOfPsiReturnsUnnormalizedValue) {
  const ScalarField f = ScalarField::from_jet(
      [](const Event& e) { return Polynomial4({Polynomial4::Term{1.0, {1, 0, 0, 0}}}).jet(e); });
  const ScalarResidual r = kg_residual(f, zero_potential(), {0, 0.5, 0, 0}, context({}));
  EXPECT_FALSE(r.normalized);
  EXPECT_TRUE(std::isfinite(std::abs(r.value)));
}

TEST(NonlinearWave, EqualsScaledMassShellInLorenzGauge) {
  const PhysicalConstants k{1.0, 1.0, 2.0, -1.0};
  const PotentialField A = coulomb_potential(0.3, k);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ScalarWave w = random_smooth_scalar(seed, {0.2, 0.1, 0, 0});
    const Event e{0.4, 0.3, -0.2, 0.05};
    const Complex nl = nonlinear_wave_residual(w.field, A, e, context(k));
    const Complex ms = mass_shell_residual(w.field, A, e, context(k));
    EXPECT_LT(dist(nl, k.m * k.m * ms), 1e-10 * std::max(1.0, std::abs(nl)));
  }
}

TEST(NonlinearWave, HarmonicGaugeDressingKeepsPlaneWaveExact) {
  const PhysicalConstants k;
  const GaugeFunction chi = polynomial_gauge({{1.0, {1, 1, 0, 0}}, {0.5, {0, 0, 1, 1}}});
  const GaugedPair g = gauge_transform(zero_potential(), plane_wave({0.3, 0, 0}, k).field, chi, k);
  for (const Event& e : ray(5)) {
    EXPECT_LT(std::abs(nonlinear_wave_residual(g.wave, g.potential, e, context(k))), 1e-10);
  }
}

TEST(Decomposition, KgOperatorSplitsIntoShellAndDivergence) {
  // [(-i hbar d - qA)^2 psi] / psi + m^2 c^2 = m^2 (u.u + c^2) - i hbar d_mu(m u_mu).
  const PhysicalConstants k{1.2, 1.5, 0.8, -1.0};
  std::vector<std::pair<ScalarWave, PotentialField>> cases{
      {plane_wave({0.2, 0.4, 0}, k), zero_potential()},
      {kg_coulomb_1s(0.4, k), coulomb_potential(0.4, k)},
      {kg_coulomb_1s(0.4, k, 1.2), coulomb_potential(0.4, k)},
  };
  const GaugeFunction chi = polynomial_gauge({{0.3, {1, 0, 2, 0}}, {0.1, {0, 0, 0, 3}}});
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    cases.push_back({random_smooth_scalar(seed, {}), pure_gauge_potential(chi, k.c)});
    cases.push_back({random_smooth_scalar(seed + 100, {}), coulomb_potential(0.25, k)});
  }
  for (const auto& [w, A] : cases) {
    for (const Event& e : ray(5)) {
      const auto ctx = context(k);
      const Complex lhs = kg_residual(w.field, A, e, ctx).value;
      const Complex rhs = k.m * k.m * mass_shell_residual(w.field, A, e, ctx) -
                          kI * k.hbar * divergence_mu(w.field, A, e, ctx).from_velocity;
      EXPECT_LT(dist(lhs, rhs), 1e-9 * std::max(1.0, std::abs(lhs))) << w.label;
    }
  }
}

TEST(Action, PlaneWavePhaseAccumulates) {
  const PhysicalConstants k;
  const ScalarWave w = plane_wave({1, 0, 0}, k);
  const std::vector<Event> path{{0, 0, 0, 0}, {1, 0, 0, 0}};
  const ActionResult r = action_integral(w.field, zero_potential(), path, context(k));
  EXPECT_LT(dist(r.phi, 1.0), 1e-12);
  EXPECT_LT(r.reconstruction_error, 1e-12);
  EXPECT_GE(r.intervals, 1);
}

TEST(Action, PlaneWavePhaseAlongSpaceTimePolyline) {
  // Phi = p.dx - E dt.
  const PhysicalConstants k{1.0, 2.0, 1.0, -1.0};
  const ScalarWave w = plane_wave({0.5, -0.3, 0.2}, k);
  const std::vector<Event> path{{0, 0, 0, 0}, {1, 0, 0, 0.5}, {1, 2, -1, 0.7}};
  const ActionResult r = action_integral(w.field, zero_potential(), path, context(k));
  const double expected = 0.5 * 1 - 0.3 * 2 + 0.2 * -1 - w.energy * 0.7;
  EXPECT_LT(dist(r.phi, expected), 1e-12);
  EXPECT_LT(r.reconstruction_error, 1e-12);
}

TEST(Action, ClosedLoopsAndPathIndependence) {
  const PhysicalConstants k;
  const ScalarWave w = kg_coulomb_1s(0.4, k);
  const PotentialField A = coulomb_potential(0.4, k);
  const std::vector<Event> loop{{1, 0, 0, 0}, {0, 1.5, 0, 0.3}, {-1, 0, 0.5, 0.6}, {1, 0, 0, 0}};
  const ActionResult closed = action_integral(w.field, A, loop, context(k));
  EXPECT_LT(std::abs(closed.phi), 1e-8);
  const std::vector<Event> a{{1, 0, 0, 0}, {2, 1, 0, 0.5}};
  const std::vector<Event> b{{1, 0, 0, 0}, {1, 2, 1, 0.1}, {2, 1, 0, 0.5}};
  const ActionResult ra = action_integral(w.field, A, a, context(k));
  const ActionResult rb = action_integral(w.field, A, b, context(k));
  EXPECT_LT(dist(ra.phi, rb.phi), 1e-8);
  EXPECT_LT(ra.reconstruction_error, 1e-8);
  EXPECT_LT(rb.reconstruction_error, 1e-8);
}

TEST(Action, SingularPathsAndShortPathsAreRejected) {
  const PhysicalConstants k;
  const ScalarWave w = kg_coulomb_1s(0.4, k);
  const PotentialField A = coulomb_potential(0.4, k);
  const std::vector<Event> through_vertex{{1, 0, 0, 0}, {0, 0, 0, 0}};
  EXPECT_VF_ERROR(action_integral(w.field, A, through_vertex, context(k)), ErrorCode::kSingularPoint);
  const std::vector<Event> through_leg{{-1, 0, 0, 0}, {1, 0, 0, 0.2}};
  EXPECT_VF_ERROR(action_integral(w.field, A, through_leg, context(k)), ErrorCode::kSingularPoint);
  const std::vector<Event> single{{1, 0, 0, 0}};
  EXPECT_VF_ERROR(action_integral(w.field, A, single, context(k)), ErrorCode::kInvalidArgument);
}

TEST(Diagnose, CollectsFlagsWithoutThrowing) {
  const ScalarField f = ScalarField::from_jet(
      [](const Event& e) { return Polynomial4({Polynomial4::Term{1.0, {1, 0, 0, 0}}}).jet(e); });
  ResidualSample s;
  EXPECT_NO_THROW(s = diagnose_point(f, zero_potential(), {0, 1, 0, 0}, context({})));
  EXPECT_TRUE(s.singular());
  EXPECT_FALSE(s.u.has_value());
  EXPECT_FALSE(s.nonlinear.has_value());
  ASSERT_TRUE(s.kg.has_value());
  EXPECT_FALSE(s.kg->normalized);

  const PhysicalConstants k;
  const ResidualSample ok = diagnose_point(kg_coulomb_1s(0.4, k).field, coulomb_potential(0.4, k),
                                           {0.6, 0.8, 0, 0}, context(k));
  EXPECT_FALSE(ok.singular());
  ASSERT_TRUE(ok.continuity().has_value());
  EXPECT_EQ(*ok.continuity(), ok.divergence->from_velocity);
  EXPECT_LT(std::abs(ok.kg->value), 1e-12);

  const ResidualSample origin = diagnose_point(kg_coulomb_1s(0.4, k).field,
                                               coulomb_potential(0.4, k), {}, context(k));
  EXPECT_TRUE(origin.singular());
}

TEST(PsiFloor, CalibratedFromLargestMagnitude) {
  const PhysicalConstants k;
  const ScalarWave w = kg_coulomb_1s(0.4, k);
  const std::vector<Event> events{{0.5, 0, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 0}};
  const double expected = 1e-12 * std::abs(w.field.value({0.5, 0, 0, 0}));
  EXPECT_DOUBLE_EQ(calibrate_psi_floor(w.field, events), expected);
}
