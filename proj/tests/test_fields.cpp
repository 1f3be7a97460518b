#include <cmath>

#include "support.hpp"
#include "vfield/fields.hpp"
#include "vfield/random.hpp"
#include "vfield/velocityfield.hpp"
#include "vfield/wavefunctions.hpp"

using namespace vfield;
using vfield::testing::dist;

namespace {

const DerivativeMethod kAnalytic = DerivativeMethod::analytic();
const DerivativeMethod kNumeric = DerivativeMethod::numeric();

Event random_event(SplitRng& rng, double lo, double hi) {
  return {rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)};
}

GaugeFunction poly_chi(std::vector<Polynomial4::Term> terms) {
  return GaugeFunction::from_polynomial(Polynomial4(std::move(terms)));
}

}  // namespace

TEST(Coulomb, ValueAtUnitRadius) {
  for (double q : {-1.0, -2.0, 1.0}) {
    const PhysicalConstants k{1.0, 1.0, 1.0, q};
    const PotentialField A = coulomb_potential(0.4, k);
    const FourVector a = A.value({1, 0, 0, 5.0});
    EXPECT_NEAR(dist(q * a[3], Complex(0, -0.4)), 0.0, 1e-15);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(a[i], Complex(0.0));
  }
  // Natural units with the electron charge: A_4 = 0.4 i.
  const FourVector a = coulomb_potential(0.4, {}).value({0, 1, 0, 0});
  EXPECT_NEAR(dist(a[3], Complex(0, 0.4)), 0.0, 1e-15);
}

TEST(Coulomb, PhysicalUnitsScaleWithHbar) {
  const PhysicalConstants k{2.0, 3.0, 1.0, -1.0};
  const FourVector a = coulomb_potential(0.25, k).value({0, 0, 2, 0});
  // q A_4 = -i Z alpha hbar / r.
  EXPECT_NEAR(dist(k.q * a[3], Complex(0, -0.25 * 2.0 / 2.0)), 0.0, 1e-15);
}

TEST(Coulomb, DecaysAtLargeRadius) {
  const FourVector a = coulomb_potential(0.4, {}).value({1e8, 0, 0, 0});
  EXPECT_LT(a.max_abs(), 1e-8);
}

TEST(Coulomb, LorenzGaugeHolds) {
  const PotentialField A = coulomb_potential(0.4, {});
  SplitRng rng(2);
  for (int n = 0; n < 50; ++n) {
    const Event e{rng.uniform(0.5, 3), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    EXPECT_LT(std::abs(lorenz_gauge_residual(A, e, kAnalytic, 1.0)), 1e-14);
  }
}

TEST(Coulomb, ParameterRange) {
  const PhysicalConstants k;
  EXPECT_VF_ERROR(coulomb_potential(0.0, k), ErrorCode::kInvalidArgument);
  EXPECT_VF_ERROR(coulomb_potential(0.51, k), ErrorCode::kInvalidArgument);
  EXPECT_VF_ERROR(coulomb_potential(-0.1, k), ErrorCode::kInvalidArgument);
  EXPECT_VF_ERROR(coulomb_potential(0.4, PhysicalConstants{1, 1, 1, 0.0}), ErrorCode::kInvalidArgument);
  EXPECT_NO_THROW(coulomb_potential(0.5, k));
}

TEST(Coulomb, SingularAtOrigin) {
  const PotentialField A = coulomb_potential(0.4, {});
  EXPECT_VF_ERROR(A.value({0, 0, 0, 2}), ErrorCode::kSingularPoint);
  EXPECT_VF_ERROR(lorenz_gauge_residual(A, {0, 0, 0, 0}, kAnalytic, 1.0), ErrorCode::kSingularPoint);
}

TEST(LorenzGauge, ZeroAndPureGauge) {
  EXPECT_EQ(lorenz_gauge_residual(zero_potential(), {1, 2, 3, 4}, kAnalytic, 1.0), Complex(0.0));
  // chi = x1^2: d_mu d_mu chi = 2.
  const PotentialField A = pure_gauge_potential(poly_chi({{1.0, {2, 0, 0, 0}}}), 1.0);
  EXPECT_NEAR(dist(lorenz_gauge_residual(A, {0.3, 1, 2, 3}, kAnalytic, 1.0), 2.0), 0.0, 1e-14);
  EXPECT_NEAR(dist(lorenz_gauge_residual(A, {0.3, 1, 2, 3}, kNumeric, 1.0), 2.0), 0.0, 1e-8);
}

TEST(PureGauge, TimeComponentUsesImaginaryDerivative) {
  // chi = t: A_4 = d_4 chi = 1 / (i c).
  const double c = 2.0;
  const PotentialField A = pure_gauge_potential(poly_chi({{1.0, {0, 0, 0, 1}}}), c);
  EXPECT_NEAR(dist(A.value({1, 1, 1, 1})[3], Complex(0, -0.5)), 0.0, 1e-15);
}

TEST(GaugeTransform, ZeroChiIsIdentity) {
  const PhysicalConstants k;
  const PotentialField A = coulomb_potential(0.4, k);
  const ScalarWave w = kg_coulomb_1s(0.4, k);
  const GaugedPair g = gauge_transform(A, w.field, GaugeFunction::zero(), k);
  const Event e{1.2, -0.3, 0.5, 0.7};
  EXPECT_EQ(g.potential.value(e), A.value(e));
  EXPECT_EQ(g.wave.value(e), w.field.value(e));
}

TEST(GaugeTransform, LinearChiShiftsPotentialAndKeepsVelocity) {
  const PhysicalConstants k;
  const PotentialField A = coulomb_potential(0.4, k);
  const ScalarWave w = kg_coulomb_1s(0.4, k);
  const GaugedPair g = gauge_transform(A, w.field, poly_chi({{0.7, {1, 0, 0, 0}}}), k);
  const EvalContext ctx{k, kAnalytic, 1e-12};
  const Event e{1.3, 0.4, -0.2, 0.1};
  EXPECT_LT(dist(g.potential.value(e) - A.value(e), FourVector{{0.7, 0, 0, 0}}), 1e-15);
  EXPECT_LT(dist(extract_u(g.wave, g.potential, e, ctx), extract_u(w.field, A, e, ctx)), 1e-12);
}

TEST(GaugeTransform, ProductChi) {
  const PhysicalConstants k;
  const PotentialField A = coulomb_potential(0.4, k);
  const ScalarWave w = kg_coulomb_1s(0.4, k);
  const GaugedPair g = gauge_transform(A, w.field, poly_chi({{1.0, {1, 1, 0, 0}}}), k);
  SplitRng rng(8);
  for (int n = 0; n < 20; ++n) {
    const Event e{rng.uniform(0.5, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const FourVector d = g.potential.value(e) - A.value(e);
    EXPECT_NEAR(dist(d[0], e.x2), 0.0, 1e-14);
    EXPECT_NEAR(dist(d[1], e.x1), 0.0, 1e-14);
    EXPECT_EQ(d[2], Complex(0.0));
    EXPECT_LT(dist(field_strength(g.potential, e, kAnalytic, k.c), field_strength(A, e, kAnalytic, k.c)),
              1e-12);
  }
}

TEST(GaugeTransform, RoundTripRestoresPair) {
  const PhysicalConstants k;
  const PotentialField A = coulomb_potential(0.4, k);
  const ScalarWave w = kg_coulomb_1s(0.4, k);
  SplitRng rng(21);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto chi = GaugeFunction::from_polynomial(Polynomial4::random(seed, 2, 1.0, false));
    const GaugedPair there = gauge_transform(A, w.field, chi, k);
    const GaugedPair back = gauge_transform(there.potential, there.wave, chi.negated(), k);
    for (int n = 0; n < 100; ++n) {
      const Event e{rng.uniform(1, 3), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
      const Complex p0 = w.field.value(e);
      EXPECT_LT(std::abs(back.wave.value(e) - p0) / std::abs(p0), 1e-12);
      EXPECT_LT(dist(back.potential.value(e), A.value(e)), 1e-12);
    }
  }
}

TEST(GaugeTransform, FieldStrengthInvariantForCubicChi) {
  const PhysicalConstants k;
  const PotentialField A = coulomb_potential(0.4, k);
  const ScalarWave w = kg_coulomb_1s(0.4, k);
  SplitRng rng(4);
  for (std::uint64_t seed = 10; seed < 20; ++seed) {
    const auto chi = GaugeFunction::from_polynomial(Polynomial4::random(seed, 3, 1.0, false));
    const GaugedPair g = gauge_transform(A, w.field, chi, k);
    for (int n = 0; n < 20; ++n) {
      const Event e{rng.uniform(0.5, 2), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
      for (const auto& d : {kAnalytic, kNumeric}) {
        EXPECT_LT(dist(field_strength(g.potential, e, d, k.c), field_strength(A, e, d, k.c)), 1e-10);
      }
    }
  }
}

TEST(GaugeTransform, WavefunctionPhase) {
  const PhysicalConstants k{1.5, 1.0, 1.0, -2.0};
  const ScalarWave w = plane_wave({0.2, 0, 0}, k);
  const auto chi = poly_chi({{0.3, {1, 1, 0, 0}}, {-0.5, {0, 0, 1, 1}}});
  const GaugedPair g = gauge_transform(zero_potential(), w.field, chi, k);
  const Event e{0.5, 1.5, -1, 2};
  const double chi_v = 0.3 * 0.5 * 1.5 - 0.5 * -1 * 2;
  const Complex expected = w.field.value(e) * std::exp(kI * k.q * chi_v / k.hbar);
  EXPECT_NEAR(dist(g.wave.value(e), expected), 0.0, 1e-14);
}

TEST(GaugeFunction, RejectsComplexPolynomial) {
  EXPECT_VF_ERROR(GaugeFunction::from_polynomial(Polynomial4({Polynomial4::Term{Complex(1, 0.5), {1, 0, 0, 0}}})),
                  ErrorCode::kInvalidArgument);
}

TEST(PotentialGradient, AnalyticMatchesCentralDifferences) {
  const PhysicalConstants k{1.0, 1.5, 1.0, -1.0};
  const auto chi = GaugeFunction::from_polynomial(Polynomial4::random(77, 3, 0.5, false));
  const std::vector<PotentialField> catalog{
      zero_potential(),
      constant_potential(FourVector{{0.1, -0.2, 0.3, Complex(0, 0.4)}}),
      coulomb_potential(0.4, k),
      pure_gauge_potential(chi, k.c),
      sum_potential(coulomb_potential(0.2, k), pure_gauge_potential(chi, k.c)),
  };
  SplitRng rng(1);
  for (const auto& A : catalog) {
    for (int n = 0; n < 1000; ++n) {
      Event e = random_event(rng, -2, 2);
      if (e.radius() < 0.5) continue;
      const Matrix4 ga = potential_gradient(A, e, kAnalytic, k.c);
      const Matrix4 gn = potential_gradient(A, e, kNumeric, k.c);
      EXPECT_LE(dist(ga, gn), 1e-6 * std::max(1.0, ga.max_abs())) << A.description;
    }
  }
}

TEST(PotentialField, SpatialRealTimeImaginary) {
  const PhysicalConstants k;
  const auto chi = GaugeFunction::from_polynomial(Polynomial4::random(3, 2, 1.0, false));
  const std::vector<PotentialField> catalog{coulomb_potential(0.4, k), pure_gauge_potential(chi, k.c)};
  SplitRng rng(6);
  for (const auto& A : catalog) {
    for (int n = 0; n < 100; ++n) {
      const Event e = random_event(rng, 0.5, 2);
      const FourVector a = A.value(e);
      for (int i = 0; i < 3; ++i) EXPECT_EQ(a[i].imag(), 0.0);
      EXPECT_EQ(a[3].real(), 0.0);
    }
  }
}
