#include <algorithm>
#include <cmath>
#include <vector>

#include "support.hpp"
#include "vfield/random.hpp"
#include "vfield/worldline.hpp"

using namespace vfield;
using vfield::testing::dist;

namespace {

std::vector<double> sorted_x1(const std::vector<PiercePoint>& pts) {
  std::vector<double> xs;
  for (const auto& p : pts) xs.push_back(p.event.x1);
  std::sort(xs.begin(), xs.end());
  return xs;
}

}  // namespace

TEST(Parametrization, LineHelixCircle) {
  const Worldline line = make_line({{1, 2, 3, 4}, {0.5, 0, -0.25}, -10, 10}, 1.0);
  EXPECT_EQ(line.position(2.0), (Event{2, 2, 2.5, 6}));
  EXPECT_EQ(to_string(line.kind), "line");

  const Worldline helix = make_helix({2.0, M_PI, 0, 4}, 1.0);
  const Event h = helix.position(0.5);
  EXPECT_NEAR(h.x1, 0.0, 1e-15);
  EXPECT_NEAR(h.x2, 2.0, 1e-15);
  EXPECT_EQ(h.t, 0.5);

  const Worldline circle = make_circle_x1x4({2.0}, 4.0);
  EXPECT_TRUE(circle.periodic);
  const Event q = circle.position(M_PI / 2);
  EXPECT_NEAR(q.x1, 0.0, 1e-15);
  EXPECT_NEAR(q.t, 0.5, 1e-15);
  EXPECT_EQ(to_string(circle.kind), "circle-x1x4");
}

TEST(Parametrization, InvalidParametersAreRejected) {
  EXPECT_VF_ERROR(make_line({{}, {0, 0, 0}, 1, 1}, 1.0), ErrorCode::kInvalidArgument);
  EXPECT_VF_ERROR(make_helix({0.0, 1.0, 0, 1}, 1.0), ErrorCode::kInvalidArgument);
  EXPECT_VF_ERROR(make_helix({1.0, NAN, 0, 1}, 1.0), ErrorCode::kInvalidArgument);
  EXPECT_VF_ERROR(make_circle_x1x4({-1.0}, 1.0), ErrorCode::kInvalidArgument);
  const Worldline line = make_line({}, 1.0);
  PierceOptions opt;
  opt.cells = 1;
  EXPECT_VF_ERROR(pierce_points(line, 0.0, opt), ErrorCode::kInvalidArgument);
}

TEST(Boost, ZeroVelocityIsIdentity) {
  const Worldline helix = make_helix({1.0, 2.0, 0, 3}, 1.0);
  const Worldline same = boost_worldline(helix, 0.0);
  for (double l : {0.0, 0.7, 2.9}) {
    EXPECT_EQ(same.position(l), helix.position(l));
    EXPECT_EQ(same.tangent(l), helix.tangent(l));
  }
}

TEST(Boost, VelocityAdditionForLines) {
  const double c = 2.0;
  const Worldline line = make_line({{}, {0.8, 0, 0}, -10, 10}, c);
  const Worldline boosted = boost_worldline(line, -1.2);
  const Event d = boosted.tangent(0.3);
  const double expected = (0.8 + 1.2) / (1.0 + 0.8 * 1.2 / (c * c));
  EXPECT_NEAR(d.x1 / d.t, expected, 1e-12);
}

TEST(Boost, PreservesIntervalsAndRejectsSuperluminal) {
  SplitRng rng(5);
  const Worldline helix = make_helix({1.5, 0.4, 0, 5}, 1.0);
  for (int n = 0; n < 50; ++n) {
    const double v = rng.uniform(-0.95, 0.95);
    const Worldline b = boost_worldline(helix, v);
    const double l1 = rng.uniform(0, 5), l2 = rng.uniform(0, 5);
    const FourVector d0 = displacement(helix.position(l2) - helix.position(l1), 1.0);
    const FourVector d1 = displacement(b.position(l2) - b.position(l1), 1.0);
    EXPECT_NEAR(contract(d0, d0).real(), contract(d1, d1).real(), 1e-10);
    EXPECT_NEAR(contract(tangent4(helix, l1), tangent4(helix, l1)).real(),
                contract(tangent4(b, l1), tangent4(b, l1)).real(), 1e-10);
  }
  EXPECT_VF_ERROR(boost_worldline(helix, 1.0), ErrorCode::kInvalidBoost);
}

TEST(Pierce, LineHasOnePoint) {
  const Worldline line = make_line({{0, 0, 0, 0}, {0.5, 0, 0}, -10, 10}, 1.0);
  const auto pts = pierce_points(line, 1.0);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_NEAR(pts[0].lambda, 1.0, 1e-12);
  EXPECT_NEAR(pts[0].event.x1, 0.5, 1e-12);
  EXPECT_EQ(pts[0].speed, SpeedClass::kTimelike);
  ASSERT_TRUE(pts[0].u.has_value());
  const double g = 1.0 / std::sqrt(0.75);
  EXPECT_LT(dist(*pts[0].u, FourVector{{0.5 * g, 0, 0, kI * g}}), 1e-12);
  EXPECT_FALSE(pts[0].tangent);
}

TEST(Pierce, CircleCrossesTwice) {
  const Worldline circle = make_circle_x1x4({1.0}, 1.0);
  const auto pts = pierce_points(circle, 0.5);
  ASSERT_EQ(pts.size(), 2u);
  const auto xs = sorted_x1(pts);
  EXPECT_NEAR(xs[0], -std::sqrt(0.75), 1e-10);
  EXPECT_NEAR(xs[1], std::sqrt(0.75), 1e-10);
  for (const auto& p : pts) {
    EXPECT_EQ(p.speed, SpeedClass::kTimelike);
    EXPECT_FALSE(p.tangent);
  }
}

TEST(Pierce, CircleTopIsTangent) {
  const Worldline circle = make_circle_x1x4({1.0}, 1.0);
  const auto pts = pierce_points(circle, 1.0);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_TRUE(pts[0].tangent);
  EXPECT_NEAR(pts[0].event.x1, 0.0, 1e-5);
  EXPECT_EQ(pts[0].speed, SpeedClass::kSpacelike);
  EXPECT_FALSE(pts[0].u.has_value());
  EXPECT_TRUE(pierce_points(circle, 1.5).empty());
}

TEST(Pierce, CircleInDifferentUnits) {
  const double c = 2.0;
  const Worldline circle = make_circle_x1x4({1.0}, c);
  const auto pts = pierce_points(circle, 0.25);  // c t0 = 0.5
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_NEAR(sorted_x1(pts)[1], std::sqrt(0.75), 1e-10);
}

TEST(Classify, CircleSpeedRegimes) {
  const Worldline circle = make_circle_x1x4({1.0}, 1.0);
  EXPECT_EQ(classify_speed(circle, 0.0), SpeedClass::kTimelike);
  EXPECT_EQ(classify_speed(circle, M_PI / 2), SpeedClass::kSpacelike);
  EXPECT_EQ(classify_speed(circle, M_PI / 4), SpeedClass::kNull);
  EXPECT_EQ(to_string(SpeedClass::kNull), "null");
}

TEST(Classify, LightLikeLineAndCusp) {
  EXPECT_EQ(classify_speed(make_line({{}, {1, 0, 0}, -1, 1}, 1.0), 0.0), SpeedClass::kNull);
  EXPECT_EQ(classify_speed(make_line({{}, {2, 0, 0}, -1, 1}, 2.0), 0.0), SpeedClass::kNull);
  Worldline cusp = make_line({}, 1.0);
  cusp.position = [](double l) { return Event{l * l * l, 0, 0, l * l * l}; };
  cusp.tangent = [](double l) { return Event{3 * l * l, 0, 0, 3 * l * l}; };
  EXPECT_VF_ERROR(classify_speed(cusp, 0.0), ErrorCode::kDegenerateParameter);
  EXPECT_VF_ERROR(four_velocity(make_line({{}, {2, 0, 0}, -1, 1}, 1.0), 0.0),
                  ErrorCode::kDegenerateParameter);
}

TEST(Invariants, PiercePointsLieOnSliceAndMassShell) {
  SplitRng rng(8);
  for (int n = 0; n < 30; ++n) {
    const double c = rng.uniform(0.5, 2.0);
    const Worldline helix = make_helix({rng.uniform(0.2, 1.0), rng.uniform(0.1, 0.4) * c, -5, 5}, c);
    const Worldline b = boost_worldline(helix, rng.uniform(-0.5, 0.5) * c);
    const double t0 = rng.uniform(-2, 2);
    for (const auto& p : pierce_points(b, t0)) {
      EXPECT_NEAR(p.event.t, t0, 1e-10);
      EXPECT_NEAR(b.position(p.lambda).t, t0, 1e-10);
      if (p.u) {
        EXPECT_NEAR(contract(*p.u, *p.u).real(), -c * c, 1e-10 * c * c);
        EXPECT_GT(p.u->v[3].imag(), 0.0);
      }
    }
  }
}

TEST(Invariants, ReversalKeepsPiercePoints) {
  const Worldline circle = make_circle_x1x4({1.0}, 1.0);
  const Worldline back = reverse(circle);
  const auto a = sorted_x1(pierce_points(circle, 0.3));
  const auto b = sorted_x1(pierce_points(back, 0.3));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-10);
  const Worldline line = make_line({{}, {0.3, 0, 0}, -5, 5}, 1.0);
  const auto u = pierce_points(reverse(line), 1.0);
  ASSERT_EQ(u.size(), 1u);
  ASSERT_TRUE(u[0].u.has_value());
  EXPECT_GT(u[0].u->v[3].imag(), 0.0);
}

TEST(Invariants, TimelikeWorldlinesPierceOnceInEveryFrame) {
  const Worldline line = make_line({{0.3, 0, 0, 0.1}, {0.6, 0.2, 0}, -20, 20}, 1.0);
  const Worldline helix = make_helix({1.0, 0.5, -20, 20}, 1.0);
  for (int i = -9; i <= 9; ++i) {
    const double v = 0.1 * i;
    for (const Worldline& w : {line, helix}) {
      const auto pts = pierce_points(boost_worldline(w, v), 0.4);
      EXPECT_EQ(pts.size(), 1u) << w.description << " v=" << v;
    }
  }
}

TEST(Invariants, SpacelikeArcsPierceRepeatedlyAfterBoost) {
  // R omega = 2 pi c: superluminal circulation. In the boosted frame
  // t' = g (lambda - v R cos(omega lambda) / c^2) is no longer monotonic.
  const Worldline helix = make_helix({1.0, 2.0 * M_PI, 0, 2}, 1.0);
  EXPECT_EQ(pierce_points(helix, 0.5).size(), 1u);
  EXPECT_EQ(classify_speed(helix, 0.0), SpeedClass::kSpacelike);
  const auto pts = pierce_points(boost_worldline(helix, 0.9), 0.5);
  EXPECT_EQ(pts.size(), 3u);
  bool spacelike = false;
  for (const auto& p : pts) spacelike |= p.speed == SpeedClass::kSpacelike;
  EXPECT_TRUE(spacelike);
}

TEST(Csv, HeaderAndLineEndings) {
  const auto pts = pierce_points(make_circle_x1x4({1.0}, 1.0), 0.5);
  const std::string csv = pierce_points_csv(pts);
  EXPECT_EQ(csv.rfind("lambda,x1,x2,x3,t,class\r\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\r'), 3);
  EXPECT_NE(csv.find(",timelike\r\n"), std::string::npos);
}
