#pragma once

// Parametric worldlines, boosts, and their intersections with constant-time
// slices ("pierce points").

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vfield/core4.hpp"

namespace vfield {

enum class WorldlineKind { kLine, kHelix, kCircleX1X4 };

std::string to_string(WorldlineKind k);

/// A worldline X(lambda) over [lambda_min, lambda_max], parametrized by an
/// arbitrary parameter (not proper time, which does not exist on spacelike
/// arcs). `periodic` worldlines identify the two interval ends.
struct Worldline {
  WorldlineKind kind = WorldlineKind::kLine;
  double lambda_min = 0.0;
  double lambda_max = 1.0;
  bool periodic = false;
  double c = 1.0;
  std::function<Event(double)> position;
  /// dX/dlambda in coordinate form (dx1, dx2, dx3, dt).
  std::function<Event(double)> tangent;
  std::string description;
};

struct LineParams {
  Event origin;
  std::array<double, 3> velocity{};
  double lambda_min = -10.0;
  double lambda_max = 10.0;
};

struct HelixParams {
  double radius = 1.0;
  double omega = 1.0;
  double lambda_min = 0.0;
  double lambda_max = 1.0;
};

struct CircleParams {
  double radius = 1.0;
};

/// line:   X = origin + lambda (v, 1)
/// helix:  (R cos(w lambda), R sin(w lambda), 0, t = lambda)
/// circle: (R cos lambda, 0, 0, c t = R sin lambda), lambda in [0, 2 pi)
Worldline make_line(const LineParams& p, double c);
Worldline make_helix(const HelixParams& p, double c);
Worldline make_circle_x1x4(const CircleParams& p, double c);

/// Pointwise boost along x1; tangents transform with the same matrix.
Worldline boost_worldline(const Worldline& w, double v);

/// Same curve traversed in the opposite parameter direction.
Worldline reverse(const Worldline& w);

enum class SpeedClass { kTimelike, kSpacelike, kNull };

std::string to_string(SpeedClass s);

/// Space-time tangent (dx1, dx2, dx3, i c dt) at lambda.
FourVector tangent4(const Worldline& w, double lambda);

/// Sign of contract(dX, dX): < 0 timelike, > 0 spacelike, |.| < 1e-12 null
/// (relative to the squared tangent size). Throws kDegenerateParameter at a
/// cusp where the tangent vanishes.
SpeedClass classify_speed(const Worldline& w, double lambda);

/// Proper-time 4-velocity u = dX/dtau on a timelike sample, future pointing.
FourVector four_velocity(const Worldline& w, double lambda);

struct PiercePoint {
  Event event;
  double lambda = 0.0;
  SpeedClass speed = SpeedClass::kTimelike;
  std::optional<FourVector> u;
  bool tangent = false;
};

struct PierceOptions {
  int cells = 4096;
  double lambda_tolerance = 1e-12;
  /// |t(lambda) - t0| accepted as a touching (tangent) root.
  double touch_tolerance = 1e-10;
};

/// All lambda with t(lambda) = t0: sign changes on a uniform grid refined by
/// bisection, plus grid-local minima of |t - t0| that touch zero (flagged
/// tangent). Roots closer together than one grid cell may be missed.
std::vector<PiercePoint> pierce_points(const Worldline& w, double t0,
                                       const PierceOptions& opt = {});

/// CSV with header "lambda,x1,x2,x3,t,class".
std::string pierce_points_csv(const std::vector<PiercePoint>& points);

}  // namespace vfield
