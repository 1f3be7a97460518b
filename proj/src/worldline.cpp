#include "vfield/worldline.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "vfield/errors.hpp"

namespace vfield {

std::string to_string(WorldlineKind k) {
  switch (k) {
    case WorldlineKind::kLine: return "line";
    case WorldlineKind::kHelix: return "helix";
    case WorldlineKind::kCircleX1X4: return "circle-x1x4";
  }
  return "unknown";
}

std::string to_string(SpeedClass s) {
  switch (s) {
    case SpeedClass::kTimelike: return "timelike";
    case SpeedClass::kSpacelike: return "spacelike";
    case SpeedClass::kNull: return "null";
  }
  return "unknown";
}

namespace {

void require_interval(double lo, double hi) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
    fail(ErrorCode::kInvalidArgument, "worldline parameter interval must be finite with min < max");
  }
}

}  // namespace

Worldline make_line(const LineParams& p, double c) {
  require_interval(p.lambda_min, p.lambda_max);
  const auto v = p.velocity;
  const Event o = p.origin;
  Worldline w;
  w.kind = WorldlineKind::kLine;
  w.lambda_min = p.lambda_min;
  w.lambda_max = p.lambda_max;
  w.c = c;
  w.position = [o, v](double l) {
    return Event{o.x1 + l * v[0], o.x2 + l * v[1], o.x3 + l * v[2], o.t + l};
  };
  w.tangent = [v](double) { return Event{v[0], v[1], v[2], 1.0}; };
  std::ostringstream os;
  os << "line(v=" << v[0] << "," << v[1] << "," << v[2] << ")";
  w.description = os.str();
  return w;
}

Worldline make_helix(const HelixParams& p, double c) {
  require_interval(p.lambda_min, p.lambda_max);
  if (!(p.radius > 0.0) || !std::isfinite(p.omega)) {
    fail(ErrorCode::kInvalidArgument, "helix needs R > 0 and finite omega");
  }
  const double r = p.radius, om = p.omega;
  Worldline w;
  w.kind = WorldlineKind::kHelix;
  w.lambda_min = p.lambda_min;
  w.lambda_max = p.lambda_max;
  w.c = c;
  w.position = [r, om](double l) {
    return Event{r * std::cos(om * l), r * std::sin(om * l), 0.0, l};
  };
  w.tangent = [r, om](double l) {
    return Event{-r * om * std::sin(om * l), r * om * std::cos(om * l), 0.0, 1.0};
  };
  std::ostringstream os;
  os << "helix(R=" << r << ",omega=" << om << ")";
  w.description = os.str();
  return w;
}

Worldline make_circle_x1x4(const CircleParams& p, double c) {
  if (!(p.radius > 0.0) || !std::isfinite(p.radius)) {
    fail(ErrorCode::kInvalidArgument, "circle needs R > 0");
  }
  const double r = p.radius;
  Worldline w;
  w.kind = WorldlineKind::kCircleX1X4;
  w.lambda_min = 0.0;
  w.lambda_max = 2.0 * M_PI;
  w.periodic = true;
  w.c = c;
  w.position = [r, c](double l) { return Event{r * std::cos(l), 0.0, 0.0, r * std::sin(l) / c}; };
  w.tangent = [r, c](double l) { return Event{-r * std::sin(l), 0.0, 0.0, r * std::cos(l) / c}; };
  std::ostringstream os;
  os << "circle-x1x4(R=" << r << ")";
  w.description = os.str();
  return w;
}

Worldline boost_worldline(const Worldline& w, double v) {
  const double c = w.c;
  const double g = lorentz_gamma(v, c);
  Worldline out = w;
  auto pos = w.position;
  auto tan = w.tangent;
  out.position = [pos, v, c](double l) { return boost_x1(pos(l), v, c); };
  out.tangent = [tan, v, c, g](double l) {
    const Event d = tan(l);
    return Event{g * (d.x1 - v * d.t), d.x2, d.x3, g * (d.t - v * d.x1 / (c * c))};
  };
  std::ostringstream os;
  os << "boost(" << w.description << ", v=" << v << ")";
  out.description = os.str();
  return out;
}

Worldline reverse(const Worldline& w) {
  Worldline out = w;
  const double s = w.lambda_min + w.lambda_max;
  auto pos = w.position;
  auto tan = w.tangent;
  out.position = [pos, s](double l) { return pos(s - l); };
  out.tangent = [tan, s](double l) { return -1.0 * tan(s - l); };
  out.description = "reverse(" + w.description + ")";
  return out;
}

FourVector tangent4(const Worldline& w, double lambda) {
  return displacement(w.tangent(lambda), w.c);
}

SpeedClass classify_speed(const Worldline& w, double lambda) {
  const Event d = w.tangent(lambda);
  const double space = d.x1 * d.x1 + d.x2 * d.x2 + d.x3 * d.x3;
  const double time = w.c * w.c * d.t * d.t;
  const double scale = space + time;
  if (!(scale > 0.0)) {
    std::ostringstream os;
    os << "worldline tangent vanishes at lambda = " << lambda;
    fail(ErrorCode::kDegenerateParameter, os.str());
  }
  const double s = contract(tangent4(w, lambda), tangent4(w, lambda)).real();
  if (std::abs(s) < 1e-12 * scale) return SpeedClass::kNull;
  return s < 0.0 ? SpeedClass::kTimelike : SpeedClass::kSpacelike;
}

FourVector four_velocity(const Worldline& w, double lambda) {
  if (classify_speed(w, lambda) != SpeedClass::kTimelike) {
    std::ostringstream os;
    os << "proper time is undefined at lambda = " << lambda << " (not timelike)";
    fail(ErrorCode::kDegenerateParameter, os.str());
  }
  const Event d = w.tangent(lambda);
  const double c2 = w.c * w.c;
  const double space = d.x1 * d.x1 + d.x2 * d.x2 + d.x3 * d.x3;
  const double dtau = std::copysign(std::sqrt(d.t * d.t - space / c2), d.t);
  FourVector u = tangent4(w, lambda);
  u *= 1.0 / dtau;
  return u;
}

namespace {

double golden_min_abs(const std::function<double(double)>& f, double a, double b,
                      double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = std::abs(f(x1)), f2 = std::abs(f(x2));
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = std::abs(f(x1));
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = std::abs(f(x2));
    }
  }
  return 0.5 * (a + b);
}

double bisect(const std::function<double(double)>& f, double a, double b, double fa,
              double tol) {
  for (int it = 0; it < 400 && b - a > tol; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<PiercePoint> pierce_points(const Worldline& w, double t0,
                                       const PierceOptions& opt) {
  if (opt.cells < 2) fail(ErrorCode::kInvalidArgument, "pierce grid needs at least 2 cells");
  const int n = opt.cells;
  const double lo = w.lambda_min, hi = w.lambda_max;
  const double step = (hi - lo) / n;
  auto f = [&](double l) { return w.position(l).t - t0; };
  auto node = [&](int i) { return i == n ? hi : lo + i * step; };

  std::vector<double> vals(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) vals[static_cast<std::size_t>(i)] = f(node(i));
  const int last = w.periodic ? n - 1 : n;
  auto val = [&](int i) {
    if (w.periodic) i = ((i % n) + n) % n;
    return vals[static_cast<std::size_t>(i)];
  };

  struct Root {
    double lambda;
    bool tangent;
  };
  std::vector<Root> roots;
  for (int i = 0; i <= last; ++i) {
    const double fi = val(i);
    const bool has_prev = w.periodic || i > 0;
    const bool has_next = w.periodic || i < n;
    if (fi == 0.0) {
      const bool touching = has_prev && has_next && val(i - 1) * val(i + 1) > 0.0;
      roots.push_back({node(i), touching});
      continue;
    }
    if (i < n || w.periodic) {
      const int j = i + 1;
      const double fj = val(j);
      if (fi * fj < 0.0) {
        const double a = node(i), b = a + step;
        roots.push_back({bisect(f, a, b, fi, opt.lambda_tolerance), false});
        continue;
      }
    }
    if (has_prev && has_next) {
      const double fp = val(i - 1), fn = val(i + 1);
      const bool same_sign = fp * fi > 0.0 && fn * fi > 0.0;
      if (same_sign && std::abs(fi) <= std::abs(fp) && std::abs(fi) <= std::abs(fn)) {
        const double a = node(i) - step, b = node(i) + step;
        const double l = golden_min_abs(f, a, b, opt.lambda_tolerance);
        if (std::abs(f(l)) < opt.touch_tolerance) roots.push_back({l, true});
      }
    }
  }

  std::vector<PiercePoint> out;
  for (const auto& r : roots) {
    double l = r.lambda;
    if (w.periodic) {
      while (l >= hi) l -= (hi - lo);
      while (l < lo) l += (hi - lo);
    }
    PiercePoint p;
    p.lambda = l;
    p.event = w.position(l);
    p.tangent = r.tangent;
    p.speed = classify_speed(w, l);
    if (p.speed == SpeedClass::kTimelike) p.u = four_velocity(w, l);
    out.push_back(p);
  }
  std::sort(out.begin(), out.end(),
            [](const PiercePoint& a, const PiercePoint& b) { return a.lambda < b.lambda; });
  // Roots found from two adjacent cells collapse into one.
  std::vector<PiercePoint> unique;
  for (const auto& p : out) {
    if (!unique.empty() && std::abs(p.lambda - unique.back().lambda) < 10.0 * opt.lambda_tolerance)
      continue;
    unique.push_back(p);
  }
  return unique;
}

std::string pierce_points_csv(const std::vector<PiercePoint>& points) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "lambda,x1,x2,x3,t,class\r\n";
  for (const auto& p : points) {
    os << p.lambda << ',' << p.event.x1 << ',' << p.event.x2 << ',' << p.event.x3 << ','
       << p.event.t << ',' << to_string(p.speed) << "\r\n";
  }
  return os.str();
}

}  // namespace vfield
