#include "vfield/wavefunctions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vfield/errors.hpp"
#include "vfield/fields.hpp"
#include "vfield/random.hpp"

namespace vfield {

namespace {

constexpr double kSingularRadius = 1e-12;

// Jet of sum_i k_i x_i + k0 (x4 entry multiplies t).
CoordJet linear_jet(const Event& e, const std::array<Complex, 4>& k, Complex k0) {
  CoordJet j;
  j.value = k0;
  for (std::size_t i = 0; i < 4; ++i) {
    j.value += k[i] * e[static_cast<int>(i)];
    j.d[i] = k[i];
  }
  return j;
}

double checked_radius(const Event& e) {
  const double r = e.radius();
  if (!(r > kSingularRadius)) {
    std::ostringstream os;
    os << "fixture evaluated on its singular locus (r = " << r << ")";
    fail(ErrorCode::kSingularPoint, os.str());
  }
  return r;
}

// Jet of f(r) = r^power exp(-decay r), static.
CoordJet radial_jet(const Event& e, double power, double decay) {
  const double r = checked_radius(e);
  const double f = std::pow(r, power) * std::exp(-decay * r);
  const double a = power / r - decay;                  // f'/f
  const double f1 = f * a;                             // f'
  const double f2 = f * (a * a - power / (r * r));     // f''
  CoordJet j;
  j.value = f;
  for (std::size_t i = 0; i < 3; ++i) {
    const double xi = e[static_cast<int>(i)];
    j.d[i] = f1 * xi / r;
    for (std::size_t k = 0; k < 3; ++k) {
      const double xk = e[static_cast<int>(k)];
      const double delta = i == k ? 1.0 : 0.0;
      j.dd[i][k] = f2 * xi * xk / (r * r) + f1 * (delta / r - xi * xk / (r * r * r));
    }
  }
  return j;
}

double radial_value(const Event& e, double power, double decay) {
  const double r = checked_radius(e);
  return std::pow(r, power) * std::exp(-decay * r);
}

std::array<Complex, 4> phase_coefs(const std::array<double, 3>& p, double energy,
                                   double hbar) {
  return {kI * p[0] / hbar, kI * p[1] / hbar, kI * p[2] / hbar,
          -kI * energy / hbar};
}

double dispersion_energy(const std::array<double, 3>& p, const PhysicalConstants& k) {
  const double p2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
  const double mc2 = k.m * k.c * k.c;
  return std::sqrt(p2 * k.c * k.c + mc2 * mc2);
}

ScalarField scaled_field(Complex coef, const ScalarField& f) {
  ScalarField out;
  out.value = [coef, f](const Event& e) { return coef * f.value(e); };
  out.jet = [coef, f](const Event& e) { return coef * f.jet(e); };
  if (f.laplace4) out.laplace4 = [coef, f](const Event& e) { return coef * f.laplace4(e); };
  return out;
}

ScalarField plane_field(const std::array<double, 3>& p, double energy,
                        const PhysicalConstants& k) {
  const auto coefs = phase_coefs(p, energy, k.hbar);
  ScalarField f;
  f.value = [coefs](const Event& e) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < 4; ++i) s += coefs[i] * e[static_cast<int>(i)];
    return std::exp(s);
  };
  f.jet = [coefs](const Event& e) { return exp(linear_jet(e, coefs, 0.0)); };
  // d_mu d_mu psi = (-p^2 / hbar^2 + E^2 / (hbar c)^2) psi
  const double p2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
  const double factor = -p2 / (k.hbar * k.hbar) +
                        energy * energy / (k.hbar * k.hbar * k.c * k.c);
  auto value = f.value;
  f.laplace4 = [value, factor](const Event& e) { return factor * value(e); };
  return f;
}

}  // namespace

Spinor spinor_value(const SpinorWave& w, const Event& e) {
  Spinor s{};
  for (std::size_t i = 0; i < 4; ++i) s[i] = w.components[i].value(e);
  return s;
}

double max_abs(const Spinor& s) {
  double m = 0.0;
  for (const auto& x : s) m = std::max(m, std::abs(x));
  return m;
}

ScalarWave plane_wave(const std::array<double, 3>& p, const PhysicalConstants& k) {
  k.validate();
  for (double x : p) {
    if (!std::isfinite(x)) fail(ErrorCode::kInvalidArgument, "plane-wave momentum must be finite");
  }
  ScalarWave w;
  w.energy = dispersion_energy(p, k);
  w.field = plane_field(p, w.energy, k);
  std::ostringstream os;
  os << "plane-wave(p=" << p[0] << "," << p[1] << "," << p[2] << ")";
  w.label = os.str();
  return w;
}

ScalarWave kg_coulomb_1s(double z_alpha, const PhysicalConstants& k,
                         std::optional<double> energy_override) {
  k.validate();
  if (!(z_alpha > 0.0 && z_alpha < 0.5)) {
    std::ostringstream os;
    os << "KG Coulomb fixture needs 0 < Z alpha < 1/2, got " << z_alpha;
    fail(ErrorCode::kInvalidArgument, os.str());
  }
  const double za2 = z_alpha * z_alpha;
  const double gamma = 0.5 * (1.0 + std::sqrt(1.0 - 4.0 * za2));
  const double mc2 = k.m * k.c * k.c;
  const double energy = mc2 / std::sqrt(1.0 + za2 / (gamma * gamma));
  const double lambda = energy * z_alpha / (gamma * k.hbar * k.c);
  const double phase_energy = energy_override.value_or(energy);
  const double power = gamma - 1.0;
  const double hbar = k.hbar;
  const double c = k.c;

  ScalarWave w;
  w.energy = phase_energy;
  w.singular_radius = kSingularRadius;
  {
    std::ostringstream os;
    os << "kg-coulomb-1s(Zalpha=" << z_alpha << ")";
    if (energy_override) os << "[E=" << *energy_override << "]";
    w.label = os.str();
  }
  const Complex omega = -kI * phase_energy / hbar;
  w.field.value = [=](const Event& e) {
    return radial_value(e, power, lambda) * std::exp(omega * e.t);
  };
  w.field.jet = [=](const Event& e) {
    const CoordJet phase = exp(linear_jet(e, {0.0, 0.0, 0.0, omega}, 0.0));
    return radial_jet(e, power, lambda) * phase;
  };
  // Radial Laplacian R'' + 2R'/r plus the time part E^2/(hbar c)^2.
  w.field.laplace4 = [=](const Event& e) {
    const double r = checked_radius(e);
    const double a = power / r - lambda;
    const double radial = a * a - power / (r * r) + 2.0 * a / r;
    const double temporal = phase_energy * phase_energy / (hbar * hbar * c * c);
    return (radial + temporal) * radial_value(e, power, lambda) * std::exp(omega * e.t);
  };
  return w;
}

SpinorWave dirac_plane_wave(const std::array<double, 3>& p, Spin spin,
                            const PhysicalConstants& k) {
  k.validate();
  for (double x : p) {
    if (!std::isfinite(x)) fail(ErrorCode::kInvalidArgument, "spinor momentum must be finite");
  }
  const double energy = dispersion_energy(p, k);
  const double mc2 = k.m * k.c * k.c;
  const std::array<Complex, 2> chi =
      spin == Spin::kUp ? std::array<Complex, 2>{1.0, 0.0} : std::array<Complex, 2>{0.0, 1.0};
  // sigma . p
  const Complex s00 = p[2], s01 = Complex(p[0], -p[1]), s10 = Complex(p[0], p[1]),
                s11 = -p[2];
  const double f = k.c / (energy + mc2);
  const Spinor w{chi[0], chi[1], f * (s00 * chi[0] + s01 * chi[1]),
                 f * (s10 * chi[0] + s11 * chi[1])};

  const ScalarField base = plane_field(p, energy, k);
  SpinorWave out;
  out.energy = energy;
  for (std::size_t i = 0; i < 4; ++i) {
    out.vanishing[i] = w[i] == Complex(0.0);
    out.components[i] = out.vanishing[i] ? ScalarField::zero() : scaled_field(w[i], base);
  }
  std::ostringstream os;
  os << "dirac-plane-wave(p=" << p[0] << "," << p[1] << "," << p[2]
     << ",spin=" << (spin == Spin::kUp ? "up" : "down") << ")";
  out.label = os.str();
  return out;
}

SpinorWave dirac_coulomb_1s(double z_alpha, const PhysicalConstants& k, Spin spin,
                            std::optional<double> energy_override) {
  k.validate();
  if (!(z_alpha > 0.0 && z_alpha < 1.0)) {
    std::ostringstream os;
    os << "Dirac Coulomb fixture needs 0 < Z alpha < 1, got " << z_alpha;
    fail(ErrorCode::kInvalidArgument, os.str());
  }
  const double s = std::sqrt(1.0 - z_alpha * z_alpha);
  const double lambda = z_alpha * k.m * k.c / k.hbar;
  const double ratio = (1.0 - s) / z_alpha;
  const double energy = s * k.m * k.c * k.c;
  const double phase_energy = energy_override.value_or(energy);
  const Complex omega = -kI * phase_energy / k.hbar;

  // Large components: g(r) chi. Small components: i a (g(r)/r) (sigma.x) chi,
  // with sigma.x chi_up = (z, x + iy) and sigma.x chi_down = (x - iy, -z).
  using Lin = std::array<Complex, 4>;
  struct Part {
    bool radial_only;  // g(r) alone, otherwise (g/r) * linear
    Complex coef;
    Lin lin;
  };
  std::array<std::optional<Part>, 4> parts;
  const Complex small = kI * ratio;
  if (spin == Spin::kUp) {
    parts[0] = Part{true, 1.0, {}};
    parts[2] = Part{false, small, Lin{0.0, 0.0, 1.0, 0.0}};
    parts[3] = Part{false, small, Lin{1.0, kI, 0.0, 0.0}};
  } else {
    parts[1] = Part{true, 1.0, {}};
    parts[2] = Part{false, small, Lin{1.0, -kI, 0.0, 0.0}};
    parts[3] = Part{false, -small, Lin{0.0, 0.0, 1.0, 0.0}};
  }

  SpinorWave out;
  out.energy = phase_energy;
  out.singular_radius = kSingularRadius;
  for (std::size_t i = 0; i < 4; ++i) {
    if (!parts[i]) {
      out.vanishing[i] = true;
      out.components[i] = ScalarField::zero();
      continue;
    }
    const Part part = *parts[i];
    const double power = part.radial_only ? s - 1.0 : s - 2.0;
    ScalarField f;
    f.value = [=](const Event& e) {
      Complex v = part.coef * radial_value(e, power, lambda) * std::exp(omega * e.t);
      if (!part.radial_only) {
        Complex l = 0.0;
        for (std::size_t a = 0; a < 4; ++a) l += part.lin[a] * e[static_cast<int>(a)];
        v *= l;
      }
      return v;
    };
    f.jet = [=](const Event& e) {
      CoordJet j = radial_jet(e, power, lambda) *
                   exp(linear_jet(e, {0.0, 0.0, 0.0, omega}, 0.0));
      if (!part.radial_only) j = j * linear_jet(e, part.lin, 0.0);
      return part.coef * j;
    };
    out.components[i] = std::move(f);
  }
  std::ostringstream os;
  os << "dirac-coulomb-1s(Zalpha=" << z_alpha
     << ",spin=" << (spin == Spin::kUp ? "up" : "down") << ")";
  if (energy_override) os << "[E=" << *energy_override << "]";
  out.label = os.str();
  return out;
}

namespace {

ScalarField random_component(SplitRng& rng, const Event& center) {
  std::vector<Polynomial4::Term> terms;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; a + b <= 2; ++b)
      for (int c = 0; a + b + c <= 2; ++c)
        for (int d = 0; a + b + c + d <= 2; ++d) {
          const double re = rng.uniform(-1.0, 1.0);
          const double im = rng.uniform(-1.0, 1.0);
          terms.push_back({Complex(re, im), {a, b, c, d}});
        }
  const Polynomial4 poly(std::move(terms));
  auto gaussian_exponent = [center](const Event& e) {
    // -(|x - x0|^2 + (t - t0)^2) / 2 as a jet
    CoordJet q;
    for (std::size_t i = 0; i < 4; ++i) {
      const double dx = e[static_cast<int>(i)] - center[static_cast<int>(i)];
      q.value += -0.5 * dx * dx;
      q.d[i] = -dx;
      q.dd[i][i] = -1.0;
    }
    return q;
  };
  return ScalarField::from_jet([poly, gaussian_exponent](const Event& e) {
    return poly.jet(e) * exp(gaussian_exponent(e));
  });
}

}  // namespace

SpinorWave random_smooth_spinor(std::uint64_t seed, const Event& center) {
  SplitRng rng(seed);
  SpinorWave out;
  for (auto& c : out.components) c = random_component(rng, center);
  std::ostringstream os;
  os << "random-smooth-spinor(seed=" << seed << ")";
  out.label = os.str();
  return out;
}

ScalarWave random_smooth_scalar(std::uint64_t seed, const Event& center) {
  SplitRng rng(seed);
  ScalarWave w;
  w.field = random_component(rng, center);
  std::ostringstream os;
  os << "random-smooth-scalar(seed=" << seed << ")";
  w.label = os.str();
  return w;
}

}  // namespace vfield
