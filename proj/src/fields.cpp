#include "vfield/fields.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "vfield/errors.hpp"
#include "vfield/random.hpp"

namespace vfield {

Polynomial4::Polynomial4(std::vector<Term> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    for (int e : t.exps) {
      if (e < 0) fail(ErrorCode::kInvalidArgument, "negative polynomial exponent");
    }
  }
}

int Polynomial4::degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.exps[0] + t.exps[1] + t.exps[2] + t.exps[3]);
  return d;
}

bool Polynomial4::is_real() const {
  for (const auto& t : terms_)
    if (t.coef.imag() != 0.0) return false;
  return true;
}

namespace {

// x^n and its first two derivatives.
struct Power {
  double v, d1, d2;
};

Power power(double x, int n) {
  if (n == 0) return {1.0, 0.0, 0.0};
  const double v = std::pow(x, n);
  const double d1 = n * std::pow(x, n - 1);
  const double d2 = n >= 2 ? n * (n - 1) * std::pow(x, n - 2) : 0.0;
  return {v, d1, d2};
}

}  // namespace

Complex Polynomial4::value(const Event& e) const {
  Complex s = 0.0;
  for (const auto& t : terms_) {
    double m = 1.0;
    for (int i = 0; i < 4; ++i) m *= power(e[i], t.exps[static_cast<std::size_t>(i)]).v;
    s += t.coef * m;
  }
  return s;
}

CoordJet Polynomial4::jet(const Event& e) const {
  CoordJet j;
  for (const auto& t : terms_) {
    std::array<Power, 4> p{};
    for (int i = 0; i < 4; ++i)
      p[static_cast<std::size_t>(i)] = power(e[i], t.exps[static_cast<std::size_t>(i)]);
    auto prod = [&](int skip_a, int skip_b) {
      double m = 1.0;
      for (int i = 0; i < 4; ++i)
        if (i != skip_a && i != skip_b) m *= p[static_cast<std::size_t>(i)].v;
      return m;
    };
    j.value += t.coef * prod(-1, -1);
    for (std::size_t a = 0; a < 4; ++a) {
      const int ia = static_cast<int>(a);
      j.d[a] += t.coef * p[a].d1 * prod(ia, -1);
      j.dd[a][a] += t.coef * p[a].d2 * prod(ia, -1);
      for (std::size_t b = 0; b < 4; ++b) {
        if (b == a) continue;
        j.dd[a][b] += t.coef * p[a].d1 * p[b].d1 * prod(ia, static_cast<int>(b));
      }
    }
  }
  return j;
}

Polynomial4 Polynomial4::random(std::uint64_t seed, int max_degree, double scale,
                                bool complex_coefs) {
  SplitRng rng(seed);
  std::vector<Term> terms;
  for (int a = 0; a <= max_degree; ++a)
    for (int b = 0; a + b <= max_degree; ++b)
      for (int c = 0; a + b + c <= max_degree; ++c)
        for (int d = 0; a + b + c + d <= max_degree; ++d) {
          const double re = rng.uniform(-scale, scale);
          const double im = complex_coefs ? rng.uniform(-scale, scale) : 0.0;
          terms.push_back({Complex(re, im), {a, b, c, d}});
        }
  return Polynomial4(std::move(terms));
}

CoordJet GaugeFunction::jet(const Event& e) const {
  CoordJet j;
  j.value = value(e);
  const auto g = gradient(e);
  const auto h = hessian(e);
  for (std::size_t i = 0; i < 4; ++i) {
    j.d[i] = g[i];
    for (std::size_t k = 0; k < 4; ++k) j.dd[i][k] = h[i][k];
  }
  return j;
}

GaugeFunction GaugeFunction::zero() {
  GaugeFunction g;
  g.value = [](const Event&) { return 0.0; };
  g.gradient = [](const Event&) { return std::array<double, 4>{}; };
  g.hessian = [](const Event&) { return std::array<std::array<double, 4>, 4>{}; };
  g.description = "0";
  return g;
}

GaugeFunction GaugeFunction::from_polynomial(const Polynomial4& p) {
  if (!p.is_real()) {
    fail(ErrorCode::kInvalidArgument, "gauge functions must be real-valued");
  }
  GaugeFunction g;
  g.value = [p](const Event& e) { return p.value(e).real(); };
  g.gradient = [p](const Event& e) {
    const CoordJet j = p.jet(e);
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) out[i] = j.d[i].real();
    return out;
  };
  g.hessian = [p](const Event& e) {
    const CoordJet j = p.jet(e);
    std::array<std::array<double, 4>, 4> out{};
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t k = 0; k < 4; ++k) out[i][k] = j.dd[i][k].real();
    return out;
  };
  std::ostringstream os;
  os << "polynomial(degree " << p.degree() << ", " << p.terms().size() << " terms)";
  g.description = os.str();
  return g;
}

GaugeFunction GaugeFunction::negated() const {
  GaugeFunction g;
  auto v = value;
  auto gr = gradient;
  auto h = hessian;
  g.value = [v](const Event& e) { return -v(e); };
  g.gradient = [gr](const Event& e) {
    auto out = gr(e);
    for (auto& x : out) x = -x;
    return out;
  };
  g.hessian = [h](const Event& e) {
    auto out = h(e);
    for (auto& row : out)
      for (auto& x : row) x = -x;
    return out;
  };
  g.description = "-(" + description + ")";
  return g;
}

std::string to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::kZero: return "zero";
    case PotentialKind::kConstant: return "constant";
    case PotentialKind::kCoulomb: return "coulomb";
    case PotentialKind::kPureGauge: return "pure-gauge";
    case PotentialKind::kSum: return "sum";
  }
  return "unknown";
}

namespace {

void check_regular(const PotentialField& A, const Event& e) {
  if (A.singular_radius > 0.0 && !(e.radius() > A.singular_radius)) {
    std::ostringstream os;
    os << "potential '" << A.description << "' is singular at r = " << e.radius();
    fail(ErrorCode::kSingularPoint, os.str());
  }
}

}  // namespace

Matrix4 potential_gradient(const PotentialField& A, const Event& e,
                           const DerivativeMethod& d, double c) {
  check_regular(A, e);
  if (d.is_analytic()) return A.gradient(e);
  d.validate();
  const auto rows = central_grad4(A.value, e, d, c);
  Matrix4 G;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) G(mu, nu) = rows[static_cast<std::size_t>(mu)][nu];
  return G;
}

PotentialField zero_potential() {
  PotentialField A;
  A.kind = PotentialKind::kZero;
  A.description = "zero";
  A.value = [](const Event&) { return FourVector{}; };
  A.gradient = [](const Event&) { return Matrix4{}; };
  return A;
}

PotentialField constant_potential(const FourVector& a) {
  PotentialField A;
  A.kind = PotentialKind::kConstant;
  A.description = "constant";
  A.value = [a](const Event&) { return a; };
  A.gradient = [](const Event&) { return Matrix4{}; };
  return A;
}

PotentialField coulomb_potential(double z_alpha, const PhysicalConstants& k) {
  k.validate();
  if (!(z_alpha > 0.0 && z_alpha <= 0.5)) {
    std::ostringstream os;
    os << "Coulomb coupling Z alpha must lie in (0, 1/2], got " << z_alpha;
    fail(ErrorCode::kInvalidArgument, os.str());
  }
  if (k.q == 0.0) {
    fail(ErrorCode::kInvalidArgument, "Coulomb fixture needs a nonzero charge q");
  }
  // A_4 = i phi / c with q phi = -Z alpha hbar c / r.
  const Complex strength = -kI * z_alpha * k.hbar / k.q;
  const double singular = 1e-12;
  PotentialField A;
  A.kind = PotentialKind::kCoulomb;
  A.parameter = z_alpha;
  A.singular_radius = singular;
  {
    std::ostringstream os;
    os << "coulomb(Zalpha=" << z_alpha << ")";
    A.description = os.str();
  }
  auto guard = [singular](const Event& e) {
    const double r = e.radius();
    if (!(r > singular)) {
      std::ostringstream os;
      os << "Coulomb potential is singular at r = " << r;
      fail(ErrorCode::kSingularPoint, os.str());
    }
    return r;
  };
  A.value = [strength, guard](const Event& e) {
    const double r = guard(e);
    FourVector a;
    a[3] = strength / r;
    return a;
  };
  A.gradient = [strength, guard](const Event& e) {
    const double r = guard(e);
    Matrix4 G;
    const double r3 = r * r * r;
    for (int i = 0; i < 3; ++i) G(i, 3) = -strength * e[i] / r3;
    return G;
  };
  return A;
}

PotentialField pure_gauge_potential(const GaugeFunction& chi, double c) {
  PotentialField A;
  A.kind = PotentialKind::kPureGauge;
  A.description = "pure-gauge(" + chi.description + ")";
  A.value = [chi, c](const Event& e) {
    return to_ict(chi.jet(e), c).grad;
  };
  A.gradient = [chi, c](const Event& e) {
    // G(mu, nu) = d_mu d_nu chi, symmetric.
    return to_ict(chi.jet(e), c).hess;
  };
  return A;
}

PotentialField sum_potential(const PotentialField& a, const PotentialField& b) {
  PotentialField A;
  A.kind = PotentialKind::kSum;
  A.description = a.description + " + " + b.description;
  A.singular_radius = std::max(a.singular_radius, b.singular_radius);
  A.parameter = a.kind == PotentialKind::kCoulomb ? a.parameter : b.parameter;
  A.value = [a, b](const Event& e) { return a.value(e) + b.value(e); };
  A.gradient = [a, b](const Event& e) { return a.gradient(e) + b.gradient(e); };
  return A;
}

Complex lorenz_gauge_residual(const PotentialField& A, const Event& e,
                              const DerivativeMethod& d, double c) {
  const Matrix4 G = potential_gradient(A, e, d, c);
  return G(0, 0) + G(1, 1) + G(2, 2) + G(3, 3);
}

ScalarField gauge_transform_field(const ScalarField& psi, const GaugeFunction& chi,
                                  const PhysicalConstants& k) {
  const Complex factor = kI * k.q / k.hbar;
  ScalarField out;
  out.value = [psi, chi, factor](const Event& e) {
    return psi.value(e) * std::exp(factor * chi.value(e));
  };
  if (psi.has_analytic()) {
    out.jet = [psi, chi, factor](const Event& e) {
      return psi.jet(e) * exp(factor * chi.jet(e));
    };
  }
  return out;
}

GaugedPair gauge_transform(const PotentialField& A, const ScalarField& psi,
                           const GaugeFunction& chi, const PhysicalConstants& k) {
  k.validate();
  return {sum_potential(A, pure_gauge_potential(chi, k.c)),
          gauge_transform_field(psi, chi, k)};
}

}  // namespace vfield
