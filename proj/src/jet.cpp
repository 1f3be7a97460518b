#include "vfield/jet.hpp"

#include <cmath>
#include <sstream>

#include "vfield/errors.hpp"

namespace vfield {

CoordJet CoordJet::constant(Complex v) {
  CoordJet j;
  j.value = v;
  return j;
}

CoordJet CoordJet::coordinate(const Event& e, int axis) {
  CoordJet j;
  j.value = e[axis];
  j.d[static_cast<std::size_t>(axis)] = 1.0;
  return j;
}

CoordJet operator+(const CoordJet& a, const CoordJet& b) {
  CoordJet r;
  r.value = a.value + b.value;
  for (std::size_t i = 0; i < 4; ++i) {
    r.d[i] = a.d[i] + b.d[i];
    for (std::size_t k = 0; k < 4; ++k) r.dd[i][k] = a.dd[i][k] + b.dd[i][k];
  }
  return r;
}

CoordJet operator*(const CoordJet& a, const CoordJet& b) {
  CoordJet r;
  r.value = a.value * b.value;
  for (std::size_t i = 0; i < 4; ++i) {
    r.d[i] = a.d[i] * b.value + a.value * b.d[i];
    for (std::size_t k = 0; k < 4; ++k) {
      r.dd[i][k] = a.dd[i][k] * b.value + a.d[i] * b.d[k] + a.d[k] * b.d[i] +
                   a.value * b.dd[i][k];
    }
  }
  return r;
}

CoordJet operator*(Complex s, const CoordJet& a) {
  CoordJet r;
  r.value = s * a.value;
  for (std::size_t i = 0; i < 4; ++i) {
    r.d[i] = s * a.d[i];
    for (std::size_t k = 0; k < 4; ++k) r.dd[i][k] = s * a.dd[i][k];
  }
  return r;
}

CoordJet exp(const CoordJet& f) {
  CoordJet r;
  r.value = std::exp(f.value);
  for (std::size_t i = 0; i < 4; ++i) {
    r.d[i] = r.value * f.d[i];
    for (std::size_t k = 0; k < 4; ++k)
      r.dd[i][k] = r.value * (f.dd[i][k] + f.d[i] * f.d[k]);
  }
  return r;
}

Jet to_ict(const CoordJet& j, double c) {
  const auto s = ict_scale(c);
  Jet out;
  out.value = j.value;
  for (std::size_t mu = 0; mu < 4; ++mu) {
    out.grad.v[mu] = s[mu] * j.d[mu];
    for (std::size_t nu = 0; nu < 4; ++nu)
      out.hess.a[mu][nu] = s[mu] * s[nu] * j.dd[mu][nu];
  }
  Complex lap = 0.0;
  for (int mu = 0; mu < 4; ++mu) lap += out.hess(mu, mu);
  out.laplace = lap;
  return out;
}

ScalarField ScalarField::zero() {
  ScalarField f;
  f.value = [](const Event&) { return Complex(0.0); };
  f.jet = [](const Event&) { return CoordJet{}; };
  f.laplace4 = [](const Event&) { return Complex(0.0); };
  return f;
}

ScalarField ScalarField::from_jet(std::function<CoordJet(const Event&)> j) {
  ScalarField f;
  f.value = [j](const Event& e) { return j(e).value; };
  f.jet = std::move(j);
  return f;
}

double stencil_step(int axis, double h, double c) {
  return axis == 3 ? h / c : h;
}

Event shifted(const Event& e, int axis, double delta) {
  Event r = e;
  r[axis] += delta;
  return r;
}

namespace {

// Numeric coordinate jet with the 5-point stencils; mixed partials nest the
// first-derivative stencil.
CoordJet numeric_coord_jet(const ScalarField& f, const Event& e, double h,
                           double c) {
  CoordJet j;
  const Complex f0 = f.value(e);
  j.value = f0;
  for (int i = 0; i < 4; ++i) {
    const double s = stencil_step(i, h, c);
    const Complex fp1 = f.value(shifted(e, i, s));
    const Complex fp2 = f.value(shifted(e, i, 2.0 * s));
    const Complex fm1 = f.value(shifted(e, i, -s));
    const Complex fm2 = f.value(shifted(e, i, -2.0 * s));
    const auto ui = static_cast<std::size_t>(i);
    j.d[ui] = (fm2 - fp2 + 8.0 * (fp1 - fm1)) / (12.0 * s);
    j.dd[ui][ui] = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * s * s);
  }
  for (int i = 0; i < 4; ++i) {
    for (int k = i + 1; k < 4; ++k) {
      const double si = stencil_step(i, h, c);
      const double sk = stencil_step(k, h, c);
      auto di = [&](const Event& at) { return central_first(f.value, at, i, si); };
      const Complex m = central_first(di, e, k, sk);
      j.dd[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = m;
      j.dd[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = m;
    }
  }
  return j;
}

}  // namespace

Jet evaluate_jet(const ScalarField& f, const Event& e, const DerivativeMethod& d,
                 double c) {
  if (d.is_analytic()) {
    if (!f.has_analytic()) {
      fail(ErrorCode::kUnsupportedConfiguration,
           "analytic derivatives requested for a field without a closed-form jet");
    }
    Jet out = to_ict(f.jet(e), c);
    if (f.laplace4) out.laplace = f.laplace4(e);
    return out;
  }
  d.validate();
  CoordJet j = numeric_coord_jet(f, e, d.h, c);
  if (d.richardson) {
    const CoordJet half = numeric_coord_jet(f, e, 0.5 * d.h, c);
    j = Complex(1.0 / 15.0) * (Complex(16.0) * half + Complex(-1.0) * j);
  }
  return to_ict(j, c);
}

FourVector grad4(const ScalarField& f, const Event& e, const DerivativeMethod& d,
                 double c) {
  if (d.is_analytic()) return evaluate_jet(f, e, d, c).grad;
  d.validate();
  const auto g = central_grad4(f.value, e, d, c);
  return FourVector{g};
}

Complex laplace4(const ScalarField& f, const Event& e, const DerivativeMethod& d,
                 double c) {
  return evaluate_jet(f, e, d, c).laplace;
}

FourVector dlog(const ScalarField& f, const Event& e, const DerivativeMethod& d,
                double c, double psi_floor) {
  const Complex v = f.value(e);
  if (!(std::abs(v) > psi_floor)) {
    std::ostringstream os;
    os << "wavefunction magnitude " << std::abs(v) << " at event (" << e.x1 << ", "
       << e.x2 << ", " << e.x3 << ", t=" << e.t << ") is below the floor " << psi_floor;
    fail(ErrorCode::kNearZeroWavefunction, os.str());
  }
  FourVector g = grad4(f, e, d, c);
  g *= 1.0 / v;
  return g;
}

}  // namespace vfield
