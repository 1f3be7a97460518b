#pragma once

// Differentiation engine: second-order jets of complex scalar fields, either
// from closed-form evaluators or from 4th-order central differences.

#include <array>
#include <functional>
#include <string>

#include "vfield/core4.hpp"

namespace vfield {

/// Value, first and second derivatives with respect to the real coordinates
/// (x1, x2, x3, t).
struct CoordJet {
  Complex value{};
  std::array<Complex, 4> d{};
  std::array<std::array<Complex, 4>, 4> dd{};

  static CoordJet constant(Complex v);
  /// Jet of a single coordinate: f(e) = e[axis].
  static CoordJet coordinate(const Event& e, int axis);
};

CoordJet operator+(const CoordJet& a, const CoordJet& b);
CoordJet operator*(const CoordJet& a, const CoordJet& b);
CoordJet operator*(Complex s, const CoordJet& a);
/// exp(f) by the chain rule.
CoordJet exp(const CoordJet& f);

/// Jet in 4-derivative form: grad[mu] = d_mu f, hess(mu, nu) = d_mu d_nu f,
/// laplace = d_mu d_mu f.
struct Jet {
  Complex value{};
  FourVector grad{};
  Matrix4 hess{};
  Complex laplace{};
};

Jet to_ict(const CoordJet& j, double c);

/// A complex scalar field with optional closed-form derivatives.
struct ScalarField {
  std::function<Complex(const Event&)> value;
  /// Closed-form coordinate jet; empty when only numeric derivatives exist.
  std::function<CoordJet(const Event&)> jet;
  /// Optional independent closed form for d_mu d_mu f. When absent the
  /// trace of the analytic Hessian is used.
  std::function<Complex(const Event&)> laplace4;

  bool has_analytic() const { return static_cast<bool>(jet); }

  static ScalarField zero();
  static ScalarField from_jet(std::function<CoordJet(const Event&)> j);
};

/// Full jet of f at e, analytic or by central differences. Throws
/// kUnsupportedConfiguration if analytic derivatives are requested from a
/// field that has none.
Jet evaluate_jet(const ScalarField& f, const Event& e, const DerivativeMethod& d,
                 double c);

FourVector grad4(const ScalarField& f, const Event& e, const DerivativeMethod& d,
                 double c);
Complex laplace4(const ScalarField& f, const Event& e, const DerivativeMethod& d,
                 double c);
/// (d_mu f) / f without taking a logarithm. Throws kNearZeroWavefunction when
/// |f(e)| <= psi_floor.
FourVector dlog(const ScalarField& f, const Event& e, const DerivativeMethod& d,
                double c, double psi_floor);

/// Coordinate step used along axis `axis` (time steps are scaled by 1/c so
/// the x4 step matches the spatial one).
double stencil_step(int axis, double h, double c);

Event shifted(const Event& e, int axis, double delta);

/// 4th-order central first derivative of an arbitrary vector-space valued
/// function along one coordinate axis.
template <class F>
auto central_first(const F& f, const Event& e, int axis, double step) {
  auto fp2 = f(shifted(e, axis, 2.0 * step));
  auto fp1 = f(shifted(e, axis, step));
  auto fm1 = f(shifted(e, axis, -step));
  auto fm2 = f(shifted(e, axis, -2.0 * step));
  const Complex w = 1.0 / (12.0 * step);
  return w * ((fm2 - fp2) + Complex(8.0) * (fp1 - fm1));
}

/// Derivative along each coordinate converted to d_mu, returned as
/// result[mu]. Optional Richardson extrapolation of the 4th-order stencil.
template <class F>
auto central_grad4(const F& f, const Event& e, const DerivativeMethod& d,
                   double c) {
  using T = decltype(f(e));
  const auto s = ict_scale(c);
  std::array<T, 4> out{};
  for (int mu = 0; mu < 4; ++mu) {
    const double step = stencil_step(mu, d.h, c);
    T g = central_first(f, e, mu, step);
    if (d.richardson) {
      T g2 = central_first(f, e, mu, 0.5 * step);
      g = Complex(1.0 / 15.0) * (Complex(16.0) * g2 - g);
    }
    out[static_cast<std::size_t>(mu)] = s[static_cast<std::size_t>(mu)] * g;
  }
  return out;
}

}  // namespace vfield
