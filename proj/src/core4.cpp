#include "vfield/core4.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vfield/errors.hpp"
#include "vfield/fields.hpp"
#include "vfield/jet.hpp"

namespace vfield {

void PhysicalConstants::validate() const {
  const bool ok = std::isfinite(hbar) && std::isfinite(c) && std::isfinite(m) &&
                  std::isfinite(q) && hbar > 0.0 && c > 0.0 && m > 0.0;
  if (!ok) {
    std::ostringstream os;
    os << "physical constants must be finite with hbar, c, m > 0 (hbar=" << hbar
       << ", c=" << c << ", m=" << m << ", q=" << q << ")";
    fail(ErrorCode::kInvalidArgument, os.str());
  }
}

double Event::operator[](int i) const {
  switch (i) {
    case 0: return x1;
    case 1: return x2;
    case 2: return x3;
    default: return t;
  }
}

double& Event::operator[](int i) {
  switch (i) {
    case 0: return x1;
    case 1: return x2;
    case 2: return x3;
    default: return t;
  }
}

double Event::radius() const { return std::sqrt(x1 * x1 + x2 * x2 + x3 * x3); }

Event operator+(const Event& a, const Event& b) {
  return {a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3, a.t + b.t};
}

Event operator-(const Event& a, const Event& b) {
  return {a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3, a.t - b.t};
}

Event operator*(double s, const Event& a) {
  return {s * a.x1, s * a.x2, s * a.x3, s * a.t};
}

FourVector& FourVector::operator+=(const FourVector& o) {
  for (int i = 0; i < 4; ++i) (*this)[i] += o[i];
  return *this;
}

FourVector& FourVector::operator-=(const FourVector& o) {
  for (int i = 0; i < 4; ++i) (*this)[i] -= o[i];
  return *this;
}

FourVector& FourVector::operator*=(Complex s) {
  for (auto& x : v) x *= s;
  return *this;
}

double FourVector::max_abs() const {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

double FourVector::norm() const {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

FourVector operator+(FourVector a, const FourVector& b) { return a += b; }
FourVector operator-(FourVector a, const FourVector& b) { return a -= b; }
FourVector operator*(Complex s, FourVector a) { return a *= s; }

Matrix4 Matrix4::identity() {
  Matrix4 m;
  for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
  return m;
}

Matrix4 Matrix4::transpose() const {
  Matrix4 t;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double Matrix4::max_abs() const {
  double m = 0.0;
  for (const auto& row : a)
    for (const auto& x : row) m = std::max(m, std::abs(x));
  return m;
}

Matrix4 operator+(const Matrix4& x, const Matrix4& y) {
  Matrix4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = x(i, j) + y(i, j);
  return r;
}

Matrix4 operator-(const Matrix4& x, const Matrix4& y) {
  Matrix4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = x(i, j) - y(i, j);
  return r;
}

Matrix4 operator*(const Matrix4& x, const Matrix4& y) {
  Matrix4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Complex s = 0.0;
      for (int k = 0; k < 4; ++k) s += x(i, k) * y(k, j);
      r(i, j) = s;
    }
  return r;
}

Matrix4 operator*(Complex s, const Matrix4& x) {
  Matrix4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = s * x(i, j);
  return r;
}

FourVector operator*(const Matrix4& x, const FourVector& v) {
  FourVector r;
  for (int i = 0; i < 4; ++i) {
    Complex s = 0.0;
    for (int k = 0; k < 4; ++k) s += x(i, k) * v[k];
    r[i] = s;
  }
  return r;
}

FourVector displacement(const Event& d, double c) {
  return FourVector{{Complex(d.x1), Complex(d.x2), Complex(d.x3), kI * c * d.t}};
}

Complex contract(const FourVector& a, const FourVector& b) {
  // Summed in a fixed symmetric order so contract(a, b) == contract(b, a)
  // bit for bit.
  Complex s = 0.0;
  for (int i = 0; i < 4; ++i) s += a[i] * b[i];
  return s;
}

double lorentz_gamma(double v, double c) {
  if (!(std::abs(v) < c) || !std::isfinite(v)) {
    std::ostringstream os;
    os << "boost speed |v| = " << std::abs(v) << " must be below c = " << c;
    fail(ErrorCode::kInvalidBoost, os.str());
  }
  const double beta = v / c;
  return 1.0 / std::sqrt(1.0 - beta * beta);
}

Event boost_x1(const Event& e, double v, double c) {
  const double g = lorentz_gamma(v, c);
  return {g * (e.x1 - v * e.t), e.x2, e.x3, g * (e.t - v * e.x1 / (c * c))};
}

void DerivativeMethod::validate() const {
  if (mode == Mode::kCentralDifference && !(std::isfinite(h) && h > 0.0)) {
    std::ostringstream os;
    os << "finite-difference step must be positive and finite, got " << h;
    fail(ErrorCode::kInvalidArgument, os.str());
  }
}

std::array<Complex, 4> ict_scale(double c) {
  return {Complex(1.0), Complex(1.0), Complex(1.0), Complex(0.0, -1.0 / c)};
}

Matrix4 field_strength(const PotentialField& A, const Event& e,
                       const DerivativeMethod& d, double c) {
  const Matrix4 dA = potential_gradient(A, e, d, c);
  Matrix4 F;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = mu + 1; nu < 4; ++nu) {
      const Complex f = dA(mu, nu) - dA(nu, mu);
      F(mu, nu) = f;
      F(nu, mu) = -f;
    }
  }
  return F;
}

}  // namespace vfield
