#pragma once

// 4-vector kinematics in the x4 = ict convention.
//
// Events are stored with a real time coordinate; the factor i of the fourth
// coordinate is carried by 4-vector component 4 and by the derivative
// d/dx4 = (1/(ic)) d/dt. Components are indexed 0..3 in code, which
// corresponds to mu = 1..4. With this convention all contractions are plain
// sums a_mu b_mu with no metric.

#include <array>
#include <complex>
#include <functional>

namespace vfield {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

struct PhysicalConstants {
  double hbar = 1.0;
  double c = 1.0;
  double m = 1.0;
  double q = -1.0;

  /// Throws kInvalidArgument unless hbar, c, m > 0 and q is finite.
  void validate() const;
};

/// Real space-time event (x1, x2, x3, t).
struct Event {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;
  double t = 0.0;

  double operator[](int i) const;
  double& operator[](int i);
  double radius() const;

  friend bool operator==(const Event&, const Event&) = default;
};

Event operator+(const Event& a, const Event& b);
Event operator-(const Event& a, const Event& b);
Event operator*(double s, const Event& a);

struct FourVector {
  std::array<Complex, 4> v{};

  Complex& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  const Complex& operator[](int i) const { return v[static_cast<std::size_t>(i)]; }

  FourVector& operator+=(const FourVector& o);
  FourVector& operator-=(const FourVector& o);
  FourVector& operator*=(Complex s);

  /// Largest |component|.
  double max_abs() const;
  /// sqrt(sum |component|^2), the Euclidean size of the complex components.
  double norm() const;

  friend bool operator==(const FourVector&, const FourVector&) = default;
};

FourVector operator+(FourVector a, const FourVector& b);
FourVector operator-(FourVector a, const FourVector& b);
FourVector operator*(Complex s, FourVector a);

struct Matrix4 {
  std::array<std::array<Complex, 4>, 4> a{};

  Complex& operator()(int r, int c) {
    return a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  const Complex& operator()(int r, int c) const {
    return a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }

  static Matrix4 identity();

  Matrix4 transpose() const;
  double max_abs() const;

  friend bool operator==(const Matrix4&, const Matrix4&) = default;
};

Matrix4 operator+(const Matrix4& x, const Matrix4& y);
Matrix4 operator-(const Matrix4& x, const Matrix4& y);
Matrix4 operator*(const Matrix4& x, const Matrix4& y);
Matrix4 operator*(Complex s, const Matrix4& x);
FourVector operator*(const Matrix4& x, const FourVector& v);

/// The space-time vector of an event displacement: (dx1, dx2, dx3, i c dt).
FourVector displacement(const Event& d, double c);

/// sum_mu a_mu b_mu.
Complex contract(const FourVector& a, const FourVector& b);

/// Lorentz boost along x1. Throws kInvalidBoost for |v| >= c.
Event boost_x1(const Event& e, double v, double c);
double lorentz_gamma(double v, double c);

struct DerivativeMethod {
  enum class Mode { kAnalytic, kCentralDifference };

  Mode mode = Mode::kAnalytic;
  double h = 1e-3;
  bool richardson = false;

  static DerivativeMethod analytic() { return {}; }
  static DerivativeMethod numeric(double step = 1e-3) {
    return {Mode::kCentralDifference, step, false};
  }

  bool is_analytic() const { return mode == Mode::kAnalytic; }
  void validate() const;
};

/// Multipliers turning coordinate derivatives (d/dx1, d/dx2, d/dx3, d/dt)
/// into 4-derivatives d/dx_mu.
std::array<Complex, 4> ict_scale(double c);

// Forward declarations for the operations that take potentials.
struct PotentialField;

/// F_{mu nu} = d_mu A_nu - d_nu A_mu, antisymmetrized after evaluation.
Matrix4 field_strength(const PotentialField& A, const Event& e,
                       const DerivativeMethod& d, double c);

}  // namespace vfield
