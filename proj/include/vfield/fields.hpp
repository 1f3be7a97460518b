#pragma once

// Electromagnetic 4-potentials, gauge functions and gauge transformations.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "vfield/core4.hpp"
#include "vfield/jet.hpp"

namespace vfield {

/// Polynomial in the real coordinates (x1, x2, x3, t) with complex
/// coefficients.
class Polynomial4 {
 public:
  struct Term {
    Complex coef;
    std::array<int, 4> exps{};
  };

  Polynomial4() = default;
  explicit Polynomial4(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  int degree() const;
  bool is_real() const;

  Complex value(const Event& e) const;
  CoordJet jet(const Event& e) const;

  /// Random polynomial of total degree <= max_degree with coefficients
  /// uniform in [-scale, scale] (imaginary parts only when `complex_coefs`).
  static Polynomial4 random(std::uint64_t seed, int max_degree, double scale,
                            bool complex_coefs);

 private:
  std::vector<Term> terms_;
};

/// Real gauge function chi with closed-form coordinate derivatives.
struct GaugeFunction {
  std::function<double(const Event&)> value;
  std::function<std::array<double, 4>(const Event&)> gradient;
  std::function<std::array<std::array<double, 4>, 4>(const Event&)> hessian;
  std::string description;

  /// Coordinate jet of chi (real values stored as complex).
  CoordJet jet(const Event& e) const;

  static GaugeFunction zero();
  /// Throws kInvalidArgument if any coefficient has an imaginary part.
  static GaugeFunction from_polynomial(const Polynomial4& p);
  GaugeFunction negated() const;
};

enum class PotentialKind { kZero, kConstant, kCoulomb, kPureGauge, kSum };

std::string to_string(PotentialKind k);

struct PotentialField {
  PotentialKind kind = PotentialKind::kZero;
  /// Kind parameter: Z alpha for Coulomb, unused otherwise.
  double parameter = 0.0;
  std::string description;
  std::function<FourVector(const Event&)> value;
  /// Closed-form gradient G(mu, nu) = d_mu A_nu.
  std::function<Matrix4(const Event&)> gradient;
  /// Events within this radius of the origin are singular (0 for none).
  double singular_radius = 0.0;
};

/// d_mu A_nu at e, analytic or by central differences of A.
Matrix4 potential_gradient(const PotentialField& A, const Event& e,
                           const DerivativeMethod& d, double c);

PotentialField zero_potential();
/// Constant potential; component 4 should be i*phi/c for a physical field.
PotentialField constant_potential(const FourVector& a);
/// Static Coulomb potential of a nucleus, normalized so that
/// q A_4 = -i Z alpha hbar / r, i.e. potential energy V = -Z alpha hbar c / r
/// for the configured charge q. Requires 0 < Z alpha <= 1/2 and q != 0.
/// Evaluation at r = 0 throws kSingularPoint.
PotentialField coulomb_potential(double z_alpha, const PhysicalConstants& k);
/// A_mu = d_mu chi.
PotentialField pure_gauge_potential(const GaugeFunction& chi, double c);
PotentialField sum_potential(const PotentialField& a, const PotentialField& b);

/// d_mu A_mu = div A + (1/(ic)) dA_4/dt.
Complex lorenz_gauge_residual(const PotentialField& A, const Event& e,
                              const DerivativeMethod& d, double c);

/// psi' = psi exp(i q chi / hbar) with composed analytic jets.
ScalarField gauge_transform_field(const ScalarField& psi, const GaugeFunction& chi,
                                  const PhysicalConstants& k);

struct GaugedPair {
  PotentialField potential;
  ScalarField wave;
};

/// A'_mu = A_mu + d_mu chi and psi' = psi exp(i q chi / hbar).
GaugedPair gauge_transform(const PotentialField& A, const ScalarField& psi,
                           const GaugeFunction& chi, const PhysicalConstants& k);

}  // namespace vfield
