#pragma once

// Clifford algebra of the gamma matrices, the linear factorization of the
// quadratic mass-shell form, and Dirac-equation residuals.

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vfield/core4.hpp"
#include "vfield/fields.hpp"
#include "vfield/velocityfield.hpp"
#include "vfield/wavefunctions.hpp"

namespace vfield {

enum class Representation { kDiracStandard };

/// Parses "dirac-standard"; throws kUnknownRepresentation otherwise.
Representation parse_representation(const std::string& tag);
std::string to_string(Representation r);

/// gamma_n = -i beta alpha_n (n = 1..3), gamma_4 = beta.
struct GammaSet {
  std::array<Matrix4, 4> gamma;
  std::array<Matrix4, 3> alpha;
  Matrix4 beta;
  Representation representation = Representation::kDiracStandard;
};

GammaSet gamma_matrices(Representation rep = Representation::kDiracStandard);

/// gamma . P = sum_mu gamma_mu P_mu.
Matrix4 slash(const GammaSet& g, const FourVector& p);

/// max over mu, nu of entrywise |{gamma_mu, gamma_nu} - 2 delta_mu_nu I|.
double clifford_residual(const GammaSet& g);

/// Entrywise max |(gamma.P + i m c)(gamma.P - i m c) - (P.P + m^2 c^2) I|.
double factorization_residual(const GammaSet& g, const FourVector& p,
                              const PhysicalConstants& k);

enum class DiracForm { kGamma, kAlphaBeta };

/// Constant matrix M with gamma-form residual = M * alpha/beta-form residual:
/// M = (-i / c) beta.
Matrix4 form_factor(const GammaSet& g, double c);

/// Gamma form: gamma_mu (-i hbar d_mu - q A_mu) Psi - i m c Psi.
/// Alpha/beta form: [i c pi_4 + c alpha_n pi_n + beta m c^2] Psi.
/// Both divided by the largest |Psi component| at e.
Spinor dirac_residual(const SpinorWave& psi, const PotentialField& A, const Event& e,
                      const EvalContext& ctx, DiracForm form,
                      const GammaSet& g = gamma_matrices());

struct VelocityConsistency {
  std::vector<int> components;       // 0-based indices of admissible components
  std::vector<FourVector> velocities;
  double max_deviation = 0.0;
};

/// Extracts u from every component with |psi_k| above the floor and reports
/// the largest componentwise difference between any two of them. Throws
/// kInsufficientComponents when fewer than two components qualify.
VelocityConsistency spinor_velocity_consistency(const SpinorWave& psi,
                                                const PotentialField& A,
                                                const Event& e, const EvalContext& ctx);

struct DiracKgCheck {
  /// (gamma.p + i m c)(gamma.p - i m c) Psi, p = -i hbar d.
  Spinor squared;
  /// (-hbar^2 d_mu d_mu + m^2 c^2) Psi componentwise.
  Spinor klein_gordon;
  Spinor difference;
};

/// Free-field operator identity; all entries divided by max |Psi component|.
/// Throws kUnsupportedConfiguration unless A is the zero potential.
DiracKgCheck dirac_to_kg_check(const SpinorWave& psi, const PotentialField& A,
                               const Event& e, const EvalContext& ctx,
                               const GammaSet& g = gamma_matrices());

/// Multiplies every component by exp(i q chi / hbar).
SpinorWave gauge_transform_spinor(const SpinorWave& psi, const GaugeFunction& chi,
                                  const PhysicalConstants& k);

struct EnergyScan {
  double energy = 0.0;
  /// Sum over events of squared residual component magnitudes at `energy`.
  double objective = 0.0;
  int evaluations = 0;
};

/// Golden-section minimization over [lo, hi] of the summed squared Dirac
/// residual of `family(E)`, a spinor whose time phase carries trial energy E.
EnergyScan energy_scan(const std::function<SpinorWave(double)>& family,
                       const PotentialField& A, std::span<const Event> events,
                       const EvalContext& ctx, double lo, double hi,
                       double tolerance = 1e-10);

}  // namespace vfield
