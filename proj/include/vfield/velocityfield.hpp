#pragma once

// The 4-velocity field of a wavefunction, (m u_mu + q A_mu) psi = -i hbar d_mu psi,
// and the residuals of every equation in the chain that leads from the
// relativistic Newton law to the Klein-Gordon and corrected wave equations.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vfield/core4.hpp"
#include "vfield/fields.hpp"
#include "vfield/jet.hpp"

namespace vfield {

struct EvalContext {
  PhysicalConstants constants;
  DerivativeMethod method;
  /// Wavefunction magnitudes at or below this value are treated as zeros.
  double psi_floor = 1e-12;
};

/// 1e-12 times the largest |psi| over the events (events where psi cannot be
/// evaluated are skipped).
double calibrate_psi_floor(const ScalarField& psi, std::span<const Event> events);

FourVector extract_u(const ScalarField& psi, const PotentialField& A, const Event& e,
                     const EvalContext& ctx);

/// J(nu, mu) = d_nu u_mu. Analytic path uses the second derivatives of psi;
/// the numeric path differentiates the numeric extraction a second time.
Matrix4 velocity_jacobian(const ScalarField& psi, const PotentialField& A,
                          const Event& e, const EvalContext& ctx);

/// contract(u, u) + c^2.
Complex mass_shell_residual(const ScalarField& psi, const PotentialField& A,
                            const Event& e, const EvalContext& ctx);

struct NewtonResult {
  /// u_nu d_nu u_mu - (q/m) F_mu_nu u_nu.
  FourVector raw;
  /// raw / |u| with |u| the Euclidean size of the complex components.
  FourVector normalized;
  /// (1/2) d_mu (u_nu u_nu); equals `raw` whenever K vanishes.
  FourVector shell_gradient;
};

NewtonResult newton_residual(const ScalarField& psi, const PotentialField& A,
                             const Event& e, const EvalContext& ctx);

/// K_mu_nu = d_mu (m u_nu + q A_nu) - d_nu (m u_mu + q A_mu).
Matrix4 curl_K(const ScalarField& psi, const PotentialField& A, const Event& e,
               const EvalContext& ctx);

/// (u_nu K_mu_nu)_mu.
FourVector u_dot_K(const ScalarField& psi, const PotentialField& A, const Event& e,
                   const EvalContext& ctx);

struct DivergenceResult {
  /// d_mu (m u_mu) from the derivative of the extracted velocity field.
  Complex from_velocity;
  /// -i hbar (laplace4 psi / psi - dlog . dlog), valid in Lorenz gauge.
  Complex from_log_laplacian;
  Complex lorenz_residual;
  bool gauge_violation = false;
};

DivergenceResult divergence_mu(const ScalarField& psi, const PotentialField& A,
                               const Event& e, const EvalContext& ctx);

struct ScalarResidual {
  Complex value;
  /// false when |psi| was below the floor and `value` is unnormalized.
  bool normalized = true;
};

/// [(-i hbar d - q A)^2 psi + m^2 c^2 psi] / psi.
ScalarResidual kg_residual(const ScalarField& psi, const PotentialField& A,
                           const Event& e, const EvalContext& ctx);

/// KG residual plus hbar^2 d_mu d_mu ln psi, with the log term computed as
/// laplace4(psi)/psi - dlog.dlog.
Complex nonlinear_wave_residual(const ScalarField& psi, const PotentialField& A,
                                const Event& e, const EvalContext& ctx);

struct ActionResult {
  Complex phi;
  Complex theta;
  Complex psi_start;
  Complex psi_end;
  Complex psi_reconstructed;
  /// |psi_reconstructed - psi_end| / |psi_end|.
  double reconstruction_error = 0.0;
  std::vector<Event> path;
  int intervals = 0;
};

/// Phi = integral of (m u_mu + q A_mu) dx_mu along a polyline (dx_4 = i c dt),
/// by adaptive Gauss-Legendre bisection (|dPhi| < 1e-10 per interval, depth
/// <= 20). theta = -i hbar ln psi(start). Throws kSingularPoint when a vertex
/// is singular or a leg passes within the potential's singular radius.
ActionResult action_integral(const ScalarField& psi, const PotentialField& A,
                             std::span<const Event> path, const EvalContext& ctx);

/// Every residual at one event. Never throws; failing entries stay empty and
/// their messages are collected in `flags`.
struct ResidualSample {
  Event event;
  std::optional<FourVector> u;
  std::optional<Complex> mass_shell;
  std::optional<NewtonResult> newton;
  std::optional<Matrix4> curl_k;
  std::optional<FourVector> u_dot_k;
  std::optional<DivergenceResult> divergence;
  std::optional<ScalarResidual> kg;
  std::optional<Complex> nonlinear;
  std::vector<std::string> flags;

  bool singular() const { return !flags.empty(); }
  /// d_mu(m u_mu), the continuity residual.
  std::optional<Complex> continuity() const;
};

ResidualSample diagnose_point(const ScalarField& psi, const PotentialField& A,
                              const Event& e, const EvalContext& ctx);

}  // namespace vfield
