#pragma once

// Analytic wavefunction fixtures. All fixtures are unnormalized; every
// identity checked by the toolkit is homogeneous in psi.

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "vfield/core4.hpp"
#include "vfield/jet.hpp"

namespace vfield {

struct ScalarWave {
  ScalarField field;
  std::string label;
  /// Energy claimed by the fixture. Certified by residual tests, not trusted.
  double energy = 0.0;
  /// Radius of the singular locus around the origin (0 if none).
  double singular_radius = 0.0;
};

enum class Spin { kUp, kDown };

struct SpinorWave {
  std::array<ScalarField, 4> components;
  /// true where the component is identically zero by construction.
  std::array<bool, 4> vanishing{};
  std::string label;
  double energy = 0.0;
  double singular_radius = 0.0;
};

using Spinor = std::array<Complex, 4>;

Spinor spinor_value(const SpinorWave& w, const Event& e);
double max_abs(const Spinor& s);

/// exp(i (p.x - E t) / hbar), E = sqrt(p^2 c^2 + m^2 c^4).
ScalarWave plane_wave(const std::array<double, 3>& p, const PhysicalConstants& k);

/// Klein-Gordon Coulomb ground state r^(g-1) exp(-lambda r) exp(-i E t / hbar)
/// with g = (1 + sqrt(1 - 4 (Z alpha)^2)) / 2, lambda = E Z alpha / (g hbar c),
/// E = m c^2 / sqrt(1 + (Z alpha)^2 / g^2). Requires 0 < Z alpha < 1/2.
/// `energy_override` replaces E in the time phase only; the radial profile
/// keeps its closed form (used for detuned negative controls and scans).
ScalarWave kg_coulomb_1s(double z_alpha, const PhysicalConstants& k,
                         std::optional<double> energy_override = std::nullopt);

/// Positive-energy free Dirac spinor w(p) exp(i (p.x - E t) / hbar) with
/// upper block chi_spin and lower block c sigma.p chi_spin / (E + m c^2).
SpinorWave dirac_plane_wave(const std::array<double, 3>& p, Spin spin,
                            const PhysicalConstants& k);

/// Dirac-Coulomb 1s_{1/2} ground state (g chi, i a g (sigma.r_hat) chi) with
/// g = r^(s-1) exp(-lambda r), s = sqrt(1 - (Z alpha)^2),
/// lambda = Z alpha m c / hbar, a = (1 - s) / (Z alpha), E = s m c^2.
/// Requires 0 < Z alpha < 1. `energy_override` as for kg_coulomb_1s.
SpinorWave dirac_coulomb_1s(double z_alpha, const PhysicalConstants& k,
                            Spin spin = Spin::kUp,
                            std::optional<double> energy_override = std::nullopt);

/// Smooth non-solution spinor: random complex quadratic polynomials times a
/// unit-width Gaussian centred at `center`. Deterministic in `seed`.
SpinorWave random_smooth_spinor(std::uint64_t seed, const Event& center);

/// Same construction for a single scalar component.
ScalarWave random_smooth_scalar(std::uint64_t seed, const Event& center);

}  // namespace vfield
