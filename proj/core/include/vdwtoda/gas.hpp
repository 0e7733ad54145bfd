#pragma once

// Fundamental equation U(S, V) of the van der Waals gas in the energy
// representation, its conjugate momenta, and the two algebraic identities
// they satisfy (equation of state, equipartition).

namespace vdwtoda {

/// Van der Waals constants plus the fiducial scales of the fundamental
/// equation. a = b = 0 is the ideal gas. Defaults keep desk-scale values O(1);
/// one mole corresponds to N = Avogadro's number.
struct GasParameters {
  double a = 0.0;   // attraction, energy * volume
  double b = 0.0;   // excluded volume
  double N = 1.0;   // particle count
  double kB = 1.0;  // Boltzmann constant
  double U0 = 1.0;  // fiducial energy
  double V0 = 1.0;  // fiducial volume

  /// Throws DomainError naming the first field that breaks
  /// U0, V0, N, kB > 0 and a, b >= 0.
  void validate() const;

  bool is_ideal() const noexcept { return a == 0.0 && b == 0.0; }

  friend bool operator==(const GasParameters&, const GasParameters&) = default;
};

struct ExtensiveState {
  double S = 0.0;
  double V = 1.0;
};

/// A point (U, S, V, T, p) of the thermodynamic contact manifold.
struct ContactPoint {
  double U = 0.0;
  double S = 0.0;
  double V = 0.0;
  double T = 0.0;
  double p = 0.0;
};

double energy(const GasParameters& params, const ExtensiveState& state);

/// T = dU/dS, strictly positive.
double temperature(const GasParameters& params, const ExtensiveState& state);

/// p = -dU/dV.
double pressure(const GasParameters& params, const ExtensiveState& state);

ContactPoint contact_lift(const GasParameters& params, const ExtensiveState& state);

/// (p + a/V^2)(V - b) - N kB T. Vanishes on lifted points.
double eos_residual(const ContactPoint& point, const GasParameters& params);

/// U - (3/2) N kB T + a/V. Vanishes on lifted points.
double equipartition_residual(const ContactPoint& point, const GasParameters& params);

/// Magnitude against which eos_residual is judged: the sum of the absolute
/// values of the terms it combines.
double eos_scale(const ContactPoint& point, const GasParameters& params);

double equipartition_scale(const ContactPoint& point, const GasParameters& params);

/// The same parameters with a = b = 0.
GasParameters ideal_limit(const GasParameters& params) noexcept;

}  // namespace vdwtoda
