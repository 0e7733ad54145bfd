#pragma once

// Partial differential equations of state: the equation of state and the
// equipartition relation with T and -p replaced by dU/dS and dU/dV. Each is
// evaluated as a residual that vanishes on the fundamental equation.

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "vdwtoda/gas.hpp"

namespace vdwtoda {

/// Scalar field f(S, V). Must be a pure function.
using ScalarField = std::function<double(double S, double V)>;

/// Where dU/dS and dU/dV come from: closed-form momenta, or central
/// differences of the energy.
class GradientSource {
 public:
  static GradientSource analytic() noexcept { return GradientSource{}; }

  /// Fixed absolute step h > 0 in every coordinate.
  static GradientSource finite_difference(double h);

  /// Per-coordinate default step fd::default_step(coordinate).
  static GradientSource finite_difference() noexcept;

  bool is_analytic() const noexcept { return !finite_difference_; }

  /// Step used at a coordinate value. Only meaningful in finite-difference mode.
  double step_for(double coordinate) const noexcept;

 private:
  bool finite_difference_ = false;
  std::optional<double> step_;
};

struct Gradient2 {
  double d_first = 0.0;   // derivative along the first argument
  double d_second = 0.0;  // derivative along the second argument
};

/// Central differences of f at `at` with step h in both S and V.
Gradient2 fd_gradient(const ScalarField& f, const ExtensiveState& at, double h);

/// (dU/dS, dU/dV) of the fundamental equation via `grad`.
Gradient2 energy_gradient(const GasParameters& params, const ExtensiveState& state,
                          const GradientSource& grad);

/// (dU/dV - a/V^2)(V - b) + N kB dU/dS
double pde1_residual(const GasParameters& params, const ExtensiveState& state,
                     const GradientSource& grad);

/// U - (3/2) N kB dU/dS + a/V
double pde2_residual(const GasParameters& params, const ExtensiveState& state,
                     const GradientSource& grad);

/// Sums of the magnitudes of the terms combined by pde1/pde2, computed from
/// the analytic momenta. Used to turn residuals into relative errors.
double pde1_scale(const GasParameters& params, const ExtensiveState& state);
double pde2_scale(const GasParameters& params, const ExtensiveState& state);

/// (dU/dx - (2U0/3) e^(2x/3), dU/dy + (2U0/3) e^(2y/3)) for U(x, y) = W(x) - W(y).
/// Requires a > 0. In finite-difference mode the derivatives are central
/// differences of energy_xy.
std::pair<double, double> decoupled_residuals(const GasParameters& params, double x, double y,
                                              const GradientSource& grad = GradientSource::analytic());

/// Polyline in the (S, V) plane, integrated segment by segment.
struct PathSpec {
  std::vector<ExtensiveState> waypoints;
  int steps_per_segment = 1000;

  /// Throws DomainError unless there are >= 2 waypoints, steps_per_segment > 0
  /// and every waypoint has V > params.b.
  void validate(const GasParameters& params) const;
};

/// U(start) + integral of (T dS - p dV) along the path, composite trapezoid
/// rule on each straight segment. Converges to energy(end) at second order.
double reconstruct_energy(const GasParameters& params, const PathSpec& path);

}  // namespace vdwtoda
