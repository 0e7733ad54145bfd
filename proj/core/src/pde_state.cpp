#include "vdwtoda/pde_state.hpp"

#include <cmath>

#include <fmt/format.h>

#include "vdwtoda/errors.hpp"
#include "vdwtoda/finite_difference.hpp"
#include "vdwtoda/transforms.hpp"

namespace vdwtoda {

GradientSource GradientSource::finite_difference(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw DomainError(fmt::format("finite-difference step must be positive (got {})", h), "h", h);
  }
  GradientSource source;
  source.finite_difference_ = true;
  source.step_ = h;
  return source;
}

GradientSource GradientSource::finite_difference() noexcept {
  GradientSource source;
  source.finite_difference_ = true;
  return source;
}

double GradientSource::step_for(double coordinate) const noexcept {
  return step_ ? *step_ : fd::default_step(coordinate);
}

Gradient2 fd_gradient(const ScalarField& f, const ExtensiveState& at, double h) {
  if (!(h > 0.0)) {
    throw DomainError(fmt::format("finite-difference step must be positive (got {})", h), "h", h);
  }
  return Gradient2{
      .d_first = fd::central([&](double S) { return f(S, at.V); }, at.S, h),
      .d_second = fd::central([&](double V) { return f(at.S, V); }, at.V, h),
  };
}

Gradient2 energy_gradient(const GasParameters& params, const ExtensiveState& state,
                          const GradientSource& grad) {
  if (grad.is_analytic()) {
    const ContactPoint point = contact_lift(params, state);
    return Gradient2{.d_first = point.T, .d_second = -point.p};
  }
  auto U = [&](double S, double V) { return energy(params, ExtensiveState{S, V}); };
  return Gradient2{
      .d_first = fd::central([&](double S) { return U(S, state.V); }, state.S,
                             grad.step_for(state.S)),
      .d_second = fd::central([&](double V) { return U(state.S, V); }, state.V,
                              grad.step_for(state.V)),
  };
}

double pde1_residual(const GasParameters& params, const ExtensiveState& state,
                     const GradientSource& grad) {
  const Gradient2 g = energy_gradient(params, state, grad);
  const double V = state.V;
  return (g.d_second - params.a / (V * V)) * (V - params.b) + params.N * params.kB * g.d_first;
}

double pde2_residual(const GasParameters& params, const ExtensiveState& state,
                     const GradientSource& grad) {
  const Gradient2 g = energy_gradient(params, state, grad);
  return energy(params, state) - 1.5 * params.N * params.kB * g.d_first + params.a / state.V;
}

double pde1_scale(const GasParameters& params, const ExtensiveState& state) {
  return eos_scale(contact_lift(params, state), params);
}

double pde2_scale(const GasParameters& params, const ExtensiveState& state) {
  return equipartition_scale(contact_lift(params, state), params);
}

std::pair<double, double> decoupled_residuals(const GasParameters& params, double x, double y,
                                              const GradientSource& grad) {
  if (!(params.a > 0.0)) throw ChartDomainError(ChartFailure::a_nonpositive, params.a);
  double dU_dx = 0.0;
  double dU_dy = 0.0;
  if (grad.is_analytic()) {
    std::tie(dU_dx, dU_dy) = momenta_xy(params, x, y);
  } else {
    dU_dx = fd::central([&](double xx) { return energy_xy(params, xx, y); }, x, grad.step_for(x));
    dU_dy = fd::central([&](double yy) { return energy_xy(params, x, yy); }, y, grad.step_for(y));
  }
  const double rate = 2.0 * params.U0 / 3.0;
  return {dU_dx - rate * std::exp(2.0 * x / 3.0), dU_dy + rate * std::exp(2.0 * y / 3.0)};
}

void PathSpec::validate(const GasParameters& params) const {
  if (waypoints.size() < 2) {
    throw DomainError("path needs at least two waypoints", "waypoints",
                      static_cast<double>(waypoints.size()));
  }
  if (steps_per_segment <= 0) {
    throw DomainError("steps_per_segment must be positive", "steps_per_segment",
                      steps_per_segment);
  }
  for (const ExtensiveState& w : waypoints) {
    if (!(w.V > params.b)) {
      throw DomainError(fmt::format("waypoint volume must exceed b = {} (got {})", params.b, w.V),
                        "V", w.V);
    }
  }
}

double reconstruct_energy(const GasParameters& params, const PathSpec& path) {
  path.validate(params);
  double U = energy(params, path.waypoints.front());
  const int n = path.steps_per_segment;
  for (std::size_t k = 1; k < path.waypoints.size(); ++k) {
    const ExtensiveState& from = path.waypoints[k - 1];
    const ExtensiveState& to = path.waypoints[k];
    const double dS = to.S - from.S;
    const double dV = to.V - from.V;
    if (dS == 0.0 && dV == 0.0) continue;
    // dU = T dS - p dV along the segment, parametrized by t in [0, 1].
    auto integrand = [&](int i) {
      const double t = static_cast<double>(i) / n;
      const ContactPoint point = contact_lift(params, {from.S + t * dS, from.V + t * dV});
      return point.T * dS - point.p * dV;
    };
    double sum = 0.5 * (integrand(0) + integrand(n));
    for (int i = 1; i < n; ++i) sum += integrand(i);
    U += sum / n;
  }
  return U;
}

}  // namespace vdwtoda
