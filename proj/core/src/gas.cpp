#include "vdwtoda/gas.hpp"

#include <cmath>

#include <fmt/format.h>

#include "vdwtoda/errors.hpp"

namespace vdwtoda {

void GasParameters::validate() const {
  auto require_positive = [](double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw DomainError(fmt::format("{} must be positive and finite (got {})", name, value), name,
                        value);
    }
  };
  auto require_nonnegative = [](double value, const char* name) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw DomainError(fmt::format("{} must be non-negative and finite (got {})", name, value),
                        name, value);
    }
  };
  require_nonnegative(a, "a");
  require_nonnegative(b, "b");
  require_positive(N, "N");
  require_positive(kB, "kB");
  require_positive(U0, "U0");
  require_positive(V0, "V0");
}

namespace {

void require_above_covolume(const GasParameters& params, double V) {
  if (!(V > params.b)) {
    throw DomainError(fmt::format("volume must exceed b = {} (got V = {})", params.b, V), "V", V);
  }
}

// U0 (V0/(V-b))^(2/3) exp(2S/(3 N kB)): the thermal part of U, equal to N kB T * 3/2.
double thermal_energy(const GasParameters& params, const ExtensiveState& state) {
  require_above_covolume(params, state.V);
  const double growth = guarded_exp(2.0 * state.S / (3.0 * params.N * params.kB));
  return params.U0 * std::pow(params.V0 / (state.V - params.b), 2.0 / 3.0) * growth;
}

}  // namespace

double energy(const GasParameters& params, const ExtensiveState& state) {
  return thermal_energy(params, state) - params.a / state.V;
}

double temperature(const GasParameters& params, const ExtensiveState& state) {
  return thermal_energy(params, state) * 2.0 / (3.0 * params.N * params.kB);
}

double pressure(const GasParameters& params, const ExtensiveState& state) {
  const double thermal = thermal_energy(params, state);
  return (2.0 / 3.0) * thermal / (state.V - params.b) - params.a / (state.V * state.V);
}

ContactPoint contact_lift(const GasParameters& params, const ExtensiveState& state) {
  const double thermal = thermal_energy(params, state);
  const double V = state.V;
  return ContactPoint{
      .U = thermal - params.a / V,
      .S = state.S,
      .V = V,
      .T = thermal * 2.0 / (3.0 * params.N * params.kB),
      .p = (2.0 / 3.0) * thermal / (V - params.b) - params.a / (V * V),
  };
}

double eos_residual(const ContactPoint& point, const GasParameters& params) {
  require_above_covolume(params, point.V);
  const double attraction = params.a / (point.V * point.V);
  return (point.p + attraction) * (point.V - params.b) - params.N * params.kB * point.T;
}

double equipartition_residual(const ContactPoint& point, const GasParameters& params) {
  if (!(point.V > 0.0)) {
    throw DomainError(fmt::format("volume must be positive (got {})", point.V), "V", point.V);
  }
  return point.U - 1.5 * params.N * params.kB * point.T + params.a / point.V;
}

double eos_scale(const ContactPoint& point, const GasParameters& params) {
  const double attraction = params.a / (point.V * point.V);
  return (std::abs(point.p) + attraction) * std::abs(point.V - params.b) +
         std::abs(params.N * params.kB * point.T);
}

double equipartition_scale(const ContactPoint& point, const GasParameters& params) {
  return std::abs(point.U) + std::abs(1.5 * params.N * params.kB * point.T) +
         std::abs(params.a / point.V);
}

GasParameters ideal_limit(const GasParameters& params) noexcept {
  GasParameters ideal = params;
  ideal.a = 0.0;
  ideal.b = 0.0;
  return ideal;
}

}  // namespace vdwtoda
