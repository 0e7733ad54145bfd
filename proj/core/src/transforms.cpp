#include "vdwtoda/transforms.hpp"

#include <cmath>

#include <fmt/format.h>

#include "vdwtoda/errors.hpp"

namespace vdwtoda {

namespace {

void require_toda_chart(const GasParameters& params) {
  if (!(params.a > 0.0)) throw ChartDomainError(ChartFailure::a_nonpositive, params.a);
}

}  // namespace

std::pair<double, double> shift(const GasParameters& params, double S, double V) {
  if (!(V > params.b)) throw ChartDomainError(ChartFailure::volume_leq_b, V - params.b);
  return {S, V - params.b};
}

std::pair<double, double> unshift(const GasParameters& params, double S_shifted,
                                  double V_shifted) noexcept {
  return {S_shifted, V_shifted + params.b};
}

std::pair<double, double> nondimensionalize(const GasParameters& params, double S_shifted,
                                            double V_shifted) {
  if (!(V_shifted > 0.0)) {
    throw DomainError(fmt::format("shifted volume must be positive (got {})", V_shifted), "V",
                      V_shifted);
  }
  return {S_shifted / (params.N * params.kB), std::log(V_shifted / params.V0)};
}

std::pair<double, double> dimensionalize(const GasParameters& params, double s,
                                         double v) noexcept {
  return {s * params.N * params.kB, params.V0 * std::exp(v)};
}

double energy_sv(const GasParameters& params, double s, double v) {
  return params.U0 * guarded_exp(2.0 * (s - v) / 3.0) -
         params.a / (params.V0 * std::exp(v) + params.b);
}

std::pair<double, double> toda_coords(const GasParameters& params, double s, double v) {
  require_toda_chart(params);
  const double volume = params.V0 * std::exp(v) + params.b;
  return {s - v, 1.5 * std::log(params.a / (params.U0 * volume))};
}

std::pair<double, double> toda_coords_inverse(const GasParameters& params, double x, double y) {
  require_toda_chart(params);
  const double shifted = params.a * guarded_exp(-2.0 * y / 3.0) / params.U0 - params.b;
  if (!(shifted > 0.0)) throw ChartDomainError(ChartFailure::v_out_of_range, shifted);
  const double v = std::log(shifted / params.V0);
  return {x + v, v};
}

double toda_potential(const GasParameters& params, double z) {
  return params.U0 * guarded_exp(2.0 * z / 3.0);
}

double energy_xy(const GasParameters& params, double x, double y) {
  return toda_potential(params, x) - toda_potential(params, y);
}

std::pair<double, double> momenta_xy(const GasParameters& params, double x, double y) {
  return {(2.0 / 3.0) * toda_potential(params, x), -(2.0 / 3.0) * toda_potential(params, y)};
}

std::pair<double, double> ideal_coords(double s, double v) noexcept { return {s - v, s + v}; }

std::pair<double, double> ideal_coords_inverse(double x_prime, double y_prime) noexcept {
  return {0.5 * (x_prime + y_prime), 0.5 * (y_prime - x_prime)};
}

double ideal_energy(const GasParameters& params, double x_prime) {
  if (!params.is_ideal()) {
    throw DomainError(fmt::format("ideal chart needs a = b = 0 (a = {}, b = {})", params.a,
                                  params.b),
                      params.a != 0.0 ? "a" : "b", params.a != 0.0 ? params.a : params.b);
  }
  return toda_potential(params, x_prime);
}

std::pair<double, double> chain_coords(const GasParameters& params, double S, double V) {
  require_toda_chart(params);
  const auto [S_shifted, V_shifted] = shift(params, S, V);
  const auto [s, v] = nondimensionalize(params, S_shifted, V_shifted);
  return toda_coords(params, s, v);
}

std::pair<double, double> chain_coords_inverse(const GasParameters& params, double x, double y) {
  const auto [s, v] = toda_coords_inverse(params, x, y);
  const auto [S_shifted, V_shifted] = dimensionalize(params, s, v);
  return unshift(params, S_shifted, V_shifted);
}

TransformedPoint full_chain(const GasParameters& params, double S, double V) {
  const auto [x, y] = chain_coords(params, S, V);
  const auto [p_x, p_y] = momenta_xy(params, x, y);
  return TransformedPoint{.x = x, .y = y, .p_x = p_x, .p_y = p_y, .U = energy_xy(params, x, y)};
}

}  // namespace vdwtoda
