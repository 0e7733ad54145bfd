#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace vdwtoda::fd {

/// Central-difference step eps^(1/3) * max(1, |x|), the usual balance between
/// truncation and round-off for a second-order stencil.
inline double default_step(double x) noexcept {
  static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  return base * std::max(1.0, std::abs(x));
}

/// (f(x + h) - f(x - h)) / 2h
template <typename F>
double central(const F& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Central-difference gradient of f : R^n -> R. Component i perturbs only
/// coordinate i by steps[i].
template <std::size_t N, typename F>
std::array<double, N> gradient(const F& f, const std::array<double, N>& at,
                               const std::array<double, N>& steps) {
  std::array<double, N> grad{};
  for (std::size_t i = 0; i < N; ++i) {
    auto plus = at;
    auto minus = at;
    plus[i] += steps[i];
    minus[i] -= steps[i];
    grad[i] = (f(plus) - f(minus)) / (2.0 * steps[i]);
  }
  return grad;
}

/// Central-difference Jacobian of g : R^N -> R^M, returned row-major
/// (jac[r][c] = d g_r / d x_c).
template <std::size_t M, std::size_t N, typename G>
std::array<std::array<double, N>, M> jacobian(const G& g, const std::array<double, N>& at,
                                              const std::array<double, N>& steps) {
  std::array<std::array<double, N>, M> jac{};
  for (std::size_t c = 0; c < N; ++c) {
    auto plus = at;
    auto minus = at;
    plus[c] += steps[c];
    minus[c] -= steps[c];
    const std::array<double, M> up = g(plus);
    const std::array<double, M> down = g(minus);
    for (std::size_t r = 0; r < M; ++r) {
      jac[r][c] = (up[r] - down[r]) / (2.0 * steps[c]);
    }
  }
  return jac;
}

}  // namespace vdwtoda::fd
