#include "vdwtoda/contact.hpp"

#include <array>
#include <cmath>

#include <fmt/format.h>

#include "vdwtoda/errors.hpp"
#include "vdwtoda/finite_difference.hpp"

namespace vdwtoda {

double contact_form_energy(const ContactPoint& point, const TangentVector& tv) noexcept {
  return tv.dU + point.T * tv.dS - point.p * tv.dV;
}

double contact_form_transformed(const TransformedPoint& tp, double dx, double dy,
                                double dU) noexcept {
  return dU + tp.p_x * dx + tp.p_y * dy;
}

namespace {

struct Partials {
  double S, T, V, p;
};

Partials partials(const Observable& f, const PoissonPoint& at, double h) {
  auto along = [&](auto set) {
    PoissonPoint up = at;
    PoissonPoint down = at;
    set(up, h);
    set(down, -h);
    return (f(up) - f(down)) / (2.0 * h);
  };
  return Partials{
      .S = along([](PoissonPoint& q, double d) { q.S += d; }),
      .T = along([](PoissonPoint& q, double d) { q.T += d; }),
      .V = along([](PoissonPoint& q, double d) { q.V += d; }),
      .p = along([](PoissonPoint& q, double d) { q.p += d; }),
  };
}

}  // namespace

double poisson_bracket(const Observable& f, const Observable& g, const PoissonPoint& at,
                       double h) {
  if (!(h > 0.0)) {
    throw DomainError(fmt::format("bracket step must be positive (got {})", h), "h", h);
  }
  const Partials df = partials(f, at, h);
  const Partials dg = partials(g, at, h);
  // d/d(-p) = -d/dp
  return (df.S * dg.T - df.T * dg.S) + (df.V * -dg.p - -df.p * dg.V);
}

double jacobi_defect(const Observable& f, const Observable& g, const Observable& k,
                     const PoissonPoint& at, double h) {
  auto bracket_of = [h](const Observable& u, const Observable& w) -> Observable {
    return [u, w, h](const PoissonPoint& q) { return poisson_bracket(u, w, q, h); };
  };
  return poisson_bracket(f, bracket_of(g, k), at, h) + poisson_bracket(g, bracket_of(k, f), at, h) +
         poisson_bracket(k, bracket_of(f, g), at, h);
}

double pullback_defect(const GasParameters& params, const ExtensiveState& state, double dS,
                       double dV) {
  const ContactPoint point = contact_lift(params, state);
  const TransformedPoint image = full_chain(params, state.S, state.V);

  auto chart = [&](const std::array<double, 2>& sv) {
    const auto [x, y] = chain_coords(params, sv[0], sv[1]);
    return std::array<double, 2>{x, y};
  };
  const std::array<double, 2> at{state.S, state.V};
  const auto jac = fd::jacobian<2>(chart, at, {fd::default_step(state.S), fd::default_step(state.V)});
  const double dx = jac[0][0] * dS + jac[0][1] * dV;
  const double dy = jac[1][0] * dS + jac[1][1] * dV;

  const double original = point.T * dS - point.p * dV;
  const double transformed = image.p_x * dx + image.p_y * dy;
  return std::abs(original - transformed);
}

double y_prime_sensitivity(const GasParameters& params, const ExtensiveState& state) {
  const auto [S_shifted, V_shifted] = shift(params, state.S, state.V);
  const auto [s, v] = nondimensionalize(params, S_shifted, V_shifted);
  const auto [x_prime, y_prime] = ideal_coords(s, v);

  auto pulled_back = [&](double yp) {
    const auto [ss, vv] = ideal_coords_inverse(x_prime, yp);
    const auto [Ss, Vs] = dimensionalize(params, ss, vv);
    const auto [S, V] = unshift(params, Ss, Vs);
    return energy(params, ExtensiveState{S, V});
  };
  return std::abs(fd::central(pulled_back, y_prime, fd::default_step(y_prime)));
}

double ideal_submanifold_check(const GasParameters& params, const ExtensiveState& state) {
  if (!params.is_ideal()) {
    throw DomainError(fmt::format("ideal submanifold check needs a = b = 0 (a = {}, b = {})",
                                  params.a, params.b),
                      params.a != 0.0 ? "a" : "b", params.a != 0.0 ? params.a : params.b);
  }
  return y_prime_sensitivity(params, state);
}

}  // namespace vdwtoda
