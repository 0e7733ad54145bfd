#pragma once

// Contact 1-form of the gas in (U, S, V, T, p) and in Toda coordinates,
// canonical Poisson brackets on (S, T, V, -p), and numerical certificates
// that the Toda change of variables preserves the contact structure.

#include <functional>

#include "vdwtoda/gas.hpp"
#include "vdwtoda/transforms.hpp"

namespace vdwtoda {

struct TangentVector {
  double dU = 0.0;
  double dS = 0.0;
  double dV = 0.0;
  double dT = 0.0;
  double dp = 0.0;
};

/// Coordinates of the 4-dimensional Poisson manifold.
struct PoissonPoint {
  double S = 0.0;
  double T = 0.0;
  double V = 0.0;
  double p = 0.0;
};

/// Pure scalar function on the Poisson manifold.
using Observable = std::function<double(const PoissonPoint&)>;

/// dU + T dS - p dV with (T, p) taken from `point`.
double contact_form_energy(const ContactPoint& point, const TangentVector& tv) noexcept;

/// dU + p_x dx + p_y dy with the momenta taken from `tp`.
double contact_form_transformed(const TransformedPoint& tp, double dx, double dy,
                                double dU) noexcept;

/// {f, g} with canonical pairs (S, T) and (V, -p):
///   f_S g_T - f_T g_S + f_V g_(-p) - f_(-p) g_V,   d/d(-p) = -d/dp,
/// all partials by central differences of step h.
double poisson_bracket(const Observable& f, const Observable& g, const PoissonPoint& at,
                       double h);

/// {f,{g,k}} + {g,{k,f}} + {k,{f,g}} from nested finite-difference brackets.
double jacobi_defect(const Observable& f, const Observable& g, const Observable& k,
                     const PoissonPoint& at, double h);

/// |(T dS - p dV) - (p_x dx + p_y dy)| where (dx, dy) is (dS, dV) pushed through
/// a central-difference Jacobian of chain_coords. Zero up to truncation error
/// when the change of variables is a contactomorphism. Requires a > 0, V > b.
double pullback_defect(const GasParameters& params, const ExtensiveState& state, double dS,
                       double dV);

/// |dU/dy'| of the energy pulled back to the ideal chart (x', y') = (s - v, s + v),
/// by central differences. Accepts any parameters.
double y_prime_sensitivity(const GasParameters& params, const ExtensiveState& state);

/// y_prime_sensitivity restricted to the ideal gas, where it vanishes and the
/// description collapses onto (x', p_x, U). Throws DomainError unless a = b = 0.
double ideal_submanifold_check(const GasParameters& params, const ExtensiveState& state);

}  // namespace vdwtoda
