#pragma once

// Change of variables that carries the van der Waals fundamental equation to
// a difference of two Toda potentials:
//
//   (S, V) -> (S', V') = (S, V - b)
//          -> (s, v)   = (S'/(N kB), ln(V'/V0))
//          -> (x, y)   with x = s - v,  U0 exp(2y/3) = a / (V0 e^v + b)
//
// after which U(x, y) = W(x) - W(y) with W(z) = U0 exp(2z/3). The last step
// exists only for a > 0; the ideal gas uses (x', y') = (s - v, s + v) instead.

#include <utility>

#include "vdwtoda/gas.hpp"

namespace vdwtoda {

/// Toda coordinates with their conjugate momenta and the energy.
struct TransformedPoint {
  double x = 0.0;
  double y = 0.0;
  double p_x = 0.0;
  double p_y = 0.0;
  double U = 0.0;
};

/// (S, V) -> (S, V - b). Throws ChartDomainError(volume_leq_b) if V <= b.
std::pair<double, double> shift(const GasParameters& params, double S, double V);
std::pair<double, double> unshift(const GasParameters& params, double S_shifted,
                                  double V_shifted) noexcept;

/// (S', V') -> (S'/(N kB), ln(V'/V0)). Throws DomainError if V' <= 0.
std::pair<double, double> nondimensionalize(const GasParameters& params, double S_shifted,
                                            double V_shifted);
std::pair<double, double> dimensionalize(const GasParameters& params, double s,
                                         double v) noexcept;

/// U0 exp(2(s - v)/3) - a/(V0 e^v + b)
double energy_sv(const GasParameters& params, double s, double v);

/// (s, v) -> (x, y). Throws ChartDomainError(a_nonpositive) if a <= 0.
std::pair<double, double> toda_coords(const GasParameters& params, double s, double v);

/// (x, y) -> (s, v). Defined where a exp(-2y/3)/U0 - b > 0; otherwise throws
/// ChartDomainError(v_out_of_range).
std::pair<double, double> toda_coords_inverse(const GasParameters& params, double x, double y);

/// W(z) = U0 exp(2z/3)
double toda_potential(const GasParameters& params, double z);

/// W(x) - W(y)
double energy_xy(const GasParameters& params, double x, double y);

/// (p_x, p_y) = (dU/dx, dU/dy) = ((2/3) W(x), -(2/3) W(y))
std::pair<double, double> momenta_xy(const GasParameters& params, double x, double y);

/// Ideal-gas chart (s, v) -> (x', y') = (s - v, s + v) and its inverse.
std::pair<double, double> ideal_coords(double s, double v) noexcept;
std::pair<double, double> ideal_coords_inverse(double x_prime, double y_prime) noexcept;

/// W(x'). Only valid for the ideal gas; throws DomainError otherwise.
double ideal_energy(const GasParameters& params, double x_prime);

/// (S, V) -> (x, y) through shift, nondimensionalize and toda_coords.
std::pair<double, double> chain_coords(const GasParameters& params, double S, double V);

/// (x, y) -> (S, V), the inverse of chain_coords.
std::pair<double, double> chain_coords_inverse(const GasParameters& params, double x, double y);

/// chain_coords with the momenta and the energy W(x) - W(y) filled in.
TransformedPoint full_chain(const GasParameters& params, double S, double V);

}  // namespace vdwtoda
