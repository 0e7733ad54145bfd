#pragma once

// Periodic Toda chain: nearest-neighbour pair potential
//
//   phi(r) = (a_T/b_T) (exp(-b_T r) - 1) + a_T r,   r_n = q_{n+1} - q_n,
//
// integrated with velocity Verlet, plus the thermal-ensemble machinery used to
// measure time averages of p_n^2 and of the velocities p_n/mass.

#include <cstdint>
#include <span>
#include <vector>

namespace vdwtoda {

enum class Boundary { periodic };

struct TodaParams {
  int n_sites = 32;
  double mass = 1.0;
  double a_T = 1.0;  // force scale
  double b_T = 1.0;  // inverse length
  double dt = 0.01;
  Boundary boundary = Boundary::periodic;

  void validate() const;
};

struct TodaState {
  std::vector<double> q;  // positions
  std::vector<double> p;  // momenta
  double t = 0.0;
};

/// F_n = a_T [exp(-b_T (q_n - q_{n-1})) - exp(-b_T (q_{n+1} - q_n))]
std::vector<double> toda_force(const TodaParams& params, std::span<const double> q);

double potential_energy(const TodaParams& params, std::span<const double> q);
double kinetic_energy(const TodaParams& params, std::span<const double> p);
double total_energy(const TodaParams& params, const TodaState& state);
double total_momentum(const TodaState& state) noexcept;

/// q = 0, p = 0.
TodaState equilibrium_state(const TodaParams& params);

/// One velocity-Verlet step of size params.dt.
TodaState step_verlet(const TodaState& state, const TodaParams& params);

/// Canonical sample at temperature T: momenta i.i.d. N(0, mass kB T) shifted to
/// zero total momentum; bond extensions drawn from exp(-phi(r)/(kB T)), shifted
/// to zero mean so the periodic chain closes, positions centred on zero.
/// Deterministic in `seed`.
TodaState sample_thermal(const TodaParams& params, double temperature, double kB,
                         std::uint64_t seed);

/// Canonical mean of the Hamiltonian at thermal energy kT for a chain with zero
/// total momentum: (n-1) kT/2 kinetic plus (n-1) <phi>, where the single-bond
/// mean is (a_T/b_T)(ln k - digamma(k)), k = a_T/(b_T kT).
double canonical_mean_energy(const TodaParams& params, double kT);

/// Rescales momenta and displacements by a common factor so that the total
/// energy equals `target`. Total momentum stays zero if it was zero.
TodaState pin_energy(const TodaState& state, const TodaParams& params, double target);

/// Time averages from one trajectory, or pooled over an ensemble of them.
struct EnsembleReport {
  std::vector<double> mean_p2;          // per site <p_n^2>
  std::vector<double> mean_velocity;    // per site <p_n/mass>
  std::vector<double> velocity_stderr;  // per site standard error of <p_n/mass>
  double pooled_p2 = 0.0;               // (1/n) sum_n <p_n^2>
  /// sum_n <p_n^2> / ((n - 1) mass): kinetic temperature kB T_kin per
  /// momentum degree of freedom, one being removed by zero total momentum.
  double kinetic_temperature = 0.0;
  double mean_energy = 0.0;
  /// |fitted dE/dt * duration| / |E|, least-squares slope over the whole run.
  double energy_drift = 0.0;
  /// max_t |E(t) - E(0)| / |E(0)|
  double energy_deviation = 0.0;
  double temperature = 0.0;  // label: kB T the trajectory was prepared at
  std::uint64_t seed = 0;
  std::int64_t samples = 0;  // time samples per trajectory after burn-in
  int trajectories = 0;
};

/// Integrates `state` for n_steps Verlet steps, discarding the first burn_in
/// from the averages. Energy statistics cover every step.
EnsembleReport measure_time_averages(TodaState state, const TodaParams& params,
                                     std::int64_t n_steps, std::int64_t burn_in);

struct EnsembleConfig {
  double temperature = 0.01;
  double kB = 1.0;
  std::int64_t n_steps = 1'000'000;
  std::int64_t burn_in = -1;  // < 0: 10% of n_steps
  int ensemble_size = 16;
  std::uint64_t seed = 0;
  /// Rescale each thermal sample to the canonical mean energy before the
  /// microcanonical run.
  bool pin_energy = true;
  int threads = 1;
};

/// Seed of trajectory `index` in an ensemble with base seed `seed`.
std::uint64_t trajectory_seed(std::uint64_t seed, int index) noexcept;

/// Runs ensemble_size independent trajectories and pools them in seed order.
EnsembleReport run_ensemble(const TodaParams& params, const EnsembleConfig& config);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope x + intercept. Throws DomainError when the
/// x values are all equal or fewer than two points are given.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

struct SweepResult {
  std::vector<double> thermal_energies;  // kB T
  std::vector<EnsembleReport> reports;
  LinearFit fit;  // kinetic_temperature against kB T
};

/// One ensemble per temperature (seeds derived from config.seed and the
/// temperature index), then a least-squares fit of kinetic temperature
/// against kB T. Requires at least three distinct temperatures.
SweepResult temperature_sweep(const TodaParams& params, std::span<const double> temperatures,
                              const EnsembleConfig& config);

}  // namespace vdwtoda
