#include "vdwtoda/toda.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "vdwtoda/errors.hpp"

namespace vdwtoda {

void TodaParams::validate() const {
  if (n_sites < 2) {
    throw DomainError(fmt::format("n_sites must be at least 2 (got {})", n_sites), "n_sites",
                      n_sites);
  }
  auto require_positive = [](double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw DomainError(fmt::format("{} must be positive and finite (got {})", name, value), name,
                        value);
    }
  };
  require_positive(mass, "mass");
  require_positive(a_T, "a_T");
  require_positive(b_T, "b_T");
  require_positive(dt, "dt");
}

namespace {

void require_sites(const TodaParams& params, std::size_t size, const char* what) {
  if (size != static_cast<std::size_t>(params.n_sites)) {
    throw DomainError(fmt::format("{} has {} entries, chain has {} sites", what, size,
                                  params.n_sites),
                      what, static_cast<double>(size));
  }
}

// exp(-b r) - 1 for every periodic bond r_n = q_{n+1} - q_n, guarded.
void bond_expm1(const TodaParams& params, std::span<const double> q, std::span<double> out) {
  const std::size_t n = q.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = q[(i + 1) % n] - q[i];
    const double arg = -params.b_T * r;
    if (!(std::abs(arg) <= kMaxExponent)) {
      throw RangeError(fmt::format("bond exponent {} exceeds guard at site {}", arg, i), arg);
    }
    out[i] = std::expm1(arg);
  }
}

// Forces into `force`; returns the potential energy.
double force_and_potential(const TodaParams& params, std::span<const double> q,
                           std::span<double> em1, std::span<double> force) {
  bond_expm1(params, q, em1);
  const std::size_t n = q.size();
  double potential = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t prev = (i + n - 1) % n;
    force[i] = params.a_T * (em1[prev] - em1[i]);
    const double r = q[(i + 1) % n] - q[i];
    potential += em1[i] + params.b_T * r;
  }
  return potential * params.a_T / params.b_T;
}

}  // namespace

std::vector<double> toda_force(const TodaParams& params, std::span<const double> q) {
  params.validate();
  require_sites(params, q.size(), "q");
  std::vector<double> em1(q.size());
  std::vector<double> force(q.size());
  force_and_potential(params, q, em1, force);
  return force;
}

double potential_energy(const TodaParams& params, std::span<const double> q) {
  params.validate();
  require_sites(params, q.size(), "q");
  std::vector<double> em1(q.size());
  std::vector<double> force(q.size());
  return force_and_potential(params, q, em1, force);
}

double kinetic_energy(const TodaParams& params, std::span<const double> p) {
  double sum = 0.0;
  for (double pi : p) sum += pi * pi;
  return 0.5 * sum / params.mass;
}

double total_energy(const TodaParams& params, const TodaState& state) {
  return kinetic_energy(params, state.p) + potential_energy(params, state.q);
}

double total_momentum(const TodaState& state) noexcept {
  return std::accumulate(state.p.begin(), state.p.end(), 0.0);
}

TodaState equilibrium_state(const TodaParams& params) {
  params.validate();
  const auto n = static_cast<std::size_t>(params.n_sites);
  return TodaState{.q = std::vector<double>(n, 0.0), .p = std::vector<double>(n, 0.0), .t = 0.0};
}

namespace {

// Velocity Verlet with the force at the current positions already in `force`.
// Leaves the force at the new positions in `force` and returns the new
// potential energy.
double verlet_in_place(const TodaParams& params, TodaState& state, std::span<double> em1,
                       std::span<double> force) {
  const std::size_t n = state.q.size();
  const double half_dt = 0.5 * params.dt;
  const double drift = params.dt / params.mass;
  for (std::size_t i = 0; i < n; ++i) {
    state.p[i] += half_dt * force[i];
    state.q[i] += drift * state.p[i];
  }
  const double potential = force_and_potential(params, state.q, em1, force);
  for (std::size_t i = 0; i < n; ++i) state.p[i] += half_dt * force[i];
  state.t += params.dt;
  return potential;
}

}  // namespace

TodaState step_verlet(const TodaState& state, const TodaParams& params) {
  params.validate();
  require_sites(params, state.q.size(), "q");
  require_sites(params, state.p.size(), "p");
  TodaState next = state;
  std::vector<double> em1(state.q.size());
  std::vector<double> force(state.q.size());
  force_and_potential(params, next.q, em1, force);
  verlet_in_place(params, next, em1, force);
  return next;
}

TodaState sample_thermal(const TodaParams& params, double temperature, double kB,
                         std::uint64_t seed) {
  params.validate();
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw DomainError(fmt::format("temperature must be positive (got {})", temperature),
                      "temperature", temperature);
  }
  if (!(kB > 0.0)) throw DomainError("kB must be positive", "kB", kB);

  const auto n = static_cast<std::size_t>(params.n_sites);
  const double kT = kB * temperature;
  std::mt19937_64 rng(seed);

  TodaState state = equilibrium_state(params);
  std::normal_distribution<double> momentum(0.0, std::sqrt(params.mass * kT));
  for (double& p : state.p) p = momentum(rng);
  const double p_mean = total_momentum(state) / static_cast<double>(n);
  for (double& p : state.p) p -= p_mean;

  // With w = exp(-b r) the bond density exp(-phi(r)/kT) becomes
  // Gamma(shape k, rate k), k = a/(b kT).
  const double shape = params.a_T / (params.b_T * kT);
  std::gamma_distribution<double> stretch(shape, 1.0 / shape);
  std::vector<double> bonds(n);
  for (double& r : bonds) r = -std::log(stretch(rng)) / params.b_T;
  const double r_mean = std::accumulate(bonds.begin(), bonds.end(), 0.0) / static_cast<double>(n);
  for (std::size_t i = 0; i + 1 < n; ++i) state.q[i + 1] = state.q[i] + (bonds[i] - r_mean);
  const double q_mean =
      std::accumulate(state.q.begin(), state.q.end(), 0.0) / static_cast<double>(n);
  for (double& q : state.q) q -= q_mean;
  return state;
}

double canonical_mean_energy(const TodaParams& params, double kT) {
  params.validate();
  if (!(kT > 0.0)) throw DomainError("thermal energy must be positive", "kT", kT);
  const double k = params.a_T / (params.b_T * kT);
  double log_minus_digamma = 0.0;
  if (k > 50.0) {
    // Asymptotic series; the direct difference loses digits for large k.
    const double inv = 1.0 / k;
    const double inv2 = inv * inv;
    log_minus_digamma =
        0.5 * inv + inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)));
  } else {
    log_minus_digamma = std::log(k) - boost::math::digamma(k);
  }
  const double dof = params.n_sites - 1;
  return dof * (0.5 * kT + params.a_T / params.b_T * log_minus_digamma);
}

TodaState pin_energy(const TodaState& state, const TodaParams& params, double target) {
  params.validate();
  require_sites(params, state.q.size(), "q");
  require_sites(params, state.p.size(), "p");
  if (!(target > 0.0)) throw DomainError("target energy must be positive", "energy", target);

  const auto n = static_cast<double>(params.n_sites);
  const double q_mean = std::accumulate(state.q.begin(), state.q.end(), 0.0) / n;
  auto scaled = [&](double factor) {
    TodaState out = state;
    for (double& q : out.q) q = q_mean + factor * (q - q_mean);
    for (double& p : out.p) p *= factor;
    return out;
  };
  if (total_energy(params, scaled(1.0)) == 0.0) {
    throw DomainError("cannot rescale a state with zero energy", "energy", 0.0);
  }
  // H(factor) is increasing on factor > 0 and H(0) = 0.
  auto excess = [&](double factor) { return total_energy(params, scaled(factor)) - target; };
  double hi = 1.0;
  while (excess(hi) < 0.0) hi *= 2.0;
  double lo = hi / 2.0;
  while (lo > 0.0 && excess(lo) > 0.0) lo /= 2.0;
  if (excess(hi) == 0.0) return scaled(hi);

  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      excess, lo, hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
  return scaled(0.5 * (a + b));
}

namespace {

// Online least squares of energy against time (Welford).
struct DriftAccumulator {
  std::int64_t count = 0;
  double mean_t = 0.0;
  double mean_e = 0.0;
  double m2_t = 0.0;
  double c_te = 0.0;

  void add(double t, double e) {
    ++count;
    const double dt = t - mean_t;
    mean_t += dt / count;
    mean_e += (e - mean_e) / count;
    m2_t += dt * (t - mean_t);
    c_te += dt * (e - mean_e);
  }
  double slope() const { return m2_t > 0.0 ? c_te / m2_t : 0.0; }
};

}  // namespace

EnsembleReport measure_time_averages(TodaState state, const TodaParams& params,
                                     std::int64_t n_steps, std::int64_t burn_in) {
  params.validate();
  require_sites(params, state.q.size(), "q");
  require_sites(params, state.p.size(), "p");
  if (burn_in < 0 || n_steps <= burn_in) {
    throw DomainError(fmt::format("need n_steps > burn_in >= 0 (n_steps = {}, burn_in = {})",
                                  n_steps, burn_in),
                      "burn_in", static_cast<double>(burn_in));
  }

  const std::size_t n = state.q.size();
  std::vector<double> em1(n);
  std::vector<double> force(n);
  std::vector<double> sum_p(n, 0.0);
  std::vector<double> sum_p2(n, 0.0);

  double potential = force_and_potential(params, state.q, em1, force);
  const double e0 = kinetic_energy(params, state.p) + potential;
  const double t0 = state.t;
  // Fitting E - E0 keeps the regression sums well conditioned.
  DriftAccumulator drift;
  drift.add(0.0, 0.0);
  double max_deviation = 0.0;
  double sum_energy = 0.0;

  for (std::int64_t step = 1; step <= n_steps; ++step) {
    potential = verlet_in_place(params, state, em1, force);
    double kinetic = 0.0;
    for (std::size_t i = 0; i < n; ++i) kinetic += state.p[i] * state.p[i];
    kinetic *= 0.5 / params.mass;
    const double de = kinetic + potential - e0;
    drift.add(state.t - t0, de);
    max_deviation = std::max(max_deviation, std::abs(de));
    if (step > burn_in) {
      sum_energy += de;
      for (std::size_t i = 0; i < n; ++i) {
        sum_p[i] += state.p[i];
        sum_p2[i] += state.p[i] * state.p[i];
      }
    }
  }

  const std::int64_t samples = n_steps - burn_in;
  const auto count = static_cast<double>(samples);
  EnsembleReport report;
  report.samples = samples;
  report.trajectories = 1;
  report.mean_p2.resize(n);
  report.mean_velocity.resize(n);
  report.velocity_stderr.resize(n);
  double total_p2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    report.mean_p2[i] = sum_p2[i] / count;
    report.mean_velocity[i] = sum_p[i] / count / params.mass;
    total_p2 += report.mean_p2[i];
    const double mean_v2 = report.mean_p2[i] / (params.mass * params.mass);
    const double var = std::max(0.0, mean_v2 - report.mean_velocity[i] * report.mean_velocity[i]);
    report.velocity_stderr[i] = samples > 1 ? std::sqrt(var / (count - 1.0)) : 0.0;
  }
  report.pooled_p2 = total_p2 / static_cast<double>(n);
  report.kinetic_temperature = total_p2 / (static_cast<double>(n - 1) * params.mass);
  report.mean_energy = e0 + sum_energy / count;
  const double duration = state.t - t0;
  const double scale = std::abs(e0);
  report.energy_drift = scale > 0.0 ? std::abs(drift.slope() * duration) / scale : 0.0;
  report.energy_deviation = scale > 0.0 ? max_deviation / scale : 0.0;
  return report;
}

std::uint64_t trajectory_seed(std::uint64_t seed, int index) noexcept {
  // splitmix64 finalizer over (seed, index)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

// Pools equal-length trajectories in the order given.
EnsembleReport pool(const std::vector<EnsembleReport>& runs, const TodaParams& params) {
  EnsembleReport pooled;
  const std::size_t n = runs.front().mean_p2.size();
  const auto m = static_cast<double>(runs.size());
  pooled.mean_p2.assign(n, 0.0);
  pooled.mean_velocity.assign(n, 0.0);
  pooled.velocity_stderr.assign(n, 0.0);
  for (const EnsembleReport& run : runs) {
    for (std::size_t i = 0; i < n; ++i) {
      pooled.mean_p2[i] += run.mean_p2[i] / m;
      pooled.mean_velocity[i] += run.mean_velocity[i] / m;
    }
    pooled.pooled_p2 += run.pooled_p2 / m;
    pooled.kinetic_temperature += run.kinetic_temperature / m;
    pooled.mean_energy += run.mean_energy / m;
    pooled.energy_drift = std::max(pooled.energy_drift, run.energy_drift);
    pooled.energy_deviation = std::max(pooled.energy_deviation, run.energy_deviation);
  }
  const double total = m * static_cast<double>(runs.front().samples);
  for (std::size_t i = 0; i < n; ++i) {
    const double mean_v2 = pooled.mean_p2[i] / (params.mass * params.mass);
    const double var =
        std::max(0.0, mean_v2 - pooled.mean_velocity[i] * pooled.mean_velocity[i]);
    pooled.velocity_stderr[i] = total > 1.0 ? std::sqrt(var / (total - 1.0)) : 0.0;
  }
  pooled.samples = runs.front().samples;
  pooled.trajectories = static_cast<int>(runs.size());
  return pooled;
}

}  // namespace

EnsembleReport run_ensemble(const TodaParams& params, const EnsembleConfig& config) {
  params.validate();
  if (config.ensemble_size < 1) {
    throw DomainError("ensemble_size must be positive", "ensemble_size", config.ensemble_size);
  }
  const std::int64_t burn_in = config.burn_in < 0 ? config.n_steps / 10 : config.burn_in;
  const double kT = config.kB * config.temperature;

  std::vector<EnsembleReport> runs(static_cast<std::size_t>(config.ensemble_size));
  auto run_one = [&](int index) {
    TodaState state =
        sample_thermal(params, config.temperature, config.kB, trajectory_seed(config.seed, index));
    if (config.pin_energy) state = pin_energy(state, params, canonical_mean_energy(params, kT));
    runs[static_cast<std::size_t>(index)] =
        measure_time_averages(std::move(state), params, config.n_steps, burn_in);
  };

  const int threads = std::clamp(config.threads, 1, config.ensemble_size);
  if (threads == 1) {
    for (int i = 0; i < config.ensemble_size; ++i) run_one(i);
  } else {
    // Each worker owns a strided subset of indices; results land in fixed slots
    // so pooling below is independent of scheduling.
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    std::vector<std::thread> workers;
    for (int w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (int i = w; i < config.ensemble_size; i += threads) run_one(i);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (std::thread& t : workers) t.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  EnsembleReport report = pool(runs, params);
  report.temperature = kT;
  report.seed = config.seed;
  return report;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("line fit needs at least two (x, y) pairs", "points",
                      static_cast<double>(x.size()));
  }
  const auto n = static_cast<double>(x.size());
  const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mean_x) * (x[i] - mean_x);
    sxy += (x[i] - mean_x) * (y[i] - mean_y);
    syy += (y[i] - mean_y) * (y[i] - mean_y);
  }
  if (!(sxx > 0.0)) {
    throw DomainError("line fit is rank deficient: all x values are equal", "temperatures",
                      mean_x);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

SweepResult temperature_sweep(const TodaParams& params, std::span<const double> temperatures,
                              const EnsembleConfig& config) {
  params.validate();
  if (temperatures.size() < 3) {
    throw DomainError("temperature sweep needs at least three temperatures", "temperatures",
                      static_cast<double>(temperatures.size()));
  }
  SweepResult result;
  for (double T : temperatures) result.thermal_energies.push_back(config.kB * T);
  // Reject a degenerate design before spending any simulation time on it.
  const auto [lo, hi] =
      std::minmax_element(result.thermal_energies.begin(), result.thermal_energies.end());
  if (*lo == *hi) {
    throw DomainError("line fit is rank deficient: all temperatures are equal", "temperatures",
                      *lo);
  }

  std::vector<double> kinetic;
  for (std::size_t i = 0; i < temperatures.size(); ++i) {
    EnsembleConfig run = config;
    run.temperature = temperatures[i];
    run.seed = trajectory_seed(config.seed ^ 0xA5A5A5A5A5A5A5A5ULL, static_cast<int>(i));
    result.reports.push_back(run_ensemble(params, run));
    kinetic.push_back(result.reports.back().kinetic_temperature);
  }
  result.fit = fit_line(result.thermal_energies, kinetic);
  return result;
}

}  // namespace vdwtoda
