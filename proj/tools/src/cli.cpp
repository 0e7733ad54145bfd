#include "vdwtoda_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "vdwtoda/contact.hpp"
#include "vdwtoda/errors.hpp"
#include "vdwtoda/pde_state.hpp"
#include "vdwtoda/transforms.hpp"

#ifndef VDWTODA_VERSION
#define VDWTODA_VERSION "unknown"
#endif

namespace vdwtoda::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Column {
  std::string name;
  std::string unit;
};

struct Check {
  std::string name;
  double tolerance = 0.0;
  double worst = 0.0;
  long row = -1;  // -1: summary-level check
  bool seen = false;

  void observe(double value, long at) {
    // NaN never compares greater, so treat it as the worst possible value.
    const double v = std::isnan(value) ? std::numeric_limits<double>::infinity() : value;
    if (!seen || v > worst) {
      worst = v;
      row = at;
      seen = true;
    }
  }
  bool passed() const { return !seen || worst <= tolerance; }
};

struct Report {
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, double>> summary;
  std::vector<Check> checks;

  Check& check(const std::string& name) {
    for (auto& c : checks) {
      if (c.name == name) return c;
    }
    throw std::logic_error("unknown check " + name);
  }
};

struct ValidationError : std::runtime_error {
  ValidationError(std::string code_, const std::string& message, std::string field_)
      : std::runtime_error(message), code(std::move(code_)), field(std::move(field_)) {}
  std::string code;
  std::string field;
};

std::string real(double v) { return fmt::format("{:.17g}", v); }

std::vector<ExtensiveState> sample_points(const RunConfig& config) {
  if (!config.points.empty()) return config.points;
  const GridSpec& g = config.grid;
  auto node = [](double lo, double hi, int count, int i) {
    return count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  };
  std::vector<ExtensiveState> out;
  out.reserve(static_cast<std::size_t>(g.S_count) * static_cast<std::size_t>(g.V_count));
  for (int i = 0; i < g.S_count; ++i) {
    for (int j = 0; j < g.V_count; ++j) {
      out.push_back({node(g.S_min, g.S_max, g.S_count, i), node(g.V_min, g.V_max, g.V_count, j)});
    }
  }
  return out;
}

void validate(const RunConfig& config) {
  try {
    config.gas.validate();
  } catch (const DomainError& e) {
    throw ValidationError("invalid_value", e.what(), "gas." + e.field());
  }
  auto require = [](bool ok, const std::string& field, const std::string& message) {
    if (!ok) throw ValidationError("invalid_value", message, field);
  };

  const bool uses_points = config.command == Command::eval ||
                           config.command == Command::residuals ||
                           config.command == Command::transform ||
                           config.command == Command::contact_check;
  if (uses_points) {
    if (config.points.empty()) {
      const GridSpec& g = config.grid;
      require(g.S_count >= 1, "grid.S_count", "S_count must be at least 1");
      require(g.V_count >= 1, "grid.V_count", "V_count must be at least 1");
      require(std::isfinite(g.S_min) && std::isfinite(g.S_max), "grid.S_min",
              "S bounds must be finite");
      require(std::isfinite(g.V_max), "grid.V_max", "V bounds must be finite");
      require(g.V_min > config.gas.b && std::isfinite(g.V_min), "grid.V_min",
              fmt::format("V_min must exceed b = {}", config.gas.b));
      require(g.V_max > config.gas.b, "grid.V_max",
              fmt::format("V_max must exceed b = {}", config.gas.b));
    }
    for (std::size_t i = 0; i < config.points.size(); ++i) {
      const auto& pt = config.points[i];
      require(std::isfinite(pt.S), fmt::format("points[{}].S", i), "S must be finite");
      require(pt.V > config.gas.b && std::isfinite(pt.V), fmt::format("points[{}].V", i),
              fmt::format("V must exceed b = {}", config.gas.b));
    }
  }
  if (config.command == Command::transform && !(config.gas.a > 0.0)) {
    throw ValidationError("chart_singular", "Toda chart needs a > 0", "gas.a");
  }
  if (config.command == Command::toda || config.command == Command::sweep) {
    try {
      config.toda.validate();
    } catch (const DomainError& e) {
      throw ValidationError("invalid_value", e.what(), "toda." + e.field());
    }
    const EnsembleConfig& en = config.ensemble;
    require(en.kB > 0.0 && std::isfinite(en.kB), "ensemble.kB", "kB must be positive");
    require(en.n_steps > 0, "ensemble.n_steps", "n_steps must be positive");
    require(en.burn_in < en.n_steps, "ensemble.burn_in", "burn_in must be below n_steps");
    require(en.ensemble_size >= 1, "ensemble.ensemble_size", "ensemble_size must be at least 1");
    require(en.threads >= 1, "ensemble.threads", "threads must be at least 1");
  }
  if (config.command == Command::toda) {
    require(config.ensemble.temperature > 0.0 && std::isfinite(config.ensemble.temperature),
            "ensemble.temperature", "temperature must be positive");
  }
  if (config.command == Command::sweep) {
    require(config.temperatures.size() >= 3, "temperatures", "sweep needs at least 3 temperatures");
    for (std::size_t i = 0; i < config.temperatures.size(); ++i) {
      const double t = config.temperatures[i];
      require(t > 0.0 && std::isfinite(t), fmt::format("temperatures[{}]", i),
              "temperatures must be positive");
    }
    const auto [lo, hi] = std::minmax_element(config.temperatures.begin(), config.temperatures.end());
    require(*lo != *hi, "temperatures", "sweep temperatures must not all be equal");
  }
  require(std::isfinite(config.perturb), "perturb", "perturb must be finite");

  const auto defaults = default_tolerances(config.command);
  for (const auto& [name, value] : config.tolerances) {
    if (defaults.find(name) == defaults.end()) {
      throw ValidationError("unknown_tolerance",
                            fmt::format("command {} has no check named {}",
                                        to_string(config.command), name),
                            "tol." + name);
    }
    require(value >= 0.0 && std::isfinite(value), "tol." + name,
            "tolerance must be non-negative and finite");
  }
}

Report make_report(const RunConfig& config, std::vector<Column> columns) {
  Report r;
  r.columns = std::move(columns);
  for (const auto& [name, tol] : default_tolerances(config.command)) {
    const auto it = config.tolerances.find(name);
    r.checks.push_back({name, it == config.tolerances.end() ? tol : it->second});
  }
  return r;
}

Report run_eval(const RunConfig& config) {
  Report r = make_report(config, {{"S", "energy/temperature"},
                                  {"V", "volume"},
                                  {"U", "energy"},
                                  {"T", "temperature"},
                                  {"p", "pressure"}});
  for (const auto& s : sample_points(config)) {
    const ContactPoint c = contact_lift(config.gas, s);
    r.rows.push_back({s.S, s.V, c.U, c.T, c.p});
  }
  return r;
}

Report run_residuals(const RunConfig& config) {
  Report r = make_report(config, {{"S", "energy/temperature"},
                                  {"V", "volume"},
                                  {"eos_residual", "1"},
                                  {"equipartition_residual", "1"},
                                  {"pde1_residual", "1"},
                                  {"pde2_residual", "1"},
                                  {"max_residual", "1"}});
  const GasParameters& g = config.gas;
  long row = 0;
  for (const auto& s : sample_points(config)) {
    ContactPoint c = contact_lift(g, s);
    c.T *= 1.0 + config.perturb;
    const double eos = std::abs(eos_residual(c, g)) / eos_scale(c, g);
    const double eq = std::abs(equipartition_residual(c, g)) / equipartition_scale(c, g);
    const double pde1 = std::abs(pde1_residual(g, s, GradientSource::analytic())) / pde1_scale(g, s);
    const double pde2 = std::abs(pde2_residual(g, s, GradientSource::analytic())) / pde2_scale(g, s);
    const double worst = std::max({eos, eq, pde1, pde2});
    r.rows.push_back({s.S, s.V, eos, eq, pde1, pde2, worst});
    r.check("residual").observe(worst, row++);
  }
  return r;
}

Report run_transform(const RunConfig& config) {
  Report r = make_report(config, {{"S", "energy/temperature"},
                                  {"V", "volume"},
                                  {"x", "1"},
                                  {"y", "1"},
                                  {"p_x", "energy"},
                                  {"p_y", "energy"},
                                  {"U", "energy"},
                                  {"roundtrip_error", "1"},
                                  {"energy_error", "1"}});
  const GasParameters& g = config.gas;
  long row = 0;
  for (const auto& s : sample_points(config)) {
    const TransformedPoint t = full_chain(g, s.S, s.V);
    const auto [S_back, V_back] = chain_coords_inverse(g, t.x, t.y);
    const double roundtrip = std::max(std::abs(S_back - s.S) / std::max(1.0, std::abs(s.S)),
                                      std::abs(V_back - s.V) / std::max(1.0, std::abs(s.V)));
    const double U_xy = t.U * (1.0 + config.perturb);
    const double scale = toda_potential(g, t.x) + toda_potential(g, t.y);
    const double energy_err = std::abs(U_xy - energy(g, s)) / scale;
    r.rows.push_back({s.S, s.V, t.x, t.y, t.p_x, t.p_y, U_xy, roundtrip, energy_err});
    r.check("roundtrip").observe(roundtrip, row);
    r.check("energy").observe(energy_err, row);
    ++row;
  }
  return r;
}

Report run_contact_check(const RunConfig& config) {
  Report r = make_report(config, {{"S", "energy/temperature"},
                                  {"V", "volume"},
                                  {"pullback_defect", "1"},
                                  {"bracket_S_T_error", "1"},
                                  {"bracket_V_minus_p_error", "1"}});
  const GasParameters& g = config.gas;
  const double fault = 1.0 + config.perturb;
  const Observable S = [](const PoissonPoint& q) { return q.S; };
  const Observable T = [fault](const PoissonPoint& q) { return fault * q.T; };
  const Observable V = [](const PoissonPoint& q) { return q.V; };
  const Observable minus_p = [fault](const PoissonPoint& q) { return -fault * q.p; };
  constexpr double kBracketStep = 1e-4;
  long row = 0;
  for (const auto& s : sample_points(config)) {
    double defect = 0.0;
    for (const auto& [dS, dV] : {std::pair{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}) {
      defect = std::max(defect, pullback_defect(g, s, dS, dV) / g.U0);
    }
    const ContactPoint c = contact_lift(g, s);
    const PoissonPoint at{c.S, c.T, c.V, c.p};
    const double st = std::abs(poisson_bracket(S, T, at, kBracketStep) - 1.0);
    const double vp = std::abs(poisson_bracket(V, minus_p, at, kBracketStep) - 1.0);
    r.rows.push_back({s.S, s.V, defect, st, vp});
    r.check("pullback").observe(defect, row);
    r.check("bracket").observe(std::max(st, vp), row);
    ++row;
  }
  return r;
}

EnsembleConfig ensemble_of(const RunConfig& config) {
  EnsembleConfig en = config.ensemble;
  en.seed = config.seed;
  return en;
}

double velocity_z(const EnsembleReport& rep, std::size_t i) {
  const double m = std::abs(rep.mean_velocity[i]);
  const double se = rep.velocity_stderr[i];
  if (se > 0.0) return m / se;
  return m == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

Report run_toda(const RunConfig& config) {
  Report r = make_report(config, {{"site", "1"},
                                  {"mean_p2_over_mass", "energy"},
                                  {"mean_velocity", "length/time"},
                                  {"velocity_stderr", "length/time"},
                                  {"velocity_z", "1"}});
  const EnsembleConfig en = ensemble_of(config);
  const EnsembleReport rep = run_ensemble(config.toda, en);
  const double fault = 1.0 + config.perturb;
  for (std::size_t i = 0; i < rep.mean_p2.size(); ++i) {
    const double z = velocity_z(rep, i);
    r.rows.push_back({static_cast<double>(i), fault * rep.mean_p2[i] / config.toda.mass,
                      rep.mean_velocity[i], rep.velocity_stderr[i], z});
    r.check("velocity_z").observe(z, static_cast<long>(i));
  }
  const double kinetic = fault * rep.kinetic_temperature;
  const double thermal = en.kB * en.temperature;
  r.summary = {{"thermal_energy", thermal},
               {"kinetic_temperature", kinetic},
               {"mean_energy", rep.mean_energy},
               {"energy_drift", rep.energy_drift},
               {"energy_deviation", rep.energy_deviation},
               {"samples", static_cast<double>(rep.samples)},
               {"trajectories", static_cast<double>(rep.trajectories)}};
  r.check("equipartition").observe(std::abs(kinetic / thermal - 1.0), -1);
  r.check("drift").observe(rep.energy_drift, -1);
  return r;
}

Report run_sweep(const RunConfig& config) {
  Report r = make_report(config, {{"thermal_energy", "energy"},
                                  {"pooled_p2_over_mass", "energy"},
                                  {"max_velocity_z", "1"},
                                  {"energy_drift", "1"}});
  const EnsembleConfig en = ensemble_of(config);
  const SweepResult sweep = temperature_sweep(config.toda, config.temperatures, en);
  const double fault = 1.0 + config.perturb;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = 0; k < sweep.reports.size(); ++k) {
    const EnsembleReport& rep = sweep.reports[k];
    double z_max = 0.0;
    for (std::size_t i = 0; i < rep.mean_velocity.size(); ++i) {
      z_max = std::max(z_max, velocity_z(rep, i));
    }
    const double y = fault * rep.kinetic_temperature;
    xs.push_back(sweep.thermal_energies[k]);
    ys.push_back(y);
    r.rows.push_back({sweep.thermal_energies[k], y, z_max, rep.energy_drift});
    r.check("velocity_z").observe(z_max, static_cast<long>(k));
    r.check("drift").observe(rep.energy_drift, static_cast<long>(k));
  }
  const LinearFit fit = fit_line(xs, ys);
  const double kT_min = *std::min_element(xs.begin(), xs.end());
  r.summary = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}};
  r.check("slope").observe(std::abs(fit.slope - 1.0), -1);
  r.check("r_squared_deficit").observe(1.0 - fit.r_squared, -1);
  r.check("intercept").observe(std::abs(fit.intercept) / kT_min, -1);
  return r;
}

std::string provenance_hash(const RunConfig& config) {
  return fmt::format("{:016x}", fnv1a(canonical_config(config)));
}

std::string render_csv(const RunConfig& config, const Report& r) {
  std::string out;
  for (std::size_t i = 0; i < r.columns.size(); ++i) {
    out += fmt::format("{}{}[{}]", i ? "," : "", r.columns[i].name, r.columns[i].unit);
  }
  out += '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += i ? "," : "";
      out += real(row[i]);
    }
    out += '\n';
  }
  for (const auto& [name, value] : r.summary) out += fmt::format("# summary,{}={}\n", name, real(value));
  for (const auto& c : r.checks) {
    out += fmt::format("# check,{}={},worst={},tolerance={},row={}\n", c.name,
                       c.passed() ? "pass" : "fail", real(c.worst), real(c.tolerance), c.row);
  }
  out += fmt::format("# provenance,config_hash={},seed={},version={}\n", provenance_hash(config),
                     config.seed, VDWTODA_VERSION);
  return out;
}

std::string render_json(const RunConfig& config, const Report& r) {
  ordered_json doc;
  doc["schema_version"] = "1";
  doc["command"] = to_string(config.command);
  ordered_json columns = ordered_json::array();
  for (const auto& c : r.columns) columns.push_back({{"name", c.name}, {"unit", c.unit}});
  doc["columns"] = std::move(columns);
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows) {
    ordered_json record;
    for (std::size_t i = 0; i < row.size(); ++i) record[r.columns[i].name] = row[i];
    rows.push_back(std::move(record));
  }
  doc["rows"] = std::move(rows);
  ordered_json summary = ordered_json::object();
  for (const auto& [name, value] : r.summary) summary[name] = value;
  doc["summary"] = std::move(summary);
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed()},
                      {"worst", c.worst},
                      {"tolerance", c.tolerance},
                      {"row", c.row}});
  }
  doc["checks"] = std::move(checks);
  doc["provenance"] = {{"config_hash", provenance_hash(config)},
                       {"seed", config.seed},
                       {"version", VDWTODA_VERSION}};
  return doc.dump(2) + "\n";
}

std::string error_record(const std::string& code, const std::string& message,
                         const std::string& field) {
  ordered_json e;
  e["schema_version"] = "1";
  e["status"] = "error";
  e["code"] = code;
  e["message"] = message;
  e["field"] = field;
  return e.dump();
}

std::string failure_record(const Report& r) {
  // Report the first failing check; its row is the worst offender for that check.
  for (const auto& c : r.checks) {
    if (c.passed()) continue;
    ordered_json e;
    e["schema_version"] = "1";
    e["status"] = "check_failed";
    e["check"] = c.name;
    e["worst"] = c.worst;
    e["tolerance"] = c.tolerance;
    e["row"] = c.row;
    if (c.row >= 0) {
      ordered_json values;
      const auto& row = r.rows[static_cast<std::size_t>(c.row)];
      for (std::size_t i = 0; i < row.size(); ++i) values[r.columns[i].name] = row[i];
      e["values"] = std::move(values);
    }
    return e.dump();
  }
  return {};
}

// ---- config file -----------------------------------------------------------

template <typename T>
void read(const nlohmann::json& obj, const char* key, const std::string& path, T& target) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    target = it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DomainError(fmt::format("wrong type for {}", path + key), path + key, kNaN);
  }
}

void reject_unknown(const nlohmann::json& obj, const std::string& path,
                    std::initializer_list<const char*> known) {
  if (!obj.is_object()) throw DomainError(fmt::format("{} must be an object", path), path, kNaN);
  for (const auto& item : obj.items()) {
    const bool ok = std::any_of(known.begin(), known.end(),
                                [&](const char* k) { return item.key() == k; });
    if (!ok) {
      throw DomainError(fmt::format("unknown configuration key {}{}", path, item.key()),
                        path + item.key(), kNaN);
    }
  }
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw DomainError(fmt::format("format must be csv or json (got {})", name), "format", kNaN);
}

ExtensiveState parse_point(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("missing comma");
    std::size_t used_s = 0;
    std::size_t used_v = 0;
    const std::string s_text = text.substr(0, comma);
    const std::string v_text = text.substr(comma + 1);
    const double S = std::stod(s_text, &used_s);
    const double V = std::stod(v_text, &used_v);
    if (used_s != s_text.size() || used_v != v_text.size()) throw std::invalid_argument("trailing");
    return {S, V};
  } catch (const std::exception&) {
    throw DomainError(fmt::format("point must be S,V (got {})", text), "points", kNaN);
  }
}

}  // namespace

const char* to_string(Command command) noexcept {
  switch (command) {
    case Command::eval: return "eval";
    case Command::residuals: return "residuals";
    case Command::transform: return "transform";
    case Command::contact_check: return "contact-check";
    case Command::toda: return "toda";
    case Command::sweep: return "sweep";
  }
  return "unknown";
}

std::optional<Command> parse_command(const std::string& name) {
  for (Command c : {Command::eval, Command::residuals, Command::transform, Command::contact_check,
                    Command::toda, Command::sweep}) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

std::map<std::string, double> default_tolerances(Command command) {
  switch (command) {
    case Command::eval: return {};
    case Command::residuals: return {{"residual", 1e-12}};
    case Command::transform: return {{"roundtrip", 1e-10}, {"energy", 1e-12}};
    case Command::contact_check: return {{"pullback", 1e-6}, {"bracket", 1e-10}};
    case Command::toda: return {{"velocity_z", 3.0}, {"equipartition", 0.05}, {"drift", 1e-6}};
    case Command::sweep:
      return {{"velocity_z", 3.0},
              {"drift", 1e-6},
              {"slope", 0.05},
              {"r_squared_deficit", 0.01},
              {"intercept", 0.1}};
  }
  return {};
}

std::uint64_t fnv1a(const std::string& bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string canonical_config(const RunConfig& config) {
  // Output path and thread count do not change results, so they stay out of the hash.
  ordered_json j;
  j["command"] = to_string(config.command);
  const GasParameters& g = config.gas;
  j["gas"] = {{"a", g.a}, {"b", g.b}, {"N", g.N}, {"kB", g.kB}, {"U0", g.U0}, {"V0", g.V0}};
  const GridSpec& gr = config.grid;
  j["grid"] = {{"S_min", gr.S_min}, {"S_max", gr.S_max}, {"S_count", gr.S_count},
               {"V_min", gr.V_min}, {"V_max", gr.V_max}, {"V_count", gr.V_count}};
  ordered_json points = ordered_json::array();
  for (const auto& p : config.points) points.push_back({p.S, p.V});
  j["points"] = std::move(points);
  const TodaParams& t = config.toda;
  j["toda"] = {{"n_sites", t.n_sites}, {"mass", t.mass}, {"a_T", t.a_T},
               {"b_T", t.b_T},         {"dt", t.dt}};
  const EnsembleConfig& en = config.ensemble;
  j["ensemble"] = {{"temperature", en.temperature}, {"kB", en.kB},
                   {"n_steps", en.n_steps},         {"burn_in", en.burn_in},
                   {"ensemble_size", en.ensemble_size}, {"pin_energy", en.pin_energy}};
  j["temperatures"] = config.temperatures;
  j["seed"] = config.seed;
  ordered_json tol = ordered_json::object();
  for (const auto& [name, value] : config.tolerances) tol[name] = value;
  j["tolerances"] = std::move(tol);
  j["perturb"] = config.perturb;
  j["format"] = config.format == Format::csv ? "csv" : "json";
  return j.dump();
}

RunConfig load_config(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(fmt::format("config is not valid JSON: {}", e.what()), "config", kNaN);
  }
  reject_unknown(doc, "", {"command", "gas", "grid", "points", "toda", "ensemble", "temperatures",
                           "seed", "tolerances", "perturb", "format", "out"});
  RunConfig c;
  if (doc.contains("command")) {
    std::string name;
    read(doc, "command", "", name);
    const auto cmd = parse_command(name);
    if (!cmd) throw DomainError(fmt::format("unknown command {}", name), "command", kNaN);
    c.command = *cmd;
  }
  if (doc.contains("gas")) {
    const auto& g = doc["gas"];
    reject_unknown(g, "gas.", {"a", "b", "N", "kB", "U0", "V0"});
    read(g, "a", "gas.", c.gas.a);
    read(g, "b", "gas.", c.gas.b);
    read(g, "N", "gas.", c.gas.N);
    read(g, "kB", "gas.", c.gas.kB);
    read(g, "U0", "gas.", c.gas.U0);
    read(g, "V0", "gas.", c.gas.V0);
  }
  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    reject_unknown(g, "grid.", {"S_min", "S_max", "S_count", "V_min", "V_max", "V_count"});
    read(g, "S_min", "grid.", c.grid.S_min);
    read(g, "S_max", "grid.", c.grid.S_max);
    read(g, "S_count", "grid.", c.grid.S_count);
    read(g, "V_min", "grid.", c.grid.V_min);
    read(g, "V_max", "grid.", c.grid.V_max);
    read(g, "V_count", "grid.", c.grid.V_count);
  }
  if (doc.contains("points")) {
    std::vector<std::array<double, 2>> raw;
    read(doc, "points", "", raw);
    for (const auto& [S, V] : raw) c.points.push_back({S, V});
  }
  if (doc.contains("toda")) {
    const auto& t = doc["toda"];
    reject_unknown(t, "toda.", {"n_sites", "mass", "a_T", "b_T", "dt"});
    read(t, "n_sites", "toda.", c.toda.n_sites);
    read(t, "mass", "toda.", c.toda.mass);
    read(t, "a_T", "toda.", c.toda.a_T);
    read(t, "b_T", "toda.", c.toda.b_T);
    read(t, "dt", "toda.", c.toda.dt);
  }
  if (doc.contains("ensemble")) {
    const auto& e = doc["ensemble"];
    reject_unknown(e, "ensemble.", {"temperature", "kB", "n_steps", "burn_in", "ensemble_size",
                                    "pin_energy", "threads"});
    read(e, "temperature", "ensemble.", c.ensemble.temperature);
    read(e, "kB", "ensemble.", c.ensemble.kB);
    read(e, "n_steps", "ensemble.", c.ensemble.n_steps);
    read(e, "burn_in", "ensemble.", c.ensemble.burn_in);
    read(e, "ensemble_size", "ensemble.", c.ensemble.ensemble_size);
    read(e, "pin_energy", "ensemble.", c.ensemble.pin_energy);
    read(e, "threads", "ensemble.", c.ensemble.threads);
  }
  read(doc, "temperatures", "", c.temperatures);
  read(doc, "seed", "", c.seed);
  read(doc, "tolerances", "", c.tolerances);
  read(doc, "perturb", "", c.perturb);
  if (doc.contains("format")) {
    std::string name;
    read(doc, "format", "", name);
    c.format = parse_format(name);
  }
  read(doc, "out", "", c.out);
  return c;
}

RunResult run(const RunConfig& config) {
  RunResult result;
  Report report;
  try {
    validate(config);
    switch (config.command) {
      case Command::eval: report = run_eval(config); break;
      case Command::residuals: report = run_residuals(config); break;
      case Command::transform: report = run_transform(config); break;
      case Command::contact_check: report = run_contact_check(config); break;
      case Command::toda: report = run_toda(config); break;
      case Command::sweep: report = run_sweep(config); break;
    }
  } catch (const ValidationError& e) {
    result.status = 1;
    result.error = error_record(e.code, e.what(), e.field);
    return result;
  } catch (const ChartDomainError& e) {
    result.status = 1;
    result.error = error_record("chart_singular", e.what(), e.field());
    return result;
  } catch (const DomainError& e) {
    result.status = 1;
    result.error = error_record("domain_error", e.what(), e.field());
    return result;
  } catch (const RangeError& e) {
    result.status = 1;
    result.error = error_record("overflow", e.what(), fmt::format("exponent={}", real(e.exponent())));
    return result;
  }

  result.output = config.format == Format::csv ? render_csv(config, report)
                                               : render_json(config, report);
  result.error = failure_record(report);
  result.status = result.error.empty() ? 0 : 2;
  return result;
}

int run_main(int argc, char** argv) {
  CLI::App app{"van der Waals contact geometry and Toda chain toolkit"};
  app.set_version_flag("--version", VDWTODA_VERSION);

  std::vector<std::string> positional;
  app.add_option("command", positional,
                 "eval | residuals | transform | contact-check | toda | sweep (also: toda sweep)")
      ->expected(0, 2);

  std::optional<std::string> config_path, out, format;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> tolerances, points;
  std::optional<double> a, b, N, kB, U0, V0;
  std::optional<double> S_min, S_max, V_min, V_max;
  std::optional<int> S_count, V_count;
  std::optional<int> sites, ensemble, threads;
  std::optional<double> mass, a_T, b_T, dt, temperature, toda_kB, perturb;
  std::optional<std::int64_t> steps, burn_in;
  std::optional<std::vector<double>> temperatures;
  bool no_pin = false;

  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out, "Output path (default: stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, fmt::format("Random seed (default {})", kDefaultSeed));
  app.add_option("--tol", tolerances, "Tolerance override NAME=VALUE (repeatable)");
  app.add_option("--perturb", perturb, "Relative fault injected into checked quantities");

  auto* gas = app.add_option_group("gas");
  gas->add_option("--a", a, "Attraction constant");
  gas->add_option("--b", b, "Excluded volume");
  gas->add_option("--N", N, "Particle count");
  gas->add_option("--kB", kB, "Boltzmann constant");
  gas->add_option("--U0", U0, "Fiducial energy");
  gas->add_option("--V0", V0, "Fiducial volume");

  auto* grid = app.add_option_group("grid");
  grid->add_option("--S-min", S_min);
  grid->add_option("--S-max", S_max);
  grid->add_option("--S-count", S_count);
  grid->add_option("--V-min", V_min);
  grid->add_option("--V-max", V_max);
  grid->add_option("--V-count", V_count);
  grid->add_option("--point", points, "Evaluate at S,V instead of the grid (repeatable)");

  auto* chain = app.add_option_group("toda");
  chain->add_option("--sites", sites, "Number of chain sites");
  chain->add_option("--mass", mass);
  chain->add_option("--a-T", a_T, "Toda coupling a");
  chain->add_option("--b-T", b_T, "Toda stiffness b");
  chain->add_option("--dt", dt, "Time step");
  chain->add_option("--temperature", temperature, "Temperature for the toda command");
  chain->add_option("--toda-kB", toda_kB, "Boltzmann constant for the chain");
  chain->add_option("--steps", steps, "Steps per trajectory");
  chain->add_option("--burn-in", burn_in, "Discarded steps (default 10%)");
  chain->add_option("--ensemble", ensemble, "Trajectories per temperature");
  chain->add_option("--threads", threads);
  chain->add_option("--temperatures", temperatures, "Sweep temperatures")->delimiter(',');
  chain->add_flag("--no-pin", no_pin, "Do not rescale samples to the canonical mean energy");

  auto fail = [](const std::string& code, const std::string& message, const std::string& field) {
    std::cerr << error_record(code, message, field) << '\n';
    return 1;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), "argv");
  }

  RunConfig config;
  try {
    if (config_path) {
      std::ifstream in(*config_path, std::ios::binary);
      std::stringstream buffer;
      buffer << in.rdbuf();
      config = load_config(buffer.str());
    }
    if (!positional.empty()) {
      std::string name = positional[0];
      if (positional.size() == 2) {
        if (name != "toda" || positional[1] != "sweep") {
          return fail("usage", "only 'toda sweep' takes a second word", "command");
        }
        name = "sweep";
      }
      const auto cmd = parse_command(name);
      if (!cmd) return fail("usage", fmt::format("unknown command {}", name), "command");
      config.command = *cmd;
    } else if (!config_path) {
      return fail("usage", "no command given", "command");
    }

    if (out) config.out = *out;
    if (format) config.format = parse_format(*format);
    if (seed) config.seed = *seed;
    if (perturb) config.perturb = *perturb;
    for (const auto& item : tolerances) {
      const auto eq = item.find('=');
      double value = kNaN;
      try {
        if (eq == std::string::npos) throw std::invalid_argument("no =");
        std::size_t used = 0;
        value = std::stod(item.substr(eq + 1), &used);
        if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        return fail("usage", fmt::format("--tol expects NAME=VALUE (got {})", item), "tol");
      }
      config.tolerances[item.substr(0, eq)] = value;
    }
    auto apply = [](const auto& opt, auto& target) {
      if (opt) target = *opt;
    };
    apply(a, config.gas.a);
    apply(b, config.gas.b);
    apply(N, config.gas.N);
    apply(kB, config.gas.kB);
    apply(U0, config.gas.U0);
    apply(V0, config.gas.V0);
    apply(S_min, config.grid.S_min);
    apply(S_max, config.grid.S_max);
    apply(S_count, config.grid.S_count);
    apply(V_min, config.grid.V_min);
    apply(V_max, config.grid.V_max);
    apply(V_count, config.grid.V_count);
    if (!points.empty()) {
      config.points.clear();
      for (const auto& p : points) config.points.push_back(parse_point(p));
    }
    apply(sites, config.toda.n_sites);
    apply(mass, config.toda.mass);
    apply(a_T, config.toda.a_T);
    apply(b_T, config.toda.b_T);
    apply(dt, config.toda.dt);
    apply(temperature, config.ensemble.temperature);
    apply(toda_kB, config.ensemble.kB);
    apply(steps, config.ensemble.n_steps);
    apply(burn_in, config.ensemble.burn_in);
    apply(ensemble, config.ensemble.ensemble_size);
    apply(threads, config.ensemble.threads);
    apply(temperatures, config.temperatures);
    if (no_pin) config.ensemble.pin_energy = false;
  } catch (const DomainError& e) {
    return fail("invalid_config", e.what(), e.field());
  }

  const RunResult result = run(config);
  if (!result.output.empty()) {
    if (config.out.empty()) {
      std::cout << result.output << std::flush;
    } else {
      std::ofstream file(config.out, std::ios::binary | std::ios::trunc);
      file << result.output;
      if (!file) return fail("io_error", "cannot write output", "out");
    }
  }
  if (!result.error.empty()) std::cerr << result.error << '\n';
  return result.status;
}

}  // namespace vdwtoda::cli
