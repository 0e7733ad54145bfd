#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vdwtoda/gas.hpp"
#include "vdwtoda/toda.hpp"

namespace vdwtoda::cli {

enum class Command { eval, residuals, transform, contact_check, toda, sweep };
enum class Format { csv, json };

const char* to_string(Command command) noexcept;
std::optional<Command> parse_command(const std::string& name);

inline constexpr std::uint64_t kDefaultSeed = 1729;

// Regular (S, V) grid; counts of 1 use the lower bound.
struct GridSpec {
  double S_min = -1.0;
  double S_max = 1.0;
  int S_count = 10;
  double V_min = 1.5;
  double V_max = 11.0;
  int V_count = 10;
};

struct RunConfig {
  Command command = Command::eval;
  GasParameters gas;
  GridSpec grid;
  std::vector<ExtensiveState> points;  // replaces the grid when non-empty
  TodaParams toda;
  EnsembleConfig ensemble;
  std::vector<double> temperatures{0.005, 0.01, 0.02};
  std::uint64_t seed = kDefaultSeed;
  std::map<std::string, double> tolerances;  // overrides of the per-command defaults
  double perturb = 0.0;  // relative fault injected into every checked quantity
  Format format = Format::csv;
  std::string out;
};

struct RunResult {
  int status = 0;      // 0 pass, 1 validation error, 2 check failure
  std::string output;  // rendered table, empty on validation error
  std::string error;   // one-line JSON record, empty on success
};

// Default tolerances for a command, keyed by check name.
std::map<std::string, double> default_tolerances(Command command);

// Effective configuration as JSON, minus execution-only settings (out, threads);
// hashed into the provenance footer.
std::string canonical_config(const RunConfig& config);
std::uint64_t fnv1a(const std::string& bytes) noexcept;

// Loads a JSON config; throws DomainError naming the offending field.
RunConfig load_config(const std::string& json_text);

RunResult run(const RunConfig& config);

// Full command-line entry point: parses argv, runs, writes output.
int run_main(int argc, char** argv);

}  // namespace vdwtoda::cli
