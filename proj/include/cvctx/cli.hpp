#pragma once

// Command-line front end: configuration, state specs and the five subcommands.
//
// Every command writes its report to `out` (JSON or CSV) and any data files
// under RunConfig::out_dir. Nothing time-dependent is emitted, so repeated
// runs with the same configuration are byte-identical.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "cvctx/cv_sim.hpp"

namespace cvctx::cli {

enum ExitCode : int { kOk = 0, kVerificationFailure = 1, kConfigError = 2 };

/// Bad flags, config files or state specs; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { json, csv };

struct RunConfig {
  int M = 4;
  int K = 8;
  std::optional<int> N;  ///< checked against 2 K M when given
  weyl::UnitSystem units{};
  nlohmann::json state = nlohmann::json{{"family", "gaussian"}};
  std::uint64_t shots = 10000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string out_dir;  ///< empty: no data files
  Format format = Format::json;

  /// Throws ConfigError when N != 2 K M or the grid/units are invalid.
  sim::GridSpec grid() const;
};

/// Applies the keys present in a JSON config object on top of `cfg`:
/// {"grid": {"M", "K", "N"}, "units": {"hbar", "p0"}, "state", "shots",
/// "seed", "workers", "out", "format"}. Unknown keys are rejected.
void apply_config(RunConfig& cfg, const nlohmann::json& j);

/// Reads and applies a JSON config file.
void load_config_file(RunConfig& cfg, const std::string& path);

/// A state spec resolved on a grid: one pure state or a convex mixture.
using PreparedState = std::variant<sim::WaveFunction, sim::Ensemble>;

/// Families: gaussian {sigma, center, momentum}, superposition {first, second,
/// amplitude: [re, im]}, random {seed, envelope_sigma}, modular_eigenstate
/// {kappa, epsilon, v2} and mixture {members: [{weight, state}]}. Missing
/// parameters take the library defaults. Throws ConfigError.
PreparedState prepare_state(const nlohmann::json& spec, const sim::GridSpec& grid);

// Subcommands. Each returns an ExitCode and writes its report to `out`;
// diagnostics go to `err`.

struct AlgebraOptions {
  bool perturb = false;  ///< flips the phase of gamma, a negative control
};
int cmd_verify_algebra(const RunConfig& cfg, const AlgebraOptions& opt, std::ostream& out, std::ostream& err);

struct BoundOptions {
  double step = 0.01;
  double tol = 1e-10;
  std::uint64_t samples = 1000000;
  double landscape_step = 0.05;  ///< resolution of landscape.csv
};
int cmd_bound(const RunConfig& cfg, const BoundOptions& opt, std::ostream& out, std::ostream& err);

struct ViolateOptions {
  bool sweep = false;
};
int cmd_violate(const RunConfig& cfg, const ViolateOptions& opt, std::ostream& out, std::ostream& err);

int cmd_sample(const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct EigenbasisOptions {
  std::optional<double> kappa, epsilon, v1, v2;
};
int cmd_eigenbasis(const RunConfig& cfg, const EigenbasisOptions& opt, std::ostream& out, std::ostream& err);

/// Built-in state list used by `violate --sweep`: (name, spec) pairs.
std::vector<std::pair<std::string, nlohmann::json>> sweep_states();

/// Full command line, e.g. {"cvctx", "bound", "--samples", "10"}.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cvctx::cli
