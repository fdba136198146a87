#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "cvctx/cli.hpp"

namespace cvctx::cli {

namespace {

// Global flags; an option counts only when it appeared on the command line.
struct Flags {
  int M = 0, K = 0, N = 0;
  std::uint64_t shots = 0, seed = 0;
  unsigned workers = 1;
  double hbar = 1.0, p0 = 1.0;
  std::string state, out, format, config;
  CLI::Option *o_M{}, *o_K{}, *o_N{}, *o_shots{}, *o_seed{}, *o_workers{}, *o_hbar{}, *o_p0{}, *o_state{}, *o_out{},
      *o_format{}, *o_config{};
};

void add_global_flags(CLI::App& app, Flags& f) {
  f.o_M = app.add_option("--grid-M", f.M, "box-length multiple M (L = 2 pi M hbar / p0)");
  f.o_K = app.add_option("--grid-K", f.K, "momentum-range multiple K");
  f.o_N = app.add_option("--grid-N", f.N, "points per axis; must equal 2 K M");
  f.o_shots = app.add_option("--shots", f.shots, "shots per context");
  f.o_seed = app.add_option("--seed", f.seed, "RNG seed");
  f.o_workers = app.add_option("--workers", f.workers, "worker threads for sampling");
  f.o_hbar = app.add_option("--hbar", f.hbar, "value of hbar");
  f.o_p0 = app.add_option("--p0", f.p0, "value of p0");
  f.o_state = app.add_option("--state", f.state, "state spec as JSON, or @file");
  f.o_out = app.add_option("--out", f.out, "directory for CSV/data files");
  f.o_format = app.add_option("--format", f.format, "report format")->check(CLI::IsMember({"json", "csv"}));
  f.o_config = app.add_option("--config", f.config, "JSON config file (flags take precedence)");
}

nlohmann::json parse_state_flag(const std::string& text) {
  std::string body = text;
  if (!text.empty() && text.front() == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw ConfigError("cannot open state file " + text.substr(1));
    std::ostringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  try {
    return nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("--state is not valid JSON: ") + e.what());
  }
}

RunConfig build_config(const Flags& f, RunConfig cfg) {
  if (f.o_config->count()) load_config_file(cfg, f.config);
  if (f.o_M->count()) cfg.M = f.M;
  if (f.o_K->count()) cfg.K = f.K;
  if (f.o_N->count()) cfg.N = f.N;
  if (f.o_shots->count()) cfg.shots = f.shots;
  if (f.o_seed->count()) cfg.seed = f.seed;
  if (f.o_workers->count()) cfg.workers = f.workers;
  if (f.o_hbar->count()) cfg.units.hbar = f.hbar;
  if (f.o_p0->count()) cfg.units.p0 = f.p0;
  if (f.o_state->count()) cfg.state = parse_state_flag(f.state);
  if (f.o_out->count()) cfg.out_dir = f.out;
  if (f.o_format->count()) cfg.format = f.format == "csv" ? Format::csv : Format::json;
  if (cfg.workers == 0) throw ConfigError("--workers must be at least 1");
  try {
    cfg.units.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Continuous-variable contextuality: classical bound, operator identities and simulation"};
  app.name("cvctx");
  app.require_subcommand(1);
  Flags flags;
  add_global_flags(app, flags);

  AlgebraOptions algebra;
  auto* verify = app.add_subcommand("verify-algebra", "certify the context identities with exact arithmetic");
  verify->add_flag("--perturb", algebra.perturb, "flip the phase of gamma (negative control)");

  BoundOptions bound_opt;
  auto* bound = app.add_subcommand("bound", "maximise the noncontextual objective and sample random models");
  bound->add_option("--step", bound_opt.step, "grid step in radians")->capture_default_str();
  bound->add_option("--tol", bound_opt.tol, "golden-section tolerance")->capture_default_str();
  bound->add_option("--samples", bound_opt.samples, "random models to draw")->capture_default_str();
  bound->add_option("--landscape-step", bound_opt.landscape_step, "resolution of landscape.csv")->capture_default_str();

  ViolateOptions violate_opt;
  auto* violate = app.add_subcommand("violate", "context expectations and S for a state");
  violate->add_flag("--sweep", violate_opt.sweep, "run the built-in list of eight states");

  auto* sample = app.add_subcommand("sample", "sequential-measurement Monte Carlo in all six contexts");

  EigenbasisOptions eigen_opt;
  double kappa = 0, epsilon = 0, v1 = 0, v2 = 0;
  auto* eigen = app.add_subcommand("eigenbasis", "build and check the common eigenbasis of C, c and gamma");
  auto* o_kappa = eigen->add_option("--kappa", kappa, "kappa in [0, 2 pi), multiple of 2 pi / K");
  auto* o_eps = eigen->add_option("--epsilon", epsilon, "epsilon in [0, 2 p0 / hbar), multiple of p0 / (M hbar)");
  auto* o_v1 = eigen->add_option("--v1", v1, "v1 label of the |v1, v2> checks");
  auto* o_v2 = eigen->add_option("--v2", v2, "v2 label");

  for (auto* sub : {verify, bound, violate, sample, eigen}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help and version requests exit 0
    return app.exit(e, out, err) == 0 ? kOk : kConfigError;
  }

  try {
    RunConfig defaults;
    if (eigen->parsed()) {
      defaults.M = 8;
      defaults.K = 4;
    }
    const RunConfig cfg = build_config(flags, defaults);
    if (verify->parsed()) return cmd_verify_algebra(cfg, algebra, out, err);
    if (bound->parsed()) return cmd_bound(cfg, bound_opt, out, err);
    if (violate->parsed()) return cmd_violate(cfg, violate_opt, out, err);
    if (sample->parsed()) return cmd_sample(cfg, out, err);
    if (o_kappa->count()) eigen_opt.kappa = kappa;
    if (o_eps->count()) eigen_opt.epsilon = epsilon;
    if (o_v1->count()) eigen_opt.v1 = v1;
    if (o_v2->count()) eigen_opt.v2 = v2;
    return cmd_eigenbasis(cfg, eigen_opt, out, err);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailure;
  }
}

}  // namespace cvctx::cli
