#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "cvctx/appendix_basis.hpp"
#include "cvctx/classical_bound.hpp"
#include "cvctx/cli.hpp"

namespace cvctx::cli {

using ojson = nlohmann::ordered_json;
using sim::Complex;
using weyl::ContextId;

namespace {

constexpr double kStateTol = 1e-9;
constexpr double kShotTol = 1e-9;
constexpr double kBoundTol = 1e-6;
constexpr double kSampleSlack = 1e-9;
constexpr double kEigenTol = 1e-8;

std::filesystem::path output_path(const RunConfig& cfg, const std::string& file) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + cfg.out_dir + ": " + ec.message());
  return std::filesystem::path(cfg.out_dir) / file;
}

template <typename Writer>
void write_file(const RunConfig& cfg, const std::string& file, Writer&& writer) {
  if (cfg.out_dir.empty()) return;
  const auto path = output_path(cfg, file);
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  writer(os);
  if (!os) throw ConfigError("error writing " + path.string());
}

void emit_json(std::ostream& out, const ojson& j) { out << j.dump(2) << '\n'; }

ojson grid_json(const sim::GridSpec& g) {
  return {{"M", g.M()}, {"K", g.K()}, {"N", g.N()}, {"hbar", g.units().hbar}, {"p0", g.units().p0}};
}

ojson complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

std::ostream& csv_precision(std::ostream& os) { return os << std::setprecision(17); }

}  // namespace

// --- verify-algebra -------------------------------------------------------------

int cmd_verify_algebra(const RunConfig& cfg, const AlgebraOptions& opt, std::ostream& out, std::ostream& err) {
  cfg.units.validate();
  auto table = weyl::observable_table(cfg.units);
  if (opt.perturb) {
    const auto& g = table[weyl::ObservableId::gamma];
    table[weyl::ObservableId::gamma] = weyl::WeylOp(g.generator(), g.phase_over_pi() + weyl::Rational{1});
  }
  const auto certs = weyl::certify_contexts(table);
  const auto matrix = weyl::compatibility_matrix(table);

  write_file(cfg, "compatibility.csv", [&](std::ostream& os) { weyl::write_compatibility_csv(os, matrix); });
  write_file(cfg, "context_blocks.csv", [&](std::ostream& os) { weyl::write_context_blocks_csv(os, table); });
  write_file(cfg, "context_products.csv", [&](std::ostream& os) { weyl::write_context_products_csv(os, certs); });

  std::string failed;
  for (const auto& c : certs)
    if (!c.ok() && failed.empty()) failed = std::string(weyl::name(c.context));

  if (cfg.format == Format::csv) {
    weyl::write_context_products_csv(out, certs);
  } else {
    ojson j;
    j["perturbed"] = opt.perturb;
    j["contexts"] = ojson::array();
    for (const auto& c : certs)
      j["contexts"].push_back({{"context", weyl::name(c.context)},
                               {"expected_sign", weyl::sign(c.context)},
                               {"phase_over_pi", weyl::to_string(c.product.phase_over_pi())},
                               {"generator_zero", c.generator_zero},
                               {"members_commute", c.members_commute},
                               {"ok", c.ok()}});
    j["ok"] = failed.empty();
    emit_json(out, j);
  }
  if (!failed.empty()) {
    err << "identity failed: " << failed << '\n';
    return kVerificationFailure;
  }
  return kOk;
}

// --- bound ----------------------------------------------------------------------

int cmd_bound(const RunConfig& cfg, const BoundOptions& opt, std::ostream& out, std::ostream& err) {
  if (!(opt.step > 0.0) || !(opt.tol > 0.0)) throw ConfigError("--step and --tol must be positive");
  if (opt.samples == 0) throw ConfigError("--samples must be at least 1");
  if (!(opt.landscape_step > 0.0)) throw ConfigError("--landscape-step must be positive");

  const bound::Optimum best = bound::maximize_objective(opt.step, opt.tol);
  const bound::SampleSummary samples = bound::sample_models(opt.samples, cfg.seed, cfg.workers);
  const double argmax_value = bound::trig_objective(best.argmax);
  const bool equivalent = bound::equivalent_to_known_argmax(best.argmax, 1e-4);

  write_file(cfg, "landscape.csv", [&](std::ostream& os) { bound::write_landscape_csv(os, opt.landscape_step); });
  write_file(cfg, "histogram.csv", [&](std::ostream& os) {
    csv_precision(os) << "bin_lo,bin_hi,count\n";
    const double w = 6.0 / bound::kHistogramBins;
    for (int b = 0; b < bound::kHistogramBins; ++b) os << b * w << ',' << (b + 1) * w << ',' << samples.histogram[b] << '\n';
  });

  if (cfg.format == Format::csv) {
    csv_precision(out) << "max,phi1,phi2,argmax_objective,bound,n_samples,seed,sample_max\n"
                       << best.max << ',' << best.argmax.phi1 << ',' << best.argmax.phi2 << ',' << argmax_value << ','
                       << bound::kClassicalBound << ',' << samples.n_samples << ',' << samples.seed << ','
                       << samples.max_observed << '\n';
  } else {
    ojson j;
    j["max"] = best.max;
    j["argmax"] = {{"phi1", best.argmax.phi1}, {"phi2", best.argmax.phi2}};
    j["argmax_objective"] = argmax_value;
    j["argmax_equivalent"] = equivalent;
    j["bound"] = bound::kClassicalBound;
    j["grid_max"] = best.grid_max;
    j["grid_points"] = best.grid_points;
    j["n_samples"] = samples.n_samples;
    j["seed"] = samples.seed;
    j["sample_max"] = samples.max_observed;
    j["histogram"] = {{"bins", bound::kHistogramBins}, {"lo", 0.0}, {"hi", 6.0}, {"counts", samples.histogram}};
    emit_json(out, j);
  }

  if (std::abs(best.max - bound::kClassicalBound) > kBoundTol) {
    err << "optimizer maximum " << best.max << " differs from 3*sqrt(3) by more than " << kBoundTol << '\n';
    return kVerificationFailure;
  }
  if (samples.max_observed > bound::kClassicalBound + kSampleSlack || samples.max_observed > best.max + kSampleSlack) {
    err << "sampled |S| " << samples.max_observed << " exceeds the optimum\n";
    return kVerificationFailure;
  }
  return kOk;
}

// --- violate --------------------------------------------------------------------

int cmd_violate(const RunConfig& cfg, const ViolateOptions& opt, std::ostream& out, std::ostream& err) {
  const sim::GridSpec grid = cfg.grid();
  std::vector<std::pair<std::string, nlohmann::json>> states;
  if (opt.sweep) states = sweep_states();
  else states.emplace_back(cfg.state.value("family", "state"), cfg.state);

  struct Row {
    std::string name;
    std::array<Complex, weyl::kContextCount> ctx;
    Complex S;
    bool ok;
  };
  std::vector<Row> rows;
  std::string first_failure;
  for (const auto& [name, spec] : states) {
    const PreparedState prepared = prepare_state(spec, grid);
    Row r{name, {}, {}, true};
    for (int c = 0; c < weyl::kContextCount; ++c) {
      const ContextId ctx = weyl::kAllContexts[c];
      r.ctx[c] = std::visit([ctx](const auto& s) { return sim::expectation(s, ctx); }, prepared);
      r.S += static_cast<double>(weyl::sign(ctx)) * r.ctx[c];
      if (std::abs(r.ctx[c] - static_cast<double>(weyl::sign(ctx))) > kStateTol) r.ok = false;
    }
    if (std::abs(r.S - 6.0) > kStateTol) r.ok = false;
    if (!r.ok && first_failure.empty()) first_failure = name;
    rows.push_back(std::move(r));
  }

  auto write_csv = [&rows](std::ostream& os) {
    csv_precision(os) << "state";
    for (ContextId ctx : weyl::kAllContexts) os << ',' << weyl::name(ctx) << "_re," << weyl::name(ctx) << "_im";
    os << ",S_re,S_im,abs_S\n";
    for (const auto& r : rows) {
      os << r.name;
      for (const Complex z : r.ctx) os << ',' << z.real() << ',' << z.imag();
      os << ',' << r.S.real() << ',' << r.S.imag() << ',' << std::abs(r.S) << '\n';
    }
  };
  write_file(cfg, "violate.csv", write_csv);

  if (cfg.format == Format::csv) {
    write_csv(out);
  } else {
    ojson j;
    j["grid"] = grid_json(grid);
    j["states"] = ojson::array();
    for (const auto& r : rows) {
      ojson s;
      s["name"] = r.name;
      s["contexts"] = ojson::array();
      for (int c = 0; c < weyl::kContextCount; ++c) {
        s["contexts"].push_back({{"context", weyl::name(weyl::kAllContexts[c])}, {"re", r.ctx[c].real()}, {"im", r.ctx[c].imag()}});
      }
      s["S"] = complex_json(r.S);
      s["abs_S"] = std::abs(r.S);
      s["ok"] = r.ok;
      j["states"].push_back(s);
    }
    j["ok"] = first_failure.empty();
    emit_json(out, j);
  }
  if (!first_failure.empty()) {
    err << "state " << first_failure << " does not give |S - 6| <= " << kStateTol << '\n';
    return kVerificationFailure;
  }
  return kOk;
}

// --- sample ---------------------------------------------------------------------

int cmd_sample(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.shots == 0) throw ConfigError("--shots must be at least 1");
  const sim::GridSpec grid = cfg.grid();
  const PreparedState prepared = prepare_state(cfg.state, grid);
  if (!std::holds_alternative<sim::WaveFunction>(prepared))
    throw ConfigError("sample needs a pure state; mixtures are not sampled");
  const sim::WaveFunction& psi = std::get<sim::WaveFunction>(prepared);

  struct Summary {
    ContextId ctx;
    Complex mean;
    double max_deviation = 0.0;
    std::array<double, 3> z{};
  };
  std::vector<Summary> summaries;
  std::ostringstream log;
  bool header = true;
  std::string first_failure;
  for (ContextId ctx : weyl::kAllContexts) {
    const auto shots = sim::measure_context(psi, ctx, cfg.shots, cfg.seed, {0, 1, 2}, cfg.workers);
    sim::write_shot_log_csv(log, shots, header);
    header = false;
    Summary s{ctx, {}, 0.0, {}};
    const double expected = weyl::sign(ctx);
    for (const auto& r : shots) {
      s.mean += r.product;
      s.max_deviation = std::max(s.max_deviation, std::abs(r.product - expected));
    }
    s.mean /= static_cast<double>(shots.size());
    const auto members = weyl::members(ctx);
    for (int m = 0; m < 3; ++m)
      s.z[m] = sim::compare_marginal(shots, m, sim::born_distribution(psi, members[m])).max_z;
    if (s.max_deviation > kShotTol && first_failure.empty()) first_failure = std::string(weyl::name(ctx));
    summaries.push_back(s);
  }
  write_file(cfg, "shots.csv", [&](std::ostream& os) { os << log.str(); });

  if (cfg.format == Format::csv) {
    csv_precision(out) << "context,expected,mean_re,mean_im,max_deviation,constant,z1,z2,z3\n";
    for (const auto& s : summaries)
      out << weyl::name(s.ctx) << ',' << weyl::sign(s.ctx) << ',' << s.mean.real() << ',' << s.mean.imag() << ','
          << s.max_deviation << ',' << (s.max_deviation <= kShotTol ? "true" : "false") << ',' << s.z[0] << ','
          << s.z[1] << ',' << s.z[2] << '\n';
  } else {
    ojson j;
    j["grid"] = grid_json(grid);
    j["shots"] = cfg.shots;
    j["seed"] = cfg.seed;
    j["contexts"] = ojson::array();
    for (const auto& s : summaries)
      j["contexts"].push_back({{"context", weyl::name(s.ctx)},
                               {"expected", weyl::sign(s.ctx)},
                               {"mean", complex_json(s.mean)},
                               {"max_deviation", s.max_deviation},
                               {"constant", s.max_deviation <= kShotTol},
                               {"marginal_max_z", s.z}});
    j["ok"] = first_failure.empty();
    emit_json(out, j);
  }
  if (!first_failure.empty()) {
    err << "context " << first_failure << " has a shot product off +-1 by more than " << kShotTol << '\n';
    return kVerificationFailure;
  }
  return kOk;
}

// --- eigenbasis -----------------------------------------------------------------

int cmd_eigenbasis(const RunConfig& cfg, const EigenbasisOptions& opt, std::ostream& out, std::ostream& err) {
  const sim::GridSpec grid = cfg.grid();
  try {
    appendix::require_compatible(grid);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  appendix::ModularEigenstateParams mp = appendix::default_modular_params(grid);
  appendix::VEigenstateParams vp = appendix::default_v_params(grid);
  if (cfg.state.value("family", "") == "modular_eigenstate") {
    mp.kappa = cfg.state.value("kappa", mp.kappa);
    mp.epsilon = cfg.state.value("epsilon", mp.epsilon);
    mp.v2 = cfg.state.value("v2", mp.v2);
  }
  if (opt.kappa) mp.kappa = *opt.kappa;
  if (opt.epsilon) mp.epsilon = *opt.epsilon;
  if (opt.v2) mp.v2 = vp.v2 = *opt.v2;
  if (opt.v1) vp.v1 = *opt.v1;

  appendix::Report rep = [&] {
    try {
      return appendix::verify(mp, vp, grid);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();
  const std::string failure = rep.first_failure(kEigenTol);
  const auto wrap = appendix::wrap_cycle(vp, grid);
  static constexpr const char* kReal[6] = {"C'", "C''", "c'", "c''", "gamma'", "gamma''"};

  if (cfg.format == Format::csv) {
    csv_precision(out) << "kind,name,analytic,numeric_or_residual\n";
    for (int k = 0; k < 6; ++k) out << "eigenvalue," << kReal[k] << ',' << rep.analytic[k] << ',' << rep.numeric[k] << '\n';
    for (const auto& [name, r] : rep.residuals) out << "residual," << name << ",," << r << '\n';
    for (const auto& c : rep.commutators)
      out << "commutator," << c.pair << ',' << weyl::to_string(c.phase_over_pi) << ',' << c.residual << '\n';
  } else {
    ojson j;
    j["grid"] = grid_json(grid);
    j["params"] = {{"kappa", mp.kappa}, {"epsilon", mp.epsilon}, {"v2", mp.v2}, {"v1", vp.v1}, {"v_state_v2", vp.v2}};
    ojson residuals = ojson::object();
    for (const auto& [name, r] : rep.residuals) residuals[name] = r;
    j["residuals"] = residuals;
    j["commutators"] = ojson::array();
    for (const auto& c : rep.commutators)
      j["commutators"].push_back({{"pair", c.pair},
                                  {"phase_over_pi", weyl::to_string(c.phase_over_pi)},
                                  {"phase_matches", c.phase_matches},
                                  {"residual", c.residual}});
    j["eigenvalues_analytic"] = rep.analytic;
    j["eigenvalues_numeric"] = rep.numeric;
    j["wrap_cycle"] = {{"length", wrap.length}, {"phase", complex_json(wrap.phase)}};
    j["ok"] = failure.empty();
    emit_json(out, j);
  }
  if (!failure.empty()) {
    err << "eigenbasis check failed: " << failure << '\n';
    return kVerificationFailure;
  }
  return kOk;
}

}  // namespace cvctx::cli
