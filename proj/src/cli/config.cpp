#include <fstream>
#include <set>

#include "cvctx/appendix_basis.hpp"
#include "cvctx/cli.hpp"

namespace cvctx::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <typename T>
T get(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + std::string(key) + "' in " + where + ": " + e.what());
  }
}

sim::GaussianSpec gaussian_spec(const json& j, const sim::GaussianSpec& fallback, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  reject_unknown(j, {"family", "sigma", "center", "momentum"}, where);
  sim::GaussianSpec g = fallback;
  g.sigma = get(j, "sigma", g.sigma, where);
  g.center = get(j, "center", g.center, where);
  g.momentum = get(j, "momentum", g.momentum, where);
  return g;
}

}  // namespace

sim::GridSpec RunConfig::grid() const {
  if (N && *N != 2 * K * M)
    throw ConfigError("grid N must equal 2*K*M = " + std::to_string(2 * K * M) + ", got " + std::to_string(*N));
  try {
    return sim::GridSpec(M, K, units);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void apply_config(RunConfig& cfg, const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j, {"grid", "units", "state", "shots", "seed", "workers", "out", "format"}, "config");
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    reject_unknown(g, {"M", "K", "N"}, "config.grid");
    cfg.M = get(g, "M", cfg.M, "config.grid");
    cfg.K = get(g, "K", cfg.K, "config.grid");
    if (g.contains("N")) cfg.N = get(g, "N", 0, "config.grid");
  }
  if (j.contains("units")) {
    const json& u = j.at("units");
    reject_unknown(u, {"hbar", "p0"}, "config.units");
    cfg.units.hbar = get(u, "hbar", cfg.units.hbar, "config.units");
    cfg.units.p0 = get(u, "p0", cfg.units.p0, "config.units");
  }
  if (j.contains("state")) cfg.state = j.at("state");
  cfg.shots = get(j, "shots", cfg.shots, "config");
  cfg.seed = get(j, "seed", cfg.seed, "config");
  cfg.workers = get(j, "workers", cfg.workers, "config");
  cfg.out_dir = get(j, "out", cfg.out_dir, "config");
  if (j.contains("format")) {
    const auto f = get<std::string>(j, "format", "json", "config");
    if (f == "json") cfg.format = Format::json;
    else if (f == "csv") cfg.format = Format::csv;
    else throw ConfigError("format must be json or csv");
  }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  apply_config(cfg, j);
}

PreparedState prepare_state(const json& spec, const sim::GridSpec& grid) {
  if (!spec.is_object() || !spec.contains("family")) throw ConfigError("state spec needs a \"family\"");
  const std::string family = get<std::string>(spec, "family", "", "state");
  const std::string where = "state (" + family + ")";
  try {
    if (family == "gaussian") return sim::make_state(gaussian_spec(spec, {}, where), grid);
    if (family == "superposition") {
      reject_unknown(spec, {"family", "first", "second", "amplitude"}, where);
      sim::SuperpositionSpec s;
      if (spec.contains("first")) s.first = gaussian_spec(spec.at("first"), s.first, where + ".first");
      if (spec.contains("second")) s.second = gaussian_spec(spec.at("second"), s.second, where + ".second");
      const auto amp = get(spec, "amplitude", std::array<double, 2>{1.0, 0.0}, where);
      s.second_amplitude = {amp[0], amp[1]};
      return sim::make_state(s, grid);
    }
    if (family == "random") {
      reject_unknown(spec, {"family", "seed", "envelope_sigma"}, where);
      sim::RandomSpec r;
      r.seed = get(spec, "seed", r.seed, where);
      r.envelope_sigma = get(spec, "envelope_sigma", r.envelope_sigma, where);
      return sim::make_state(r, grid);
    }
    if (family == "modular_eigenstate") {
      reject_unknown(spec, {"family", "kappa", "epsilon", "v2"}, where);
      appendix::ModularEigenstateParams p;
      p.kappa = get(spec, "kappa", p.kappa, where);
      p.epsilon = get(spec, "epsilon", p.epsilon, where);
      p.v2 = get(spec, "v2", p.v2, where);
      return appendix::modular_eigenstate(p, grid);
    }
    if (family == "mixture") {
      reject_unknown(spec, {"family", "members"}, where);
      if (!spec.contains("members") || !spec.at("members").is_array())
        throw ConfigError("mixture needs a \"members\" array");
      std::vector<sim::Ensemble::Member> members;
      for (const json& m : spec.at("members")) {
        reject_unknown(m, {"weight", "state"}, where + ".members");
        if (!m.contains("state")) throw ConfigError("mixture member needs a \"state\"");
        auto inner = prepare_state(m.at("state"), grid);
        if (!std::holds_alternative<sim::WaveFunction>(inner))
          throw ConfigError("mixture members must be pure states");
        members.push_back({get(m, "weight", 0.0, where), std::get<sim::WaveFunction>(std::move(inner))});
      }
      return sim::Ensemble(std::move(members));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError("unknown state family '" + family + "'");
}

std::vector<std::pair<std::string, json>> sweep_states() {
  const json gaussian = {{"family", "gaussian"}, {"sigma", 1.0}};
  const json displaced = {{"family", "gaussian"}, {"sigma", 0.8}, {"center", {2.0, -1.5}}, {"momentum", {0.7, -0.4}}};
  const json cat = {{"family", "superposition"},
                    {"first", {{"sigma", 1.0}, {"center", {-2.0, 1.0}}}},
                    {"second", {{"sigma", 1.0}, {"center", {2.5, -1.0}}, {"momentum", {0.5, 0.0}}}},
                    {"amplitude", {0.0, 1.0}}};
  auto random = [](int seed) { return json{{"family", "random"}, {"seed", seed}}; };
  const json far = {{"family", "gaussian"}, {"sigma", 1.0}, {"center", {-4.0, 4.0}}};
  return {
      {"gaussian", gaussian},
      {"displaced-gaussian", displaced},
      {"superposition", cat},
      {"random-1", random(1)},
      {"random-2", random(2)},
      {"random-3", random(3)},
      {"mixture-gaussians", {{"family", "mixture"}, {"members", {{{"weight", 0.5}, {"state", gaussian}}, {{"weight", 0.5}, {"state", far}}}}}},
      {"mixture-three", {{"family", "mixture"},
                         {"members", {{{"weight", 0.2}, {"state", displaced}},
                                      {{"weight", 0.3}, {"state", random(2)}},
                                      {{"weight", 0.5}, {"state", cat}}}}}},
  };
}

}  // namespace cvctx::cli
