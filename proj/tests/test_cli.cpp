#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cvctx/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::initializer_list<std::string> args) {
  std::vector<std::string> store{"cvctx"};
  store.insert(store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : store) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = cvctx::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cvctx_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

const double kBound = 3.0 * std::sqrt(3.0);

}  // namespace

TEST_CASE("cli_verify_algebra_default") {
  const auto r = run({"verify-algebra"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("ok") == true);
  CHECK(j.at("perturbed") == false);
  int zero = 0, pi = 0;
  for (const auto& c : j.at("contexts")) {
    zero += c.at("phase_over_pi") == "0";
    pi += c.at("phase_over_pi") == "1";
  }
  CHECK(zero == 5);
  CHECK(pi == 1);
}

TEST_CASE("cli_verify_algebra_perturbed_fails") {
  const auto r = run({"verify-algebra", "--perturb"});
  CHECK(r.code == 1);
  CHECK(r.err.find("identity failed") != std::string::npos);
}

TEST_CASE("cli_verify_algebra_csv_files") {
  const auto dir = fresh_dir("algebra");
  const auto r = run({"verify-algebra", "--out", dir.string(), "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto blocks = read_csv(slurp(dir / "context_blocks.csv"));
  REQUIRE(!blocks.empty());
  CHECK(blocks[0] == std::vector<std::string>{"context", "row", "col", "phase_over_pi"});
  std::map<std::string, int> per;
  for (std::size_t i = 1; i < blocks.size(); ++i) ++per[blocks[i][0]];
  CHECK(per.size() == 6);
  for (const auto& [ctx, n] : per) CHECK(n == 36);
  CHECK(read_csv(slurp(dir / "compatibility.csv")).size() == 82);
  const auto products = read_csv(r.out);
  CHECK(products.size() == 7);
}

TEST_CASE("cli_bound_report") {
  const auto dir = fresh_dir("bound");
  const auto r = run({"bound", "--samples", "1000000", "--seed", "4", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  const double max = j.at("max");
  CHECK(std::fabs(max - kBound) <= 1e-6);
  CHECK(j.at("argmax_objective").get<double>() == max);
  CHECK(j.at("argmax_equivalent") == true);
  CHECK(j.at("sample_max").get<double>() <= max);
  CHECK(j.at("n_samples") == 1000000);
  CHECK(j.at("seed") == 4);
  std::uint64_t total = 0;
  for (const auto& c : j.at("histogram").at("counts")) total += c.get<std::uint64_t>();
  CHECK(total == 1000000);
  CHECK(fs::exists(dir / "landscape.csv"));
  CHECK(fs::exists(dir / "histogram.csv"));
}

TEST_CASE("cli_violate_default_gaussian") {
  const auto r = run({"violate"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  REQUIRE(j.at("states").size() == 1);
  const auto& s = j.at("states")[0];
  CHECK(std::fabs(s.at("S").at("re").get<double>() - 6.0) <= 1e-9);
  CHECK(std::fabs(s.at("S").at("im").get<double>()) <= 1e-9);
}

TEST_CASE("cli_violate_sweep_csv") {
  const auto r = run({"violate", "--sweep", "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto rows = read_csv(r.out);
  REQUIRE(rows.size() == 9);
  const auto& header = rows[0];
  const auto col = [&header](const std::string& name) {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  };
  REQUIRE(col("Cc-gamma_re") < header.size());
  REQUIRE(col("abs_S") < header.size());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::fabs(std::stod(rows[i][col("Cc-gamma_re")]) + 1.0) <= 1e-9);
    CHECK(std::fabs(std::stod(rows[i][col("abs_S")]) - 6.0) <= 1e-9);
  }
}

TEST_CASE("cli_sample_single_shot_and_determinism") {
  const auto a = fresh_dir("sample_a"), b = fresh_dir("sample_b");
  const auto ra = run({"sample", "--shots", "1", "--seed", "3", "--out", a.string()});
  const auto rb = run({"sample", "--shots", "1", "--seed", "3", "--out", b.string()});
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  const auto log = read_csv(slurp(a / "shots.csv"));
  CHECK(log.size() == 7);
  CHECK(slurp(a / "shots.csv") == slurp(b / "shots.csv"));
  CHECK(ra.out == rb.out);
}

TEST_CASE("cli_sample_products_constant") {
  const auto r = run({"sample", "--shots", "200", "--state", R"({"family":"random","seed":5})"});
  REQUIRE(r.code == 0);
  for (const auto& c : json::parse(r.out).at("contexts")) {
    CHECK(c.at("constant") == true);
    CHECK(c.at("max_deviation").get<double>() <= 1e-9);
  }
}

TEST_CASE("cli_eigenbasis_zero_labels") {
  const auto r = run({"eigenbasis", "--kappa", "0", "--epsilon", "0", "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto rows = read_csv(r.out);
  std::vector<double> analytic;
  for (const auto& row : rows)
    if (!row.empty() && row[0] == "eigenvalue") analytic.push_back(std::stod(row[2]));
  CHECK(analytic == std::vector<double>{1, 0, 1, 0, -1, 0});
  for (const auto& row : rows)
    if (!row.empty() && row[0] == "residual") CHECK(std::stod(row[3]) <= 1e-8);
}

TEST_CASE("cli_eigenbasis_default_json") {
  const auto r = run({"eigenbasis"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("ok") == true);
  CHECK(j.at("residuals").at("displacement").get<double>() <= 1e-8);
  CHECK(j.at("grid").at("M") == 8);
  CHECK(j.at("grid").at("K") == 4);
}

TEST_CASE("cli_config_precedence") {
  const auto dir = fresh_dir("config");
  const auto cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"shots": 3, "seed": 11, "grid": {"M": 2, "K": 4}})";
  auto r = run({"sample", "--config", cfg.string()});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j.at("shots") == 3);
  CHECK(j.at("seed") == 11);
  CHECK(j.at("grid").at("M") == 2);
  r = run({"sample", "--config", cfg.string(), "--shots", "2", "--grid-M", "3"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j.at("shots") == 2);
  CHECK(j.at("seed") == 11);
  CHECK(j.at("grid").at("M") == 3);
  r = run({"sample", "--shots", "1"});
  j = json::parse(r.out);
  CHECK(j.at("seed") == 0);
  CHECK(j.at("grid").at("M") == 4);
}

TEST_CASE("cli_configuration_errors_exit_2") {
  const auto dir = fresh_dir("errors");
  std::ofstream(dir / "bad.json") << R"({"shots": 3, "colour": "red"})";
  const std::string mixture =
      R"({"family":"mixture","members":[{"weight":0.5,"state":{"family":"gaussian"}},{"weight":0.5,"state":{"family":"random"}}]})";
  CHECK(run({"violate", "--grid-N", "60"}).code == 2);
  CHECK(run({"violate", "--state", R"({"family":"squeezed"})"}).code == 2);
  CHECK(run({"violate", "--state", "{not json"}).code == 2);
  CHECK(run({"violate", "--no-such-flag"}).code == 2);
  CHECK(run({"sample", "--shots", "1", "--state", mixture}).code == 2);
  CHECK(run({"violate", "--config", (dir / "bad.json").string()}).code == 2);
  CHECK(run({"violate", "--config", (dir / "missing.json").string()}).code == 2);
  CHECK(run({"eigenbasis", "--grid-M", "4", "--grid-K", "8"}).code == 2);
  CHECK(run({"eigenbasis", "--kappa", "0.1"}).code == 2);
  CHECK(run({"violate", "--hbar", "-1"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"sample", "--shots", "0"}).code == 2);
}

TEST_CASE("cli_mixture_state_violates") {
  const auto r = run({"violate", "--state",
                      R"({"family":"mixture","members":[{"weight":0.25,"state":{"family":"gaussian"}},{"weight":0.75,"state":{"family":"random","seed":9}}]})"});
  REQUIRE(r.code == 0);
  CHECK(std::fabs(json::parse(r.out).at("states")[0].at("abs_S").get<double>() - 6.0) <= 1e-9);
}

TEST_CASE("cli_reruns_are_byte_identical") {
  const auto a = fresh_dir("rerun_a"), b = fresh_dir("rerun_b");
  const auto ba = run({"bound", "--samples", "1000", "--out", a.string()});
  const auto bb = run({"bound", "--samples", "1000", "--out", b.string()});
  CHECK(ba.code == 0);
  CHECK(ba.out == bb.out);
  CHECK(slurp(a / "landscape.csv") == slurp(b / "landscape.csv"));
  CHECK(slurp(a / "histogram.csv") == slurp(b / "histogram.csv"));
  const auto va = run({"violate", "--sweep", "--out", a.string()});
  const auto vb = run({"violate", "--sweep", "--out", b.string()});
  CHECK(va.out == vb.out);
  CHECK(slurp(a / "violate.csv") == slurp(b / "violate.csv"));
  CHECK(run({"eigenbasis"}).out == run({"eigenbasis"}).out);
}

TEST_CASE("cli_help_exits_zero") {
  const auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("verify-algebra") != std::string::npos);
}
