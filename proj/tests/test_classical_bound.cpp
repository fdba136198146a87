#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "cvctx/classical_bound.hpp"

using namespace cvctx;
using bound::Assignment;
using bound::Complex;
using bound::PhasePair;
using weyl::ObservableId;

namespace {

const double kPi = std::acos(-1.0);
const double kBound = 3.0 * std::sqrt(3.0);

Assignment all_ones() {
  std::array<Complex, weyl::kObservableCount> v;
  v.fill(Complex{1.0, 0.0});
  return Assignment(v);
}

Assignment random_assignment(std::mt19937_64& eng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  std::array<double, weyl::kObservableCount> ph{};
  for (auto& p : ph) p = u(eng);
  return Assignment::from_phases(ph);
}

Complex unit(std::mt19937_64& eng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  return std::polar(1.0, u(eng));
}

}  // namespace

TEST_CASE("s_value_all_ones") { CHECK(std::abs(bound::s_value(all_ones()) - Complex{4.0, 0.0}) < 1e-15); }

TEST_CASE("s_value_saturating_assignment") {
  CHECK(std::fabs(std::abs(bound::s_value(bound::saturating_assignment())) - kBound) <= 1e-12);
}

TEST_CASE("s_value_A_flipped") {
  const auto asg = all_ones().rotated(ObservableId::A, Complex{-1.0, 0.0});
  CHECK(std::abs(bound::s_value(asg)) <= 1e-15);
}

TEST_CASE("triangle_bound_examples") {
  CHECK(bound::triangle_bound(all_ones()) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(std::fabs(bound::triangle_bound(bound::saturating_assignment()) - kBound) <= 1e-12);
  std::mt19937_64 eng(1);
  const auto asg = random_assignment(eng);
  const double t = bound::triangle_bound(asg);
  CHECK(t >= std::abs(bound::s_value(asg)));
  CHECK(t <= 6.0);
}

TEST_CASE("trig_objective_examples") {
  CHECK(std::fabs(bound::trig_objective({0.0, 0.0}) - 4.0) <= 1e-15);
  CHECK(std::fabs(bound::trig_objective({kPi / 3, kPi / 3}) - kBound) <= 1e-14);
  CHECK(std::fabs(bound::trig_objective({kPi, kPi})) <= 1e-15);
}

TEST_CASE("maximize_objective_default") {
  const auto opt = bound::maximize_objective(0.01, 1e-10);
  CHECK(std::fabs(opt.max - kBound) <= 1e-8);
  CHECK(bound::equivalent_to_known_argmax(opt.argmax, 1e-4));
  CHECK(opt.max >= opt.grid_max);
  CHECK(bound::trig_objective(opt.argmax) == opt.max);
}

TEST_CASE("maximize_objective_coarse_seed") {
  const auto opt = bound::maximize_objective(0.5, 1e-6);
  CHECK(std::fabs(opt.max - kBound) <= 1e-5);
  CHECK(opt.max >= opt.grid_max);
}

TEST_CASE("maximize_objective_rejects_bad_arguments") {
  CHECK_THROWS_AS(bound::maximize_objective(0.0, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(bound::maximize_objective(0.1, -1.0), std::invalid_argument);
}

TEST_CASE("argmax_set_matches_brute_force_scan") {
  // every near-maximal point of a fine independent scan lies next to
  // (pi/3, pi/3) or (5pi/3, 5pi/3)
  const int n = 720;
  const double h = 2.0 * kPi / n;
  double best = 0.0;
  std::vector<PhasePair> pts;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const PhasePair p{i * h, j * h};
      const double v = 2.0 * (std::fabs(std::cos(p.phi1 / 2)) + std::fabs(std::cos(p.phi2 / 2)) +
                              std::fabs(std::sin((p.phi1 + p.phi2) / 2)));
      best = std::max(best, v);
      if (v > kBound - 1e-3) pts.push_back(p);
    }
  CHECK(best <= kBound + 1e-12);
  REQUIRE(!pts.empty());
  for (const auto& p : pts) CHECK(bound::equivalent_to_known_argmax(p, 0.1));
  CHECK(bound::equivalent_to_known_argmax({5 * kPi / 3, 5 * kPi / 3}, 1e-12));
  CHECK(!bound::equivalent_to_known_argmax({kPi / 3, 5 * kPi / 3}, 1e-3));
}

TEST_CASE("saturating_assignment_components") {
  const auto asg = bound::saturating_assignment();
  for (auto v : asg.values()) CHECK(std::fabs(std::abs(v) - 1.0) <= 1e-12);
  CHECK(asg[ObservableId::B].real() == 1.0);
  CHECK(asg[ObservableId::B].imag() == 0.0);
  const double h = std::sqrt(3.0) / 2;
  const std::array<Complex, weyl::kObservableCount> expected{
      Complex{h, -0.5}, Complex{1, 0}, Complex{0.5, h}, Complex{1, 0}, Complex{h, -0.5},
      Complex{0.5, h},  Complex{1, 0}, Complex{1, 0},   Complex{h, 0.5}};
  for (auto id : weyl::kAllObservables) {
    INFO(weyl::name(id));
    CHECK(std::abs(asg[id] - expected[static_cast<int>(id)]) <= 1e-15);
  }
}

TEST_CASE("assignment_rejects_non_unit_values") {
  auto v = all_ones().values();
  v[3] = Complex{1.0 + 1e-9, 0.0};
  CHECK_THROWS_AS(Assignment{v}, std::invalid_argument);
  CHECK_THROWS_AS(all_ones().rotated(ObservableId::b, Complex{0.5, 0.0}), std::invalid_argument);
}

TEST_CASE("sample_models_errors_and_determinism") {
  CHECK_THROWS_AS(bound::sample_models(0, 1), std::invalid_argument);
  const auto a = bound::sample_models(1, 42);
  const auto b = bound::sample_models(1, 42);
  CHECK(a.max_observed == b.max_observed);
  CHECK(a.histogram == b.histogram);
}

TEST_CASE("sample_models_million") {
  const auto s = bound::sample_models(1000000, 7, 1);
  CHECK(s.max_observed <= kBound + 1e-9);
  CHECK(s.max_observed >= 5.1);
  CHECK(std::accumulate(s.histogram.begin(), s.histogram.end(), std::uint64_t{0}) == 1000000);
}

TEST_CASE("sample_models_reproducible_per_worker_count") {
  const auto a = bound::sample_models(20000, 3, 4);
  const auto b = bound::sample_models(20000, 3, 4);
  CHECK(a.max_observed == b.max_observed);
  CHECK(a.histogram == b.histogram);
  CHECK(std::accumulate(a.histogram.begin(), a.histogram.end(), std::uint64_t{0}) == 20000);
}

TEST_CASE("histogram_bin_edges") {
  CHECK(bound::histogram_bin(0.0) == 0);
  CHECK(bound::histogram_bin(6.0) == bound::kHistogramBins - 1);
  CHECK(bound::histogram_bin(7.0) == bound::kHistogramBins - 1);
  CHECK(bound::histogram_bin(3.0) == bound::kHistogramBins / 2);
}

TEST_CASE("landscape_csv_rows") {
  std::ostringstream os;
  bound::write_landscape_csv(os, 2.0 * kPi / 10);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "phi1,phi2,objective");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 100);
}

TEST_CASE("property_s_le_triangle_le_bound") {
  std::mt19937_64 eng(101);
  for (int i = 0; i < 20000; ++i) {
    const auto asg = random_assignment(eng);
    const double s = std::abs(bound::s_value(asg));
    const double t = bound::triangle_bound(asg);
    CHECK(s <= t + 1e-12);
    CHECK(t <= kBound + 1e-9);
  }
}

TEST_CASE("property_triangle_independent_of_A_b_gamma") {
  std::mt19937_64 eng(102);
  for (int i = 0; i < 2000; ++i) {
    const auto asg = random_assignment(eng);
    const auto moved = asg.rotated(ObservableId::A, unit(eng))
                           .rotated(ObservableId::b, unit(eng))
                           .rotated(ObservableId::gamma, unit(eng));
    CHECK(std::fabs(bound::triangle_bound(asg) - bound::triangle_bound(moved)) <= 1e-12);
  }
}

TEST_CASE("property_triangle_equals_objective_at_phases") {
  std::mt19937_64 eng(103);
  for (int i = 0; i < 2000; ++i) {
    const auto asg = random_assignment(eng);
    CHECK(std::fabs(bound::triangle_bound(asg) - bound::trig_objective(bound::phases_of(asg))) <= 1e-10);
  }
}

TEST_CASE("property_objective_symmetries") {
  std::mt19937_64 eng(104);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = u(eng), b = u(eng);
    const double v = bound::trig_objective({a, b});
    CHECK(std::fabs(v - bound::trig_objective({b, a})) <= 1e-12);
    CHECK(std::fabs(v - bound::trig_objective({-a, -b})) <= 1e-12);
    const auto r = PhasePair::reduced(a, b);
    CHECK(r.phi1 >= 0.0);
    CHECK(r.phi1 < 2 * kPi);
    CHECK(std::fabs(v - bound::trig_objective(r)) <= 1e-12);
  }
}
