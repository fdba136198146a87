#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "cvctx/cv_sim.hpp"
#include "cvctx/weyl_algebra.hpp"

using namespace cvctx;
using weyl::LinearForm;
using weyl::Monomial;
using weyl::ObservableId;
using weyl::Rational;
using weyl::WeylOp;

namespace {

const Monomial kZero = Monomial::rational(0);

// exp(-(i/hbar) r x1) with r = a p0, and exp(-(i/hbar) t p1) with t = b pi hbar / p0.
WeylOp position_kick(Rational a) { return WeylOp(LinearForm::action(-a, 0, 0, 0)); }
WeylOp momentum_kick(Rational b) { return WeylOp(LinearForm::action(0, 0, -b, 0)); }

Rational random_rational(std::mt19937_64& eng) {
  std::uniform_int_distribution<int> num(-12, 12);
  std::uniform_int_distribution<int> den(1, 6);
  return Rational{num(eng), den(eng)};
}

WeylOp random_op(std::mt19937_64& eng) {
  return WeylOp(LinearForm::action(random_rational(eng), random_rational(eng), random_rational(eng),
                                   random_rational(eng)),
                random_rational(eng));
}

}  // namespace

TEST_CASE("symplectic_commutator_canonical_pairs") {
  CHECK(weyl::symplectic_commutator(LinearForm::x1(), LinearForm::p1()) == Monomial::one());
  CHECK(weyl::symplectic_commutator(LinearForm::x2(), LinearForm::p2()) == Monomial::one());
  CHECK(weyl::symplectic_commutator(LinearForm::x1(), LinearForm::p2()) == kZero);
  CHECK(weyl::symplectic_commutator(LinearForm::p1(), LinearForm::x1()) == Monomial::rational(-1));
}

TEST_CASE("symplectic_commutator_relative_and_total") {
  const LinearForm rel = LinearForm::x1() - LinearForm::x2();
  const LinearForm tot = LinearForm::p1() + LinearForm::p2();
  CHECK(weyl::symplectic_commutator(rel, tot) == kZero);
}

TEST_CASE("linear_forms_with_different_units_do_not_add") {
  CHECK_THROWS_AS(LinearForm::x1() + LinearForm::p1(), std::invalid_argument);
  CHECK_NOTHROW(LinearForm::x1() + LinearForm::x2());
}

TEST_CASE("weyl_op_requires_action_generator") {
  CHECK_THROWS_AS(WeylOp(LinearForm::x1()), std::invalid_argument);
  CHECK_NOTHROW(WeylOp(LinearForm::x1().scaled(Monomial{1, 0, 0, 1})));
}

TEST_CASE("weyl_compose_two_pi_product_commutes") {
  for (auto [a, b] : {std::pair{Rational{1}, Rational{2}}, {Rational{2}, Rational{1}}, {Rational{1, 3}, Rational{6}}}) {
    const WeylOp u = position_kick(a), v = momentum_kick(b);
    CHECK(weyl::is_zero(weyl::commutator_phase(u, v)));
    CHECK(u * v == v * u);
  }
}

TEST_CASE("weyl_compose_pi_product_anticommutes") {
  const WeylOp u = position_kick(1), v = momentum_kick(1);
  CHECK(weyl::commutator_phase(u, v) == Rational{1});
  const WeylOp uv = u * v;
  const WeylOp vu = v * u;
  CHECK(uv.generator() == vu.generator());
  CHECK(uv.phase_over_pi() == weyl::reduce_phase(vu.phase_over_pi() + 1));
}

TEST_CASE("weyl_compose_identity_is_neutral") {
  std::mt19937_64 eng(11);
  for (int i = 0; i < 20; ++i) {
    const WeylOp v = random_op(eng);
    CHECK(WeylOp::identity() * v == v);
    CHECK(v * WeylOp::identity() == v);
  }
}

TEST_CASE("weyl_op_adjoint_inverts") {
  std::mt19937_64 eng(5);
  for (int i = 0; i < 20; ++i) {
    const WeylOp v = random_op(eng);
    CHECK(v * v.adjoint() == WeylOp::identity());
  }
}

TEST_CASE("commutator_phase_examples") {
  const auto t = weyl::observable_table();
  CHECK(weyl::is_zero(weyl::commutator_phase(t[ObservableId::C], t[ObservableId::c])));
  CHECK(weyl::is_zero(weyl::commutator_phase(t[ObservableId::A], t[ObservableId::B])));
  // exp(-(i/hbar) p0 x1) against exp(-(i/hbar) (pi hbar / p0) p1)
  CHECK(weyl::commutator_phase(position_kick(1), momentum_kick(1)) == Rational{1});
}

TEST_CASE("phase_is_reduced_to_zero_two") {
  CHECK(weyl::reduce_phase(Rational{5, 2}) == Rational{1, 2});
  CHECK(weyl::reduce_phase(Rational{-1, 3}) == Rational{5, 3});
  CHECK(weyl::reduce_phase(Rational{2}) == Rational{0});
  std::mt19937_64 eng(3);
  for (int i = 0; i < 50; ++i) {
    const Rational p = random_op(eng).phase_over_pi();
    CHECK(p >= Rational{0});
    CHECK(p < Rational{2});
  }
}

TEST_CASE("observable_table_generators") {
  const auto t = weyl::observable_table();
  const auto& A = t[ObservableId::A];
  CHECK(A.generator() == LinearForm::action(1, 0, 0, 0));
  CHECK(weyl::is_zero(A.phase_over_pi()));
  CHECK(t[ObservableId::c].generator() == LinearForm::action(0, 1, -1, 0));
  CHECK(t[ObservableId::C].generator() == LinearForm::action(-1, 0, 0, -1));
  CHECK(t[ObservableId::gamma].generator() == LinearForm::action(1, -1, 1, 1));
}

TEST_CASE("observable_table_is_linear_in_p0") {
  const auto one = weyl::observable_table({1.0, 1.0}).operator[](ObservableId::A).generator().physical({1.0, 1.0});
  const auto two = weyl::observable_table({1.0, 2.0}).operator[](ObservableId::A).generator().physical({1.0, 2.0});
  CHECK(two[weyl::kX1] == doctest::Approx(2.0 * one[weyl::kX1]));
  CHECK(two[weyl::kP1] == 0.0);
}

TEST_CASE("real_split_signs") {
  CHECK(weyl::real_split(ObservableId::C).imaginary_sign == -1);
  CHECK(weyl::real_split(ObservableId::a).imaginary_sign == -1);
  CHECK(weyl::real_split(ObservableId::beta).imaginary_sign == -1);
  CHECK(weyl::real_split(ObservableId::A).imaginary_sign == 1);
  CHECK(weyl::real_name(ObservableId::C, true) == "C''");
}

TEST_CASE("context_products_are_plus_minus_identity") {
  for (auto ctx : weyl::kAllContexts) {
    const WeylOp p = weyl::context_product(ctx);
    CHECK(p.is_scalar());
    if (ctx == weyl::ContextId::Cc_gamma) CHECK(p.phase_over_pi() == Rational{1});
    else CHECK(weyl::is_zero(p.phase_over_pi()));
  }
}

TEST_CASE("context_products_hold_for_other_units") {
  for (auto ctx : weyl::kAllContexts) {
    const auto cert = weyl::certify_contexts(weyl::observable_table({0.3, 7.0}))[static_cast<int>(ctx)];
    CHECK(cert.ok());
  }
}

TEST_CASE("compatibility_matrix_entries") {
  const auto m = weyl::compatibility_matrix();
  auto at = [&m](ObservableId r, ObservableId c) { return m[static_cast<int>(r)][static_cast<int>(c)]; };
  CHECK(weyl::is_zero(at(ObservableId::C, ObservableId::gamma)));
  CHECK(weyl::is_zero(at(ObservableId::A, ObservableId::a)));
  CHECK(at(ObservableId::A, ObservableId::b) == Rational{1});
}

TEST_CASE("compatibility_a_b_numerical_commutator") {
  // exact entry pi means A b = -b A; check on a small commensurate grid
  const sim::GridSpec grid(2, 2);
  const auto psi = sim::make_state(sim::RandomSpec{9, 1.5}, grid);
  const auto ab = sim::apply_complex_observable(sim::apply_complex_observable(psi, ObservableId::b), ObservableId::A);
  const auto ba = sim::apply_complex_observable(sim::apply_complex_observable(psi, ObservableId::A), ObservableId::b);
  const Rational delta = weyl::compatibility_matrix()[static_cast<int>(ObservableId::A)][static_cast<int>(ObservableId::b)];
  auto rotated = ba;
  rotated *= std::polar(1.0, M_PI * boost::rational_cast<double>(delta));
  CHECK(sim::distance(rotated, ab) <= 1e-12);
  CHECK(sim::distance(ba, ab) > 0.1);
}

TEST_CASE("property_compose_associative") {
  std::mt19937_64 eng(2024);
  for (int i = 0; i < 200; ++i) {
    const WeylOp u = random_op(eng), v = random_op(eng), w = random_op(eng);
    CHECK((u * v) * w == u * (v * w));
  }
}

TEST_CASE("property_commutator_phase_antisymmetric") {
  std::mt19937_64 eng(77);
  for (int i = 0; i < 200; ++i) {
    const WeylOp u = random_op(eng), v = random_op(eng);
    CHECK(weyl::reduce_phase(weyl::commutator_phase(u, v) + weyl::commutator_phase(v, u)) == Rational{0});
  }
}

TEST_CASE("property_commutator_phase_matches_products") {
  std::mt19937_64 eng(78);
  for (int i = 0; i < 200; ++i) {
    const WeylOp u = random_op(eng), v = random_op(eng);
    const WeylOp uv = u * v, vu = v * u;
    CHECK(uv.phase_over_pi() == weyl::reduce_phase(vu.phase_over_pi() + weyl::commutator_phase(u, v)));
  }
}

TEST_CASE("property_in_context_pairs_commute") {
  const auto t = weyl::observable_table();
  for (auto ctx : weyl::kAllContexts) {
    const auto m = weyl::members(ctx);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(weyl::is_zero(weyl::commutator_phase(t[m[i]], t[m[j]])));
  }
}

TEST_CASE("property_rt_scaling_keeps_phase") {
  std::mt19937_64 eng(9);
  for (int i = 0; i < 100; ++i) {
    Rational a = random_rational(eng), b = random_rational(eng), lambda = random_rational(eng);
    if (weyl::is_zero(lambda)) lambda = Rational{3, 2};
    const Rational before = weyl::commutator_phase(position_kick(a), momentum_kick(b));
    const Rational after = weyl::commutator_phase(position_kick(a * lambda), momentum_kick(b / lambda));
    CHECK(before == after);
  }
}

TEST_CASE("csv_compatibility_has_81_rows") {
  std::ostringstream os;
  weyl::write_compatibility_csv(os, weyl::compatibility_matrix());
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "row,col,phase_over_pi");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 81);
}

TEST_CASE("csv_context_blocks_36_rows_each_all_zero") {
  std::ostringstream os;
  weyl::write_context_blocks_csv(os, weyl::observable_table());
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  std::map<std::string, int> per_context;
  while (std::getline(is, line)) {
    const auto comma = line.find(',');
    ++per_context[line.substr(0, comma)];
    CHECK(line.substr(line.rfind(',') + 1) == "0");
  }
  CHECK(per_context.size() == 6);
  for (const auto& [ctx, n] : per_context) CHECK(n == 36);
}

TEST_CASE("names_round_trip") {
  for (auto id : weyl::kAllObservables) CHECK(weyl::parse_observable(weyl::name(id)) == id);
  for (auto ctx : weyl::kAllContexts) CHECK(weyl::parse_context(weyl::name(ctx)) == ctx);
  CHECK_THROWS_AS(weyl::parse_observable("delta"), std::invalid_argument);
}
