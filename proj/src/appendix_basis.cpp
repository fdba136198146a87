#include "cvctx/appendix_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cvctx::appendix {

namespace {

using weyl::LinearForm;
using weyl::Monomial;
using weyl::Rational;
using weyl::WeylOp;

constexpr double kLatticeTol = 1e-9;

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

int mod(long long v, int N) {
  long long r = v % N;
  return static_cast<int>(r < 0 ? r + N : r);
}

long long lattice_index(double value, double spacing, const char* what) {
  const double x = value / spacing;
  const double r = std::round(x);
  if (!std::isfinite(x) || std::abs(x - r) > kLatticeTol * std::max(1.0, std::abs(x)))
    throw std::invalid_argument(std::string(what) + " is not on the grid's label lattice");
  return static_cast<long long>(r);
}

// Exact label of <x1, x2 | v1, v2> at centred indices i1, i2: the wavefunction
// is exp(2 pi i label / N) / N.
int v_label(long long n1, long long n2, long long i1, long long i2, const GridSpec& grid) {
  const long long ratio = grid.M() / grid.K();
  return mod(n2 * i1 + n1 * i2 - ratio * i1 * i2, grid.N());
}

WaveFunction v_state_unreduced(long long n1, long long n2, const GridSpec& grid) {
  require_compatible(grid);
  const int N = grid.N();
  const double amp = 1.0 / N;
  std::vector<Complex> amps(grid.size());
  for (int j1 = 0; j1 < N; ++j1)
    for (int j2 = 0; j2 < N; ++j2) {
      const int l = v_label(n1, n2, j1 - N / 2, j2 - N / 2, grid);
      amps[static_cast<std::size_t>(j1) * N + j2] = std::polar(amp, 2.0 * std::numbers::pi * l / N);
    }
  return WaveFunction(grid, sim::Representation::x1x2(), std::move(amps));
}

WaveFunction modular_state(const ModularIndex& idx, const GridSpec& grid) {
  require_compatible(grid);
  const int N = grid.N();
  const int K = grid.K();
  const int M = grid.M();
  const double amp = 1.0 / (N * std::sqrt(static_cast<double>(K)));
  std::vector<Complex> amps(grid.size());
  for (int j1 = 0; j1 < N; ++j1)
    for (int j2 = 0; j2 < N; ++j2) {
      Complex s{};
      for (int n = 0; n < K; ++n) {
        const int l = v_label(idx.e + 2LL * M * n, idx.n2, j1 - N / 2, j2 - N / 2, grid);
        s += std::polar(1.0, 2.0 * std::numbers::pi * (static_cast<double>(l) / N +
                                                        static_cast<double>((idx.q * n) % K) / K));
      }
      amps[static_cast<std::size_t>(j1) * N + j2] = amp * s;
    }
  return WaveFunction(grid, sim::Representation::x1x2(), std::move(amps));
}

double residual(const WaveFunction& applied, Complex lambda, const WaveFunction& psi) {
  WaveFunction expected = psi;
  expected *= lambda;
  return sim::distance(expected, applied);
}

std::pair<long long, long long> v_indices_unreduced(const VEigenstateParams& p, const GridSpec& grid) {
  const double dv = v_spacing(grid);
  return {lattice_index(p.v1, dv, "v1"), lattice_index(p.v2, dv, "v2")};
}

WeylOp v_exponential(const LinearForm& V, Rational s_over_p0) {
  // exp(-i s V / hbar) with s = s_over_p0 * p0; V carries scale 1/p0.
  return WeylOp(V.scaled(Monomial{-s_over_p0, 0, 0, 1}));
}

WeylOp w_exponential(const LinearForm& W, Rational t_over_unit) {
  // exp(-i t W / hbar) with t = t_over_unit * 2 pi hbar / p0; W carries scale p0 / (pi hbar).
  return WeylOp(W.scaled(Monomial{-2 * t_over_unit, 1, 1, -1}));
}

}  // namespace

VWSet vw_set() {
  const Monomial length_ratio{1, 1, 1, -2};        // pi hbar / p0^2
  const Monomial momentum_ratio{Rational{-1, 2}, -1, -1, 2};  // -p0^2 / (2 pi hbar)
  const Rational half{1, 2};
  VWSet s;
  s.V1 = LinearForm::x1() + LinearForm::p2().scaled(length_ratio);
  s.V2 = LinearForm::x2() + LinearForm::p1().scaled(length_ratio);
  s.W1 = LinearForm::x2().scaled(momentum_ratio) + LinearForm::p1().scaled(half);
  s.W2 = LinearForm::x1().scaled(momentum_ratio) + LinearForm::p2().scaled(half);
  return s;
}

void require_compatible(const GridSpec& grid) {
  if (grid.M() % grid.K() != 0)
    throw std::invalid_argument("eigenbasis grid needs K to divide M (got M=" + std::to_string(grid.M()) +
                                ", K=" + std::to_string(grid.K()) + ")");
}

double v_spacing(const GridSpec& grid) { return grid.units().p0 / (grid.M() * grid.units().hbar); }

VIndex index_of(const VEigenstateParams& p, const GridSpec& grid) {
  const auto [n1, n2] = v_indices_unreduced(p, grid);
  return {mod(n1, grid.N()), mod(n2, grid.N())};
}

ModularIndex index_of(const ModularEigenstateParams& p, const GridSpec& grid) {
  const long long q = lattice_index(p.kappa, 2.0 * std::numbers::pi / grid.K(), "kappa");
  if (q < 0 || q >= grid.K()) throw std::invalid_argument("kappa must lie in [0, 2 pi)");
  const long long e = lattice_index(p.epsilon, v_spacing(grid), "epsilon");
  if (e < 0 || e >= 2LL * grid.M()) throw std::invalid_argument("epsilon must lie in [0, 2 p0 / hbar)");
  const long long n2 = lattice_index(p.v2, v_spacing(grid), "v2");
  return {static_cast<int>(q), static_cast<int>(e), mod(n2, grid.N())};
}

VEigenstateParams params_of(const VIndex& i, const GridSpec& grid) {
  return {i.n1 * v_spacing(grid), i.n2 * v_spacing(grid)};
}

ModularEigenstateParams params_of(const ModularIndex& i, const GridSpec& grid) {
  return {2.0 * std::numbers::pi * i.q / grid.K(), i.e * v_spacing(grid), i.n2 * v_spacing(grid)};
}

WaveFunction v_eigenstate(const VEigenstateParams& p, const GridSpec& grid) {
  require_compatible(grid);
  const auto [n1, n2] = v_indices_unreduced(p, grid);
  return v_state_unreduced(n1, n2, grid);
}

WaveFunction modular_eigenstate(const ModularEigenstateParams& p, const GridSpec& grid) {
  require_compatible(grid);
  return modular_state(index_of(p, grid), grid);
}

Complex displacement_phase(const VEigenstateParams& p, const weyl::UnitSystem& units) {
  return std::polar(1.0, -std::numbers::pi * units.hbar * p.v2 / units.p0);
}

ModularEigenvalues eigenvalues(const ModularEigenstateParams& p, const weyl::UnitSystem& units) {
  const double theta = std::numbers::pi * units.hbar * p.epsilon / units.p0;
  const Complex shift = displacement_phase({0.0, p.v2}, units);
  ModularEigenvalues ev;
  ev.C = std::polar(1.0, -theta);
  ev.c = shift * std::polar(1.0, -p.kappa);
  ev.gamma = -1.0 / (ev.C * ev.c);
  return ev;
}

std::array<double, 6> real_observable_eigenvalues(const ModularEigenstateParams& p,
                                                  const weyl::UnitSystem& units) {
  const auto ev = eigenvalues(p, units);
  // + 0.0 turns -0 into 0 for printing
  return {ev.C.real() + 0.0, ev.C.imag() + 0.0, ev.c.real() + 0.0,
          ev.c.imag() + 0.0, ev.gamma.real() + 0.0, ev.gamma.imag() + 0.0};
}

double displacement_check(const VEigenstateParams& p, const GridSpec& grid) {
  require_compatible(grid);
  const auto [n1, n2] = v_indices_unreduced(p, grid);
  const WaveFunction lhs = sim::apply_complex_observable(v_state_unreduced(n1, n2, grid), ObservableId::c);
  WaveFunction rhs = v_state_unreduced(n1 + 2LL * grid.M(), n2, grid);
  rhs *= displacement_phase(p, grid.units());
  return sim::distance(rhs, lhs);
}

double displacement_check(const ModularEigenstateParams& p, const GridSpec& grid) {
  const WaveFunction psi = modular_eigenstate(p, grid);
  return residual(sim::apply_complex_observable(psi, ObservableId::c), eigenvalues(p, grid.units()).c, psi);
}

WrapCycle wrap_cycle(const VEigenstateParams& p, const GridSpec& grid) {
  const WaveFunction start = v_eigenstate(p, grid);
  WaveFunction psi = start;
  for (int n = 0; n < grid.K(); ++n) psi = sim::apply_complex_observable(psi, ObservableId::c);
  WrapCycle out;
  out.length = grid.K();
  out.phase = sim::inner_product(start, psi);
  out.residual = residual(psi, out.phase, start);
  return out;
}

double v_eigenvalue_residual(const VEigenstateParams& p, const GridSpec& grid) {
  const WaveFunction psi = v_eigenstate(p, grid);
  const auto vw = vw_set();
  const auto& u = grid.units();
  double worst = 0.0;
  for (const Rational s : {Rational{1, grid.K()}, Rational{1}}) {
    const double s_phys = boost::rational_cast<double>(s) * u.p0;
    for (int j = 0; j < 2; ++j) {
      const LinearForm& V = j == 0 ? vw.V1 : vw.V2;
      const double v = j == 0 ? p.v1 : p.v2;
      const double lambda = std::numbers::pi * u.hbar * u.hbar * v / (u.p0 * u.p0);
      const Complex expected = std::polar(1.0, -s_phys * lambda / u.hbar);
      worst = std::max(worst, residual(sim::apply_weyl(psi, v_exponential(V, s)), expected, psi));
    }
  }
  return worst;
}

std::vector<CommutatorCheck> vw_commutator_checks(const GridSpec& grid, std::uint64_t seed) {
  require_compatible(grid);
  const auto vw = vw_set();
  const Rational s{1, grid.K()};  // s = p0 / K
  const Rational t{1, grid.K()};  // t = 2 pi hbar / (K p0)
  // [X, Y] = -i s t delta_jk / hbar = -i 2 pi delta_jk / K^2 for matched V_j, W_k
  const Rational matched = weyl::reduce_phase(Rational{-2, grid.K() * grid.K()});

  struct Pair {
    const char* name;
    WeylOp u, v;
    Rational expected;
  };
  const std::vector<Pair> pairs{
      {"V1,W1", v_exponential(vw.V1, s), w_exponential(vw.W1, t), matched},
      {"V2,W2", v_exponential(vw.V2, s), w_exponential(vw.W2, t), matched},
      {"V1,W2", v_exponential(vw.V1, s), w_exponential(vw.W2, t), Rational{0}},
      {"V2,W1", v_exponential(vw.V2, s), w_exponential(vw.W1, t), Rational{0}},
      {"V1,V2", v_exponential(vw.V1, s), v_exponential(vw.V2, s), Rational{0}},
      {"W1,W2", w_exponential(vw.W1, t), w_exponential(vw.W2, t), Rational{0}},
  };

  const WaveFunction psi = sim::make_state(sim::RandomSpec{seed, 3.0}, grid);
  std::vector<CommutatorCheck> out;
  for (const auto& pr : pairs) {
    CommutatorCheck c;
    c.pair = pr.name;
    c.phase_over_pi = weyl::commutator_phase(pr.u, pr.v);
    c.phase_matches = c.phase_over_pi == pr.expected;
    const WaveFunction uv = sim::apply_weyl(sim::apply_weyl(psi, pr.v), pr.u);
    const WaveFunction vu = sim::apply_weyl(sim::apply_weyl(psi, pr.u), pr.v);
    const Complex phase = std::polar(1.0, std::numbers::pi * boost::rational_cast<double>(c.phase_over_pi));
    c.residual = residual(uv, phase, vu);
    out.push_back(c);
  }
  return out;
}

std::pair<int, double> integer_part(const VEigenstateParams& p, const GridSpec& grid) {
  const auto [n1, n2] = v_indices_unreduced(p, grid);
  (void)n2;
  const long long m = floor_div(n1, 2LL * grid.M());
  const long long e = n1 - 2LL * grid.M() * m;
  return {static_cast<int>(m), e * v_spacing(grid)};
}

WaveFunction reconstruct_v(const VEigenstateParams& p, const GridSpec& grid) {
  require_compatible(grid);
  const auto [m, epsilon] = integer_part(p, grid);
  const int K = grid.K();
  std::vector<Complex> zeros(grid.size());
  WaveFunction sum(grid, sim::Representation::x1x2(), std::move(zeros));
  for (int q = 0; q < K; ++q) {
    const double kappa = 2.0 * std::numbers::pi * q / K;
    WaveFunction term = modular_eigenstate({kappa, epsilon, p.v2}, grid);
    const int reduced = static_cast<int>(((static_cast<long long>(q) * m) % K + K) % K);
    term *= std::polar(1.0 / std::sqrt(static_cast<double>(K)), -2.0 * std::numbers::pi * reduced / K);
    sum += term;
  }
  return sum;
}

double gram_deviation(const std::vector<ModularIndex>& labels, const GridSpec& grid) {
  std::vector<WaveFunction> states;
  states.reserve(labels.size());
  for (const auto& l : labels) states.push_back(modular_state(l, grid));
  double worst = 0.0;
  for (std::size_t a = 0; a < states.size(); ++a) {
    const auto x = states[a].amplitudes();
    for (std::size_t b = a; b < states.size(); ++b) {
      const auto y = states[b].amplitudes();
      Complex dot{};
      for (std::size_t i = 0; i < x.size(); ++i) dot += std::conj(x[i]) * y[i];
      worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
    }
  }
  return worst;
}

std::string Report::first_failure(double tol) const {
  for (const auto& [name, r] : residuals)
    if (!(r <= tol)) return name;
  for (const auto& c : commutators) {
    if (!c.phase_matches) return "commutator phase " + c.pair;
    if (!(c.residual <= tol)) return "commutator " + c.pair;
  }
  return {};
}

Report verify(const ModularEigenstateParams& modular, const VEigenstateParams& v, const GridSpec& grid) {
  require_compatible(grid);
  const ModularIndex mi = index_of(modular, grid);
  const VIndex vi = index_of(v, grid);
  Report rep{grid, modular, v, {}, {}, {}, {}};
  auto add = [&rep](std::string name, double r) { rep.residuals.emplace_back(std::move(name), r); };
  const auto& units = grid.units();

  // |v1, v2>
  add("v_eigenvalue", v_eigenvalue_residual(v, grid));
  {
    const WaveFunction a = v_eigenstate(v, grid);
    const WaveFunction b = v_eigenstate(params_of(VIndex{(vi.n1 + 1) % grid.N(), vi.n2}, grid), grid);
    const WaveFunction c = v_eigenstate(params_of(VIndex{vi.n1, (vi.n2 + 1) % grid.N()}, grid), grid);
    add("v_orthogonality", std::max(std::abs(sim::inner_product(a, b)), std::abs(sim::inner_product(a, c))));
  }
  add("displacement", displacement_check(v, grid));
  {
    const auto [n1, n2] = v_indices_unreduced(v, grid);
    const WaveFunction lhs =
        sim::apply_complex_observable(v_state_unreduced(n1, n2, grid), ObservableId::c, true);
    WaveFunction rhs = v_state_unreduced(n1 - 2LL * grid.M(), n2, grid);
    rhs *= std::conj(displacement_phase(v, units));
    add("displacement_adjoint", sim::distance(rhs, lhs));
  }
  add("wrap_cycle", wrap_cycle(v, grid).residual);

  // |kappa, epsilon, v2>
  const WaveFunction psi = modular_state(mi, grid);
  const ModularEigenvalues ev = eigenvalues(modular, units);
  add("eigen_C", residual(sim::apply_complex_observable(psi, ObservableId::C), ev.C, psi));
  add("eigen_c", residual(sim::apply_complex_observable(psi, ObservableId::c), ev.c, psi));
  add("eigen_gamma", residual(sim::apply_complex_observable(psi, ObservableId::gamma), ev.gamma, psi));
  add("gamma_C_c_product", std::abs(ev.gamma * ev.C * ev.c + 1.0));

  rep.analytic = real_observable_eigenvalues(modular, units);
  constexpr std::array<ObservableId, 3> ids{ObservableId::C, ObservableId::c, ObservableId::gamma};
  for (int k = 0; k < 6; ++k) {
    const ObservableId id = ids[k / 2];
    const bool dp = k % 2 == 1;
    const WaveFunction applied = sim::apply_real_observable(psi, id, dp);
    rep.numeric[k] = sim::inner_product(psi, applied).real();
    add("eigen_" + weyl::real_name(id, dp), residual(applied, rep.analytic[k], psi));
  }
  {
    double worst = 0.0;
    const ModularIndex others[] = {{(mi.q + 1) % grid.K(), mi.e, mi.n2},
                                   {mi.q, (mi.e + 1) % (2 * grid.M()), mi.n2},
                                   {mi.q, mi.e, (mi.n2 + 1) % grid.N()}};
    for (const auto& o : others) worst = std::max(worst, std::abs(sim::inner_product(psi, modular_state(o, grid))));
    add("modular_orthogonality", worst);
  }
  {
    // every (kappa, epsilon) at three neighbouring v2 values
    std::vector<ModularIndex> subset;
    for (int q = 0; q < grid.K(); ++q)
      for (int e = 0; e < 2 * grid.M(); ++e)
        for (int dn : {0, 1, grid.N() - 1}) subset.push_back({q, e, (mi.n2 + dn) % grid.N()});
    add("gram_subset", gram_deviation(subset, grid));
  }

  add("reconstruction", sim::distance(v_eigenstate(v, grid), reconstruct_v(v, grid)));
  rep.commutators = vw_commutator_checks(grid);
  return rep;
}

ModularEigenstateParams default_modular_params(const GridSpec& grid) {
  return params_of(ModularIndex{1 % grid.K(), 3 % (2 * grid.M()), 0}, grid);
}

VEigenstateParams default_v_params(const GridSpec& grid) {
  return params_of(VIndex{(4 * grid.M() + 5) % grid.N(), 5 % grid.N()}, grid);
}

}  // namespace cvctx::appendix
