#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "cvctx/cv_sim.hpp"

namespace cvctx::sim {

namespace {

using weyl::Rational;

int integral(const Rational& r, const char* what) {
  if (!weyl::is_integer(r))
    throw std::invalid_argument(std::string("eigenphase of ") + what + " is off the grid's root-of-unity lattice");
  return static_cast<int>(r.numerator());
}

int mod(long long v, int N) {
  long long r = v % N;
  return static_cast<int>(r < 0 ? r + N : r);
}

std::vector<Complex> roots_of_unity(int N) {
  std::vector<Complex> w(N);
  for (int l = 0; l < N; ++l) w[l] = std::polar(1.0, 2.0 * std::numbers::pi * l / N);
  return w;
}

const std::vector<Complex>& roots(int N) {
  static std::mutex mutex;
  static std::map<int, std::vector<Complex>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(N);
  if (it == cache.end()) it = cache.emplace(N, roots_of_unity(N)).first;
  return it->second;
}

void multiply_by_labels(WaveFunction& psi, const std::vector<int>& labels, bool conjugate, Complex global) {
  const auto& w = roots(psi.grid().N());
  auto amps = psi.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const Complex f = conjugate ? std::conj(w[labels[i]]) : w[labels[i]];
    amps[i] *= f * global;
  }
}

}  // namespace

std::vector<int> eigenphase_labels(const weyl::LinearForm& generator, const GridSpec& grid,
                                   const Representation& rep) {
  if (!generator.is_action()) throw std::invalid_argument("generator must have units of action");
  if (!rep.valid()) throw std::invalid_argument("invalid representation");
  const auto& c = generator.coefficients();
  const int N = grid.N();
  const Rational M{grid.M()};
  const Rational K{grid.K()};

  // Per-index label steps: one x grid step advances p0 x / hbar by 2 pi M / N,
  // one p grid step advances pi p / p0 by 2 pi K / N.
  int step1 = 0;
  int step2 = 0;
  bool centered1 = false;  // axis carries the (j - N/2) position offset
  bool centered2 = false;

  if (!rep.sheared) {
    if (rep.axis1 == AxisBasis::position) {
      if (!weyl::is_zero(c[weyl::kP1])) throw std::invalid_argument("generator involves p1 but axis 1 is in position");
      step1 = integral(c[weyl::kX1] * M, "x1 term");
      centered1 = true;
    } else {
      if (!weyl::is_zero(c[weyl::kX1])) throw std::invalid_argument("generator involves x1 but axis 1 is in momentum");
      step1 = integral(c[weyl::kP1] * K, "p1 term");
    }
    if (rep.axis2 == AxisBasis::position) {
      if (!weyl::is_zero(c[weyl::kP2])) throw std::invalid_argument("generator involves p2 but axis 2 is in position");
      step2 = integral(c[weyl::kX2] * M, "x2 term");
      centered2 = true;
    } else {
      if (!weyl::is_zero(c[weyl::kX2])) throw std::invalid_argument("generator involves x2 but axis 2 is in momentum");
      step2 = integral(c[weyl::kP2] * K, "p2 term");
    }
  } else if (rep.axis1 == AxisBasis::position) {
    // (x1, u): a1 x1 + a2 x2 = (a1 + a2) x1 + a2 u
    if (!weyl::is_zero(c[weyl::kP1]) || !weyl::is_zero(c[weyl::kP2]))
      throw std::invalid_argument("generator involves momenta but representation is (x1,u)");
    step1 = integral((c[weyl::kX1] + c[weyl::kX2]) * M, "x1 term");
    centered1 = true;
    step2 = integral(c[weyl::kX2] * M, "u term");
  } else {
    // (p+, u): requires a1 = -a2 and b1 = b2; a1 x1 + a2 x2 = a2 u
    if (!weyl::is_zero(c[weyl::kX1] + c[weyl::kX2]) || c[weyl::kP1] != c[weyl::kP2])
      throw std::invalid_argument("generator is not a function of (p1+p2, x2-x1)");
    step1 = integral(c[weyl::kP1] * K, "p+ term");
    step2 = integral(c[weyl::kX2] * M, "u term");
  }

  std::vector<int> labels(grid.size());
  for (int j1 = 0; j1 < N; ++j1) {
    const long long i1 = centered1 ? j1 - N / 2 : j1;
    for (int j2 = 0; j2 < N; ++j2) {
      const long long i2 = centered2 ? j2 - N / 2 : j2;
      labels[static_cast<std::size_t>(j1) * N + j2] = mod(step1 * i1 + step2 * i2, N);
    }
  }
  return labels;
}

Representation diagonal_representation(ObservableId id) {
  switch (id) {
    case ObservableId::A:
    case ObservableId::a:
    case ObservableId::alpha: return Representation::x1x2();
    case ObservableId::B:
    case ObservableId::b:
    case ObservableId::beta: return Representation::p1p2();
    case ObservableId::C: return Representation::x1p2();
    case ObservableId::c: return Representation::p1x2();
    case ObservableId::gamma: return Representation::pplus_u();
  }
  throw std::invalid_argument("unknown observable id");
}

Representation diagonal_representation(const weyl::LinearForm& generator) {
  const auto& c = generator.coefficients();
  const bool x1 = !weyl::is_zero(c[weyl::kX1]), x2 = !weyl::is_zero(c[weyl::kX2]);
  const bool p1 = !weyl::is_zero(c[weyl::kP1]), p2 = !weyl::is_zero(c[weyl::kP2]);
  if (!p1 && !p2) return Representation::x1x2();
  if (!x1 && !x2) return Representation::p1p2();
  if (!p1 && !x2) return Representation::x1p2();
  if (!x1 && !p2) return Representation::p1x2();
  if (weyl::is_zero(c[weyl::kX1] + c[weyl::kX2]) && c[weyl::kP1] == c[weyl::kP2]) return Representation::pplus_u();
  throw std::invalid_argument("generator " + weyl::to_string(generator) +
                              " is not diagonal in any supported representation");
}

const std::vector<int>& observable_labels(ObservableId id, const GridSpec& grid) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, std::vector<int>> cache;
  const auto key = std::make_tuple(grid.M(), grid.K(), static_cast<int>(id));
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const weyl::WeylOp op = weyl::observable_table(grid.units())[id];
    it = cache.emplace(key, eigenphase_labels(op.generator(), grid, diagonal_representation(id))).first;
  }
  return it->second;
}

WaveFunction apply_weyl(const WaveFunction& psi, const weyl::WeylOp& op) {
  const Representation original = psi.representation();
  const Representation diag = diagonal_representation(op.generator());
  const auto labels = eigenphase_labels(op.generator(), psi.grid(), diag);
  WaveFunction out = transform(psi, diag);
  const Complex global =
      std::polar(1.0, std::numbers::pi * boost::rational_cast<double>(op.phase_over_pi()));
  multiply_by_labels(out, labels, false, global);
  out.change_representation(original);
  return out;
}

WaveFunction apply_complex_observable(const WaveFunction& psi, ObservableId id, bool adjoint) {
  const Representation original = psi.representation();
  WaveFunction out = transform(psi, diagonal_representation(id));
  multiply_by_labels(out, observable_labels(id, psi.grid()), adjoint, Complex{1.0, 0.0});
  out.change_representation(original);
  return out;
}

WaveFunction apply_real_observable(const WaveFunction& psi, ObservableId id, bool double_primed) {
  WaveFunction u = apply_complex_observable(psi, id, false);
  WaveFunction ud = apply_complex_observable(psi, id, true);
  if (double_primed) {
    ud *= Complex{-1.0, 0.0};
    u += ud;
    u *= Complex{0.0, -0.5};  // 1 / (2i)
  } else {
    u += ud;
    u *= Complex{0.5, 0.0};
  }
  return u;
}

namespace {

void require_normalized(const WaveFunction& psi) {
  if (!psi.normalized()) throw std::invalid_argument("state is not normalised");
}

}  // namespace

Complex expectation(const WaveFunction& psi, ContextId ctx) {
  require_normalized(psi);
  const auto m = weyl::members(ctx);
  WaveFunction phi = apply_complex_observable(psi, m[2]);
  phi = apply_complex_observable(phi, m[1]);
  phi = apply_complex_observable(phi, m[0]);
  return inner_product(psi, phi);
}

Complex expectation(const Ensemble& rho, ContextId ctx) {
  Complex s{};
  for (const auto& m : rho.members()) s += m.weight * expectation(m.state, ctx);
  return s;
}

Complex s_statistic(const WaveFunction& psi) {
  Complex s{};
  for (ContextId ctx : weyl::kAllContexts) s += static_cast<double>(weyl::sign(ctx)) * expectation(psi, ctx);
  return s;
}

Complex s_statistic(const Ensemble& rho) {
  Complex s{};
  for (ContextId ctx : weyl::kAllContexts) s += static_cast<double>(weyl::sign(ctx)) * expectation(rho, ctx);
  return s;
}

}  // namespace cvctx::sim
