#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cvctx/cv_sim.hpp"
#include "fft.hpp"

namespace cvctx::sim {

GridSpec::GridSpec(int M, int K, weyl::UnitSystem units) : M_(M), K_(K), N_(2 * K * M), units_(units) {
  if (M < 1 || K < 1) throw std::invalid_argument("grid multiples M and K must be >= 1");
  if (M > 4096 || K > 4096) throw std::invalid_argument("grid multiples too large");
  units_.validate();
}

GridSpec GridSpec::with_points(int M, int K, int N, weyl::UnitSystem units) {
  GridSpec g(M, K, units);
  if (g.N() != N)
    throw std::invalid_argument("grid is not commensurate: N must equal 2*K*M = " + std::to_string(g.N()));
  return g;
}

double GridSpec::box_length() const { return 2.0 * std::numbers::pi * M_ * units_.hbar / units_.p0; }
double GridSpec::dx() const { return std::numbers::pi * units_.hbar / (K_ * units_.p0); }
double GridSpec::dp() const { return units_.p0 / M_; }

std::string Representation::name() const {
  if (sheared) return axis1 == AxisBasis::position ? "(x1,u)" : "(p+,u)";
  std::string out = "(";
  out += axis1 == AxisBasis::position ? "x1" : "p1";
  out += ',';
  out += axis2 == AxisBasis::position ? "x2" : "p2";
  return out + ")";
}

WaveFunction::WaveFunction(GridSpec grid, Representation rep, std::vector<Complex> amplitudes)
    : grid_(grid), rep_(rep), amps_(std::move(amplitudes)) {
  if (!rep_.valid()) throw std::invalid_argument("invalid representation " + rep_.name());
  if (amps_.size() != grid_.size()) throw std::invalid_argument("amplitude count does not match grid");
}

double WaveFunction::norm_squared() const {
  double s = 0.0;
  for (const auto& z : amps_) s += std::norm(z);
  return s;
}

bool WaveFunction::normalized(double tol) const { return std::fabs(norm_squared() - 1.0) <= tol; }

void WaveFunction::normalize() {
  const double n2 = norm_squared();
  if (!(n2 > 0.0)) throw std::domain_error("cannot normalise the zero vector");
  *this *= Complex{1.0 / std::sqrt(n2), 0.0};
}

WaveFunction& WaveFunction::operator*=(Complex s) {
  for (auto& z : amps_) z *= s;
  return *this;
}

WaveFunction& WaveFunction::operator+=(const WaveFunction& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("grid mismatch");
  if (!(rep_ == other.rep_)) throw std::invalid_argument("representation mismatch");
  for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] += other.amps_[i];
  return *this;
}

namespace {

using detail::FftAxis;
using detail::FftDirection;

void shear(std::vector<Complex>& a, int N) {
  std::vector<Complex> out(a.size());
  for (int j1 = 0; j1 < N; ++j1)
    for (int ju = 0; ju < N; ++ju) out[j1 * N + ju] = a[j1 * N + (j1 + ju) % N];
  a.swap(out);
}

void unshear(std::vector<Complex>& a, int N) {
  std::vector<Complex> out(a.size());
  for (int j1 = 0; j1 < N; ++j1)
    for (int ju = 0; ju < N; ++ju) out[j1 * N + (j1 + ju) % N] = a[j1 * N + ju];
  a.swap(out);
}

void set_axis(std::vector<Complex>& a, int N, FftAxis axis, AxisBasis& current, AxisBasis target) {
  if (current == target) return;
  detail::axis_fft(a, N, axis,
                   target == AxisBasis::momentum ? FftDirection::to_momentum : FftDirection::to_position);
  current = target;
}

}  // namespace

void WaveFunction::change_representation(const Representation& target) {
  if (!target.valid()) throw std::invalid_argument("invalid representation " + target.name());
  const int N = grid_.N();
  if (rep_.sheared != target.sheared) {
    if (rep_.sheared) {
      set_axis(amps_, N, FftAxis::axis1, rep_.axis1, AxisBasis::position);
      unshear(amps_, N);
      rep_.sheared = false;
    } else {
      set_axis(amps_, N, FftAxis::axis1, rep_.axis1, AxisBasis::position);
      set_axis(amps_, N, FftAxis::axis2, rep_.axis2, AxisBasis::position);
      shear(amps_, N);
      rep_.sheared = true;
    }
  }
  set_axis(amps_, N, FftAxis::axis1, rep_.axis1, target.axis1);
  set_axis(amps_, N, FftAxis::axis2, rep_.axis2, target.axis2);
}

WaveFunction transform(const WaveFunction& psi, const Representation& target) {
  WaveFunction out = psi;
  out.change_representation(target);
  return out;
}

Complex inner_product(const WaveFunction& phi, const WaveFunction& psi) {
  if (!(phi.grid() == psi.grid())) throw std::invalid_argument("inner product across different grids");
  const WaveFunction moved = transform(phi, psi.representation());
  Complex s{};
  const auto a = moved.amplitudes();
  const auto b = psi.amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double distance(const WaveFunction& phi, const WaveFunction& psi) {
  if (!(phi.grid() == psi.grid())) throw std::invalid_argument("distance across different grids");
  const WaveFunction moved = transform(phi, psi.representation());
  double s = 0.0;
  const auto a = moved.amplitudes();
  const auto b = psi.amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

Ensemble::Ensemble(std::vector<Member> members) : members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("ensemble needs at least one member");
  double total = 0.0;
  for (const auto& m : members_) {
    if (!(m.weight >= 0.0)) throw std::invalid_argument("ensemble weights must be non-negative");
    if (!(m.state.grid() == members_.front().state.grid()))
      throw std::invalid_argument("ensemble members must share one grid");
    total += m.weight;
  }
  if (std::fabs(total - 1.0) > 1e-12) throw std::invalid_argument("ensemble weights must sum to 1");
}

}  // namespace cvctx::sim
