#pragma once

// Two-mode continuous-variable state on a commensurate periodic grid.
//
// Each axis has N = 2 K M points on a box of length L = 2 pi M hbar / p0, so
// dx = pi hbar / (K p0) and dp = p0 / M. With these choices exp(i p0 x / hbar)
// and exp(i pi p / p0) take values on the N-th roots of unity at every grid
// point: every modular eigenphase is an exact integer label l with phase
// 2 pi l / N, and projective measurements bin by integer label.

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cvctx/weyl_algebra.hpp"

namespace cvctx::sim {

using Complex = std::complex<double>;
using weyl::ContextId;
using weyl::ObservableId;

inline constexpr double kNormTolerance = 1e-10;

class GridSpec {
 public:
  /// Throws std::invalid_argument unless M, K >= 1 and units are valid.
  explicit GridSpec(int M = 4, int K = 8, weyl::UnitSystem units = {});
  /// Same, additionally requiring N == 2 K M.
  static GridSpec with_points(int M, int K, int N, weyl::UnitSystem units = {});

  int M() const { return M_; }
  int K() const { return K_; }
  int N() const { return N_; }
  std::size_t size() const { return static_cast<std::size_t>(N_) * static_cast<std::size_t>(N_); }
  const weyl::UnitSystem& units() const { return units_; }

  double box_length() const;
  double dx() const;
  double dp() const;
  /// x_j = (j - N/2) dx, so the box is [-L/2, L/2).
  double position(int j) const { return (j - N_ / 2) * dx(); }
  /// Signed momentum for FFT index k in [0, N): k or k - N, whichever lies in [-N/2, N/2).
  double momentum(int k) const { return (k < N_ / 2 ? k : k - N_) * dp(); }

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.M_ == b.M_ && a.K_ == b.K_ && a.units_.hbar == b.units_.hbar && a.units_.p0 == b.units_.p0;
  }

 private:
  int M_;
  int K_;
  int N_;
  weyl::UnitSystem units_;
};

enum class AxisBasis { position, momentum };

/// Per-axis basis plus the shear flag. Sheared layouts index axis 2 by
/// u = x2 - x1; with axis 1 in momentum the coordinates are (p1 + p2, u).
struct Representation {
  AxisBasis axis1 = AxisBasis::position;
  AxisBasis axis2 = AxisBasis::position;
  bool sheared = false;

  static constexpr Representation x1x2() { return {}; }
  static constexpr Representation p1p2() { return {AxisBasis::momentum, AxisBasis::momentum, false}; }
  static constexpr Representation x1p2() { return {AxisBasis::position, AxisBasis::momentum, false}; }
  static constexpr Representation p1x2() { return {AxisBasis::momentum, AxisBasis::position, false}; }
  static constexpr Representation x1u() { return {AxisBasis::position, AxisBasis::position, true}; }
  static constexpr Representation pplus_u() { return {AxisBasis::momentum, AxisBasis::position, true}; }

  /// Sheared layouts keep u in position.
  bool valid() const { return !sheared || axis2 == AxisBasis::position; }
  std::string name() const;

  friend bool operator==(const Representation&, const Representation&) = default;
};

class WaveFunction {
 public:
  /// Takes ownership of row-major amplitudes psi[j1 * N + j2]. Throws if the
  /// size does not match the grid or the representation is invalid. No
  /// normalisation is applied or required here.
  WaveFunction(GridSpec grid, Representation rep, std::vector<Complex> amplitudes);

  const GridSpec& grid() const { return grid_; }
  const Representation& representation() const { return rep_; }
  std::span<const Complex> amplitudes() const { return amps_; }
  std::span<Complex> amplitudes() { return amps_; }
  Complex operator()(int j1, int j2) const { return amps_[index(j1, j2)]; }
  Complex& operator()(int j1, int j2) { return amps_[index(j1, j2)]; }

  double norm_squared() const;
  bool normalized(double tol = kNormTolerance) const;
  /// Scales to unit norm; throws std::domain_error for the zero vector.
  void normalize();

  /// In-place change of representation (used by the value-returning transform()).
  void change_representation(const Representation& target);

  WaveFunction& operator*=(Complex s);
  WaveFunction& operator+=(const WaveFunction& other);  ///< same grid and representation

 private:
  std::size_t index(int j1, int j2) const {
    return static_cast<std::size_t>(j1) * static_cast<std::size_t>(grid_.N()) + static_cast<std::size_t>(j2);
  }

  GridSpec grid_;
  Representation rep_;
  std::vector<Complex> amps_;
};

/// <phi|psi>, after bringing phi to psi's representation.
Complex inner_product(const WaveFunction& phi, const WaveFunction& psi);
/// ||phi - psi|| in psi's representation.
double distance(const WaveFunction& phi, const WaveFunction& psi);

/// Convex mixture of pure states on one grid.
class Ensemble {
 public:
  struct Member {
    double weight;
    WaveFunction state;
  };
  /// Throws std::invalid_argument on negative weights, weights not summing to
  /// 1 within 1e-12, mixed grids, or an empty list.
  explicit Ensemble(std::vector<Member> members);

  const std::vector<Member>& members() const { return members_; }
  const GridSpec& grid() const { return members_.front().state.grid(); }

 private:
  std::vector<Member> members_;
};

// --- State preparation --------------------------------------------------------

struct GaussianSpec {
  double sigma = 1.0;
  std::array<double, 2> center{0.0, 0.0};
  std::array<double, 2> momentum{0.0, 0.0};
};

struct SuperpositionSpec {
  GaussianSpec first;
  GaussianSpec second{1.0, {3.0, -2.0}, {0.0, 0.0}};
  Complex second_amplitude{1.0, 0.0};  ///< relative amplitude of the second branch
};

struct RandomSpec {
  std::uint64_t seed = 0;
  double envelope_sigma = 3.0;  ///< width of the Gaussian envelope on the random amplitudes
};

using StateSpec = std::variant<GaussianSpec, SuperpositionSpec, RandomSpec>;

/// Normalised state in the (x1, x2) representation. Throws std::invalid_argument
/// for sigma <= 0, sigma >= L/2 or a centre outside the box.
WaveFunction make_state(const StateSpec& spec, const GridSpec& grid);

// --- Representations and observables ------------------------------------------

/// Unitary change of representation: per-axis unitary DFTs and the exact
/// index shear psi'(j1, ju) = psi(j1, (j1 + ju) mod N).
WaveFunction transform(const WaveFunction& psi, const Representation& target);

/// Representation in which the observable acts by pointwise multiplication.
Representation diagonal_representation(ObservableId id);

/// Integer eigenphase labels (phase = 2 pi label / N, label in [0, N)) of
/// exp(i F / hbar) at each grid point of `rep`. Throws std::invalid_argument if
/// F is not diagonal in `rep` or its phases are not on the grid's root-of-unity
/// lattice.
std::vector<int> eigenphase_labels(const weyl::LinearForm& generator, const GridSpec& grid,
                                   const Representation& rep);

/// Labels for one of the nine observables in its diagonal representation.
const std::vector<int>& observable_labels(ObservableId id, const GridSpec& grid);

/// First supported representation in which F is diagonal; throws if none.
Representation diagonal_representation(const weyl::LinearForm& generator);

/// Applies exp(i pi phase) exp(i F / hbar); the result is in psi's representation.
WaveFunction apply_weyl(const WaveFunction& psi, const weyl::WeylOp& op);

WaveFunction apply_complex_observable(const WaveFunction& psi, ObservableId id, bool adjoint = false);

/// U' = (U + U^dagger) / 2 or U'' = (U - U^dagger) / (2i).
WaveFunction apply_real_observable(const WaveFunction& psi, ObservableId id, bool double_primed);

/// <psi| U1 U2 U3 |psi> for the context's members in written order.
Complex expectation(const WaveFunction& psi, ContextId ctx);
Complex expectation(const Ensemble& rho, ContextId ctx);

/// Sum of the six context expectations with a minus sign on Cc-gamma.
Complex s_statistic(const WaveFunction& psi);
Complex s_statistic(const Ensemble& rho);

// --- Measurement --------------------------------------------------------------

/// Probability of each eigenphase label in [0, N).
struct BornDistribution {
  ObservableId observable;
  int N = 0;
  std::vector<double> probability;

  double eigenphase(int label) const;
  /// Labels that occur on the grid (the observable's spectrum), ascending.
  std::vector<int> spectrum;
};

BornDistribution born_distribution(const WaveFunction& psi, ObservableId id);

struct ShotRecord {
  ContextId context;
  std::array<int, 3> labels{};       ///< eigenphase labels, members in written order
  std::array<double, 3> theta{};     ///< 2 pi label / N in [0, 2 pi)
  Complex product{};                 ///< exp(i theta1) exp(i theta2) exp(i theta3)
};

/// Sequential Lueders measurements of the context's three observables, one
/// fresh copy of psi per shot. `order` is a permutation of {0, 1, 2} giving the
/// measurement order; records always list members in written order. Shot s
/// draws from substream (seed, context, s), so results do not depend on
/// `workers`. Throws std::invalid_argument for shots == 0, an invalid order or
/// an unnormalised state.
std::vector<ShotRecord> measure_context(const WaveFunction& psi, ContextId ctx, std::uint64_t shots,
                                        std::uint64_t seed, std::array<int, 3> order = {0, 1, 2},
                                        unsigned workers = 1);

/// Exact probability of each label pair of the first two members (written
/// order) when measuring in `order`; the third outcome is then fixed by the
/// context identity. Indexed [l_0 * N + l_1] whatever the order, so results
/// for different orders compare directly.
std::vector<double> joint_probabilities(const WaveFunction& psi, ContextId ctx, std::array<int, 3> order);

/// Empirical outcome frequencies of one member (written-order position
/// 0..2) against its Born distribution on the initial state, in standard
/// errors sqrt(p (1 - p) / shots). A label seen with p = 0 gives infinity.
struct MarginalCheck {
  double max_z = 0.0;
  int worst_label = -1;
};
MarginalCheck compare_marginal(const std::vector<ShotRecord>& shots, int member, const BornDistribution& born);

void write_shot_log_csv(std::ostream& os, const std::vector<ShotRecord>& shots, bool header = true);

}  // namespace cvctx::sim
