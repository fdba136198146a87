#pragma once

// Common eigenbasis of {C, c, gamma} on the periodic grid.
//
// V1 = x1 + (pi hbar / p0^2) p2 and V2 = x2 + (pi hbar / p0^2) p1 have joint
// eigenstates |v1, v2> with a chirped plane-wave wavefunction; c displaces v1
// by 2 p0 / hbar, so superposing one displacement cycle with phases
// exp(i kappa n) diagonalises C, c and gamma together.
//
// On the grid the labels are quantised: v = n p0 / (M hbar) with n mod N,
// kappa = 2 pi q / K, epsilon = e p0 / (M hbar) with e in [0, 2M). The chirp
// exp(-i p0^2 x1 x2 / (pi hbar^2)) is only single-valued on the box when K
// divides M, and a displacement cycle then has length K.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "cvctx/cv_sim.hpp"
#include "cvctx/weyl_algebra.hpp"

namespace cvctx::appendix {

using sim::Complex;
using sim::GridSpec;
using sim::WaveFunction;
using weyl::ObservableId;

struct VWSet {
  weyl::LinearForm V1, V2, W1, W2;
};

/// V1, V2 carry length units, W1, W2 momentum units; exact in the symbolic scale.
VWSet vw_set();

/// Grid with K | M. The simulator's default (M=4, K=8) does not qualify.
inline GridSpec default_grid() { return GridSpec(8, 4); }

/// Throws std::invalid_argument unless K divides M.
void require_compatible(const GridSpec& grid);

struct VEigenstateParams {
  double v1 = 0.0;  ///< inverse length; V1 eigenvalue is pi hbar^2 v1 / p0^2
  double v2 = 0.0;
};

struct ModularEigenstateParams {
  double kappa = 0.0;    ///< in [0, 2 pi)
  double epsilon = 0.0;  ///< in [0, 2 p0 / hbar)
  double v2 = 0.0;
};

/// Integer lattice coordinates of the labels.
struct VIndex {
  int n1 = 0;  ///< v1 = n1 p0 / (M hbar), reduced mod N
  int n2 = 0;
};
struct ModularIndex {
  int q = 0;   ///< kappa = 2 pi q / K
  int e = 0;   ///< epsilon = e p0 / (M hbar)
  int n2 = 0;
};

/// Label spacing p0 / (M hbar) of v1, v2 and epsilon.
double v_spacing(const GridSpec& grid);

/// Throw std::invalid_argument when a label is off the grid lattice or out of range.
VIndex index_of(const VEigenstateParams& p, const GridSpec& grid);
ModularIndex index_of(const ModularEigenstateParams& p, const GridSpec& grid);
VEigenstateParams params_of(const VIndex& i, const GridSpec& grid);
ModularEigenstateParams params_of(const ModularIndex& i, const GridSpec& grid);

/// Unit-norm |v1, v2> in the (x1, x2) representation.
WaveFunction v_eigenstate(const VEigenstateParams& p, const GridSpec& grid);

/// Unit-norm K^{-1/2} sum_{n<K} exp(i kappa n) |epsilon + 2 p0 n / hbar, v2>.
WaveFunction modular_eigenstate(const ModularEigenstateParams& p, const GridSpec& grid);

/// Eigenvalues of C, c, gamma on |kappa, epsilon, v2>. The c eigenvalue carries
/// exp(-i pi hbar v2 / p0) from the x1 translation inside c, which is 1 when
/// v2 is a multiple of 2 p0 / hbar.
struct ModularEigenvalues {
  Complex C, c, gamma;
};
ModularEigenvalues eigenvalues(const ModularEigenstateParams& p, const weyl::UnitSystem& units = {});

/// (C', C'', c', c'', gamma', gamma'') eigenvalues: real and imaginary parts
/// of eigenvalues(p).
std::array<double, 6> real_observable_eigenvalues(const ModularEigenstateParams& p,
                                                  const weyl::UnitSystem& units = {});

/// Phase picked up by c in c|v1, v2> = exp(-i pi hbar v2 / p0) |v1 + 2 p0 / hbar, v2>.
Complex displacement_phase(const VEigenstateParams& p, const weyl::UnitSystem& units = {});

/// || c|v1,v2> - displacement_phase * |v1 + 2 p0/hbar, v2> ||, both sides built independently.
double displacement_check(const VEigenstateParams& p, const GridSpec& grid);
/// || c|kappa,eps,v2> - lambda_c |kappa,eps,v2> ||.
double displacement_check(const ModularEigenstateParams& p, const GridSpec& grid);

/// c applied K times returns |v1, v2> up to a global phase.
struct WrapCycle {
  int length = 0;
  Complex phase;    ///< <start | c^K start>
  double residual;  ///< || c^K start - phase start ||
};
WrapCycle wrap_cycle(const VEigenstateParams& p, const GridSpec& grid);

/// V1 is unbounded and not a torus operator, so the eigenvalue equation is
/// checked through exp(-i s V1 / hbar) at s = p0 / K (smallest lattice step)
/// and s = p0 (which is C), and likewise for V2. Returns the largest residual.
double v_eigenvalue_residual(const VEigenstateParams& p, const GridSpec& grid);

/// Weyl form of [V_j, W_k] = i hbar delta_jk, [V_j, V_k] = [W_j, W_k] = 0:
/// numerical || U W psi - exp(i delta) W U psi || on a random state with delta
/// from the exact algebra, and a flag that delta matches the canonical value.
struct CommutatorCheck {
  std::string pair;
  weyl::Rational phase_over_pi;
  bool phase_matches = false;
  double residual = 0.0;
};
std::vector<CommutatorCheck> vw_commutator_checks(const GridSpec& grid, std::uint64_t seed = 1);

/// m = floor(hbar v1 / (2 p0)), epsilon = v1 - 2 p0 m / hbar, so epsilon is
/// in [0, 2 p0 / hbar) for negative v1 as well.
std::pair<int, double> integer_part(const VEigenstateParams& p, const GridSpec& grid);

/// sum_q K^{-1/2} exp(-i kappa_q m) |kappa_q, epsilon, v2>.
WaveFunction reconstruct_v(const VEigenstateParams& p, const GridSpec& grid);

/// Largest |<a|b> - delta_ab| over the given modular labels.
double gram_deviation(const std::vector<ModularIndex>& labels, const GridSpec& grid);

// --- Full verification run ------------------------------------------------------

struct Report {
  GridSpec grid;
  ModularEigenstateParams modular;
  VEigenstateParams v;
  std::vector<std::pair<std::string, double>> residuals;  ///< fixed order
  std::array<double, 6> analytic{};
  std::array<double, 6> numeric{};
  std::vector<CommutatorCheck> commutators;

  /// Name of the first residual above tol (or failing commutator phase), empty if none.
  std::string first_failure(double tol = 1e-8) const;
};

/// Runs every check above; throws std::invalid_argument for incompatible grids or labels.
Report verify(const ModularEigenstateParams& modular, const VEigenstateParams& v, const GridSpec& grid);

/// Labels used when none are given. The modular default has v2 = 0, so the
/// c eigenvalue is exactly exp(-i kappa).
ModularEigenstateParams default_modular_params(const GridSpec& grid);
VEigenstateParams default_v_params(const GridSpec& grid);

}  // namespace cvctx::appendix
