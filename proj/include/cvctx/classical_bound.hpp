#pragma once

// Noncontextual (hidden-variable) side of the inequality: every observable
// carries a predetermined unit-modulus complex value, and the signed sum of
// the six context products is bounded by 3*sqrt(3).

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cvctx/weyl_algebra.hpp"

namespace cvctx::bound {

using Complex = std::complex<double>;
using weyl::ObservableId;

inline const double kClassicalBound = 3.0 * 1.7320508075688772;  // 3 sqrt(3)
inline constexpr double kModulusTolerance = 1e-12;

/// Nine unit-modulus values, one per complex observable.
class Assignment {
 public:
  /// Throws std::invalid_argument if any |value| deviates from 1 by more than 1e-12.
  explicit Assignment(const std::array<Complex, weyl::kObservableCount>& values);

  /// Values exp(i phase) in ObservableId order.
  static Assignment from_phases(const std::array<double, weyl::kObservableCount>& phases);

  Complex operator[](ObservableId id) const { return values_[static_cast<int>(id)]; }
  const std::array<Complex, weyl::kObservableCount>& values() const { return values_; }

  /// Copy with one value multiplied by a unit-modulus factor.
  Assignment rotated(ObservableId id, Complex unit_factor) const;

 private:
  std::array<Complex, weyl::kObservableCount> values_{};
};

struct PhasePair {
  double phi1 = 0.0;
  double phi2 = 0.0;

  /// Both angles reduced to [0, 2 pi).
  static PhasePair reduced(double phi1, double phi2);
};

/// ABC + abc + alpha beta gamma + A a alpha + B b beta - C c gamma.
Complex s_value(const Assignment& asg);

/// |BC + a alpha| + |ac + B beta| + |alpha beta - Cc|; independent of A, b and gamma.
double triangle_bound(const Assignment& asg);

/// phi1 = arg(BC / (a alpha)), phi2 = arg(ac / (B beta)).
PhasePair phases_of(const Assignment& asg);

/// 2 (|cos(phi1/2)| + |cos(phi2/2)| + |sin((phi1+phi2)/2)|).
double trig_objective(const PhasePair& p);

struct Optimum {
  double max = 0.0;
  PhasePair argmax;
  double grid_max = 0.0;        ///< best value over the scanned grid
  std::size_t grid_points = 0;  ///< number of grid evaluations
  int refinement_sweeps = 0;
};

/// Grid scan of [0, 2pi)^2 followed by coordinate-wise golden-section
/// refinement around the best grid point. Throws std::invalid_argument for
/// nonpositive step or tolerance.
Optimum maximize_objective(double grid_step = 0.01, double refine_tol = 1e-10);

/// True if p coincides with (pi/3, pi/3) modulo the objective's symmetries
/// (swap, joint negation, 2 pi periodicity) within tol.
bool equivalent_to_known_argmax(const PhasePair& p, double tol);

/// Assignment reaching |S| = 3 sqrt(3).
Assignment saturating_assignment();

inline constexpr int kHistogramBins = 512;
inline constexpr double kHistogramMax = 6.0;

struct SampleSummary {
  double max_observed = 0.0;
  std::array<std::uint64_t, kHistogramBins> histogram{};  ///< |S| over [0, 6]
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// Draws n assignments with i.i.d. uniform phases. Work is split into
/// `workers` contiguous ranges; range w uses substream (seed, w). Results are
/// identical for a fixed worker count. Throws std::invalid_argument for n == 0.
SampleSummary sample_models(std::uint64_t n, std::uint64_t seed, unsigned workers = 1);

/// Bin index for |S| in the 512-bin histogram (values >= 6 land in the last bin).
int histogram_bin(double abs_s);

/// CSV landscape "phi1,phi2,objective" over [0, 2pi)^2 with the given step.
void write_landscape_csv(std::ostream& os, double step);

}  // namespace cvctx::bound
