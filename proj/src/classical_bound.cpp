#include "cvctx/classical_bound.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "cvctx/rng.hpp"

namespace cvctx::bound {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double angular_distance(double a, double b) {
  const double d = std::fabs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, kTwoPi - d);
}

// Golden-section maximisation of f on [lo, hi].
template <class F>
double golden_max(F&& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

struct Candidate {
  double value;
  PhasePair at;
};

Candidate refine(PhasePair start, double half_width, double tol, int& sweeps_out) {
  double x = start.phi1;
  double y = start.phi2;
  double best = trig_objective(start);
  int sweeps = 0;
  for (; sweeps < 100; ++sweeps) {
    const double nx =
        golden_max([&](double t) { return trig_objective({t, y}); }, x - half_width, x + half_width, tol);
    const double ny =
        golden_max([&](double t) { return trig_objective({nx, t}); }, y - half_width, y + half_width, tol);
    const double value = trig_objective({nx, ny});
    const double moved = std::max(std::fabs(nx - x), std::fabs(ny - y));
    if (value < best) break;  // flat-top noise: keep the previous point
    const bool improved = value > best;
    x = nx;
    y = ny;
    best = value;
    if (moved < tol || !improved) {
      ++sweeps;
      break;
    }
  }
  sweeps_out = sweeps;
  return {best, PhasePair::reduced(x, y)};
}

}  // namespace

Assignment::Assignment(const std::array<Complex, weyl::kObservableCount>& values) : values_(values) {
  for (int i = 0; i < weyl::kObservableCount; ++i) {
    const double dev = std::fabs(std::abs(values_[i]) - 1.0);
    if (!(dev <= kModulusTolerance))
      throw std::invalid_argument("assignment value for " +
                                  std::string(weyl::name(weyl::kAllObservables[i])) +
                                  " is not of unit modulus");
  }
}

Assignment Assignment::from_phases(const std::array<double, weyl::kObservableCount>& phases) {
  std::array<Complex, weyl::kObservableCount> v{};
  for (int i = 0; i < weyl::kObservableCount; ++i) v[i] = std::polar(1.0, phases[i]);
  return Assignment(v);
}

Assignment Assignment::rotated(ObservableId id, Complex unit_factor) const {
  auto v = values_;
  v[static_cast<int>(id)] *= unit_factor;
  return Assignment(v);
}

PhasePair PhasePair::reduced(double phi1, double phi2) { return {wrap_angle(phi1), wrap_angle(phi2)}; }

Complex s_value(const Assignment& x) {
  using O = ObservableId;
  return x[O::A] * x[O::B] * x[O::C] + x[O::a] * x[O::b] * x[O::c] +
         x[O::alpha] * x[O::beta] * x[O::gamma] + x[O::A] * x[O::a] * x[O::alpha] +
         x[O::B] * x[O::b] * x[O::beta] - x[O::C] * x[O::c] * x[O::gamma];
}

double triangle_bound(const Assignment& x) {
  using O = ObservableId;
  return std::abs(x[O::B] * x[O::C] + x[O::a] * x[O::alpha]) +
         std::abs(x[O::a] * x[O::c] + x[O::B] * x[O::beta]) +
         std::abs(x[O::alpha] * x[O::beta] - x[O::C] * x[O::c]);
}

PhasePair phases_of(const Assignment& x) {
  using O = ObservableId;
  const Complex r1 = x[O::B] * x[O::C] / (x[O::a] * x[O::alpha]);
  const Complex r2 = x[O::a] * x[O::c] / (x[O::B] * x[O::beta]);
  return PhasePair::reduced(std::arg(r1), std::arg(r2));
}

double trig_objective(const PhasePair& p) {
  return 2.0 * (std::fabs(std::cos(p.phi1 / 2.0)) + std::fabs(std::cos(p.phi2 / 2.0)) +
                std::fabs(std::sin((p.phi1 + p.phi2) / 2.0)));
}

Optimum maximize_objective(double grid_step, double refine_tol) {
  if (!(grid_step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(refine_tol > 0.0)) throw std::invalid_argument("refinement tolerance must be positive");

  const auto n = static_cast<std::size_t>(std::ceil(kTwoPi / grid_step));
  constexpr std::size_t kSeeds = 8;
  std::vector<Candidate> top;
  top.reserve(kSeeds + 1);

  Optimum out;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) * grid_step;
    if (x >= kTwoPi) break;
    for (std::size_t j = 0; j < n; ++j) {
      const double y = static_cast<double>(j) * grid_step;
      if (y >= kTwoPi) break;
      const double v = trig_objective({x, y});
      ++out.grid_points;
      if (top.size() < kSeeds || v > top.back().value) {
        top.push_back({v, {x, y}});
        std::sort(top.begin(), top.end(), [](const Candidate& l, const Candidate& r) { return l.value > r.value; });
        if (top.size() > kSeeds) top.pop_back();
      }
    }
  }

  out.grid_max = top.front().value;
  out.max = top.front().value;
  out.argmax = top.front().at;
  for (const Candidate& seed : top) {
    int sweeps = 0;
    const Candidate c = refine(seed.at, grid_step, refine_tol, sweeps);
    out.refinement_sweeps += sweeps;
    if (c.value > out.max) {
      out.max = c.value;
      out.argmax = c.at;
    }
  }
  return out;
}

bool equivalent_to_known_argmax(const PhasePair& p, double tol) {
  constexpr double third = std::numbers::pi / 3.0;
  // orbit of (pi/3, pi/3) under swap and joint negation, modulo 2 pi
  for (double target : {third, -third})
    if (angular_distance(p.phi1, target) <= tol && angular_distance(p.phi2, target) <= tol) return true;
  return false;
}

Assignment saturating_assignment() {
  const double h = std::sqrt(3.0) / 2.0;
  using O = ObservableId;
  std::array<Complex, weyl::kObservableCount> v{};
  auto set = [&v](O id, double re, double im) { v[static_cast<int>(id)] = Complex{re, im}; };
  set(O::A, h, -0.5);
  set(O::B, 1.0, 0.0);
  set(O::C, 0.5, h);
  set(O::a, 1.0, 0.0);
  set(O::b, h, -0.5);
  set(O::c, 0.5, h);
  set(O::alpha, 1.0, 0.0);
  set(O::beta, 1.0, 0.0);
  set(O::gamma, h, 0.5);
  return Assignment(v);
}

int histogram_bin(double abs_s) {
  if (!(abs_s > 0.0)) return 0;
  const int bin = static_cast<int>(abs_s / kHistogramMax * kHistogramBins);
  return std::min(bin, kHistogramBins - 1);
}

SampleSummary sample_models(std::uint64_t n, std::uint64_t seed, unsigned workers) {
  if (n == 0) throw std::invalid_argument("sample count must be at least 1");
  workers = std::max(1u, workers);

  std::vector<SampleSummary> partial(workers);
  auto run = [&](unsigned w) {
    const std::uint64_t begin = n * w / workers;
    const std::uint64_t end = n * (w + 1) / workers;
    rng::Engine eng = rng::substream(seed, w);
    SampleSummary& acc = partial[w];
    std::array<double, weyl::kObservableCount> phases{};
    for (std::uint64_t s = begin; s < end; ++s) {
      for (double& ph : phases) ph = kTwoPi * rng::uniform01(eng);
      const double abs_s = std::abs(s_value(Assignment::from_phases(phases)));
      acc.max_observed = std::max(acc.max_observed, abs_s);
      ++acc.histogram[histogram_bin(abs_s)];
      ++acc.n_samples;
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  SampleSummary out;
  out.seed = seed;
  out.workers = workers;
  for (const SampleSummary& p : partial) {
    out.max_observed = std::max(out.max_observed, p.max_observed);
    out.n_samples += p.n_samples;
    for (int b = 0; b < kHistogramBins; ++b) out.histogram[b] += p.histogram[b];
  }
  return out;
}

void write_landscape_csv(std::ostream& os, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("landscape step must be positive");
  os << "phi1,phi2,objective\n" << std::setprecision(17);
  for (double x = 0.0; x < kTwoPi; x += step)
    for (double y = 0.0; y < kTwoPi; y += step) os << x << ',' << y << ',' << trig_objective({x, y}) << '\n';
}

}  // namespace cvctx::bound
