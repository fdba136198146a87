#include <cmath>
#include <stdexcept>

#include "cvctx/cv_sim.hpp"
#include "cvctx/rng.hpp"

namespace cvctx::sim {

namespace {

// Minimum-image displacement on the periodic box.
double periodic_offset(double x, double c, double L) {
  double d = std::fmod(x - c, L);
  if (d >= L / 2) d -= L;
  if (d < -L / 2) d += L;
  return d;
}

void check_gaussian(const GaussianSpec& g, const GridSpec& grid) {
  const double L = grid.box_length();
  if (!(g.sigma > 0.0)) throw std::invalid_argument("gaussian sigma must be positive");
  if (!(g.sigma < L / 2)) throw std::invalid_argument("gaussian sigma must be small compared with the box");
  for (double c : g.center)
    if (!(c >= -L / 2 && c < L / 2)) throw std::invalid_argument("gaussian centre lies outside the box");
}

WaveFunction gaussian(const GaussianSpec& g, const GridSpec& grid) {
  check_gaussian(g, grid);
  const int N = grid.N();
  const double L = grid.box_length();
  const double hbar = grid.units().hbar;
  std::vector<Complex> amps(grid.size());
  for (int j1 = 0; j1 < N; ++j1) {
    const double d1 = periodic_offset(grid.position(j1), g.center[0], L);
    for (int j2 = 0; j2 < N; ++j2) {
      const double d2 = periodic_offset(grid.position(j2), g.center[1], L);
      const double envelope = std::exp(-(d1 * d1 + d2 * d2) / (4.0 * g.sigma * g.sigma));
      const double phase = (g.momentum[0] * d1 + g.momentum[1] * d2) / hbar;
      amps[static_cast<std::size_t>(j1) * N + j2] = std::polar(envelope, phase);
    }
  }
  WaveFunction psi(grid, Representation::x1x2(), std::move(amps));
  psi.normalize();
  return psi;
}

WaveFunction random_state(const RandomSpec& r, const GridSpec& grid) {
  if (!(r.envelope_sigma > 0.0)) throw std::invalid_argument("random-state envelope must be positive");
  const int N = grid.N();
  rng::Engine eng = rng::substream(r.seed, 0x5eed);
  std::vector<Complex> amps(grid.size());
  for (int j1 = 0; j1 < N; ++j1) {
    const double x1 = grid.position(j1);
    for (int j2 = 0; j2 < N; ++j2) {
      const double x2 = grid.position(j2);
      const double envelope = std::exp(-(x1 * x1 + x2 * x2) / (4.0 * r.envelope_sigma * r.envelope_sigma));
      const double re = rng::standard_normal(eng);
      const double im = rng::standard_normal(eng);
      amps[static_cast<std::size_t>(j1) * N + j2] = envelope * Complex{re, im};
    }
  }
  WaveFunction psi(grid, Representation::x1x2(), std::move(amps));
  psi.normalize();
  return psi;
}

}  // namespace

WaveFunction make_state(const StateSpec& spec, const GridSpec& grid) {
  struct Visitor {
    const GridSpec& grid;
    WaveFunction operator()(const GaussianSpec& g) const { return gaussian(g, grid); }
    WaveFunction operator()(const RandomSpec& r) const { return random_state(r, grid); }
    WaveFunction operator()(const SuperpositionSpec& s) const {
      WaveFunction psi = gaussian(s.first, grid);
      WaveFunction second = gaussian(s.second, grid);
      second *= s.second_amplitude;
      psi += second;
      psi.normalize();
      return psi;
    }
  };
  return std::visit(Visitor{grid}, spec);
}

}  // namespace cvctx::sim
