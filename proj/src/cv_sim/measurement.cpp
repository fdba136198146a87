#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

#include "cvctx/cv_sim.hpp"
#include "cvctx/rng.hpp"

namespace cvctx::sim {

namespace {

std::vector<double> class_weights(const WaveFunction& psi, const std::vector<int>& labels) {
  std::vector<double> w(psi.grid().N(), 0.0);
  const auto amps = psi.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) w[labels[i]] += std::norm(amps[i]);
  return w;
}

void project(WaveFunction& psi, const std::vector<int>& labels, int keep) {
  auto amps = psi.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i)
    if (labels[i] != keep) amps[i] = Complex{};
}

int sample_label(const std::vector<double>& weights, double u) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double target = u * total;
  double cum = 0.0;
  int last_nonzero = -1;
  for (int l = 0; l < static_cast<int>(weights.size()); ++l) {
    if (weights[l] <= 0.0) continue;
    last_nonzero = l;
    cum += weights[l];
    if (target < cum) return l;
  }
  if (last_nonzero < 0) throw std::domain_error("cannot sample from a zero state");
  return last_nonzero;
}

void check_order(const std::array<int, 3>& order) {
  std::array<int, 3> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != std::array<int, 3>{0, 1, 2})
    throw std::invalid_argument("measurement order must be a permutation of {0,1,2}");
}

}  // namespace

double BornDistribution::eigenphase(int label) const { return 2.0 * std::numbers::pi * label / N; }

BornDistribution born_distribution(const WaveFunction& psi, ObservableId id) {
  if (!psi.normalized()) throw std::invalid_argument("state is not normalised");
  const auto& labels = observable_labels(id, psi.grid());
  const WaveFunction diag = transform(psi, diagonal_representation(id));
  BornDistribution out;
  out.observable = id;
  out.N = psi.grid().N();
  out.probability = class_weights(diag, labels);
  const std::set<int> present(labels.begin(), labels.end());
  out.spectrum.assign(present.begin(), present.end());
  return out;
}

std::vector<ShotRecord> measure_context(const WaveFunction& psi, ContextId ctx, std::uint64_t shots,
                                        std::uint64_t seed, std::array<int, 3> order, unsigned workers) {
  if (shots == 0) throw std::invalid_argument("shot count must be at least 1");
  check_order(order);
  if (!psi.normalized()) throw std::invalid_argument("state is not normalised");

  const auto m = weyl::members(ctx);
  const int N = psi.grid().N();
  const WaveFunction start = transform(psi, diagonal_representation(m[order[0]]));
  const std::uint64_t stream = static_cast<std::uint64_t>(ctx);

  std::vector<ShotRecord> out(shots);
  auto run_shot = [&](std::uint64_t s) {
    rng::Engine eng = rng::substream(seed, stream, s);
    WaveFunction phi = start;
    ShotRecord rec;
    rec.context = ctx;
    for (int step = 0; step < 3; ++step) {
      const ObservableId id = m[order[step]];
      phi.change_representation(diagonal_representation(id));
      const auto& labels = observable_labels(id, phi.grid());
      const int l = sample_label(class_weights(phi, labels), rng::uniform01(eng));
      project(phi, labels, l);
      phi.normalize();
      rec.labels[order[step]] = l;
    }
    rec.product = Complex{1.0, 0.0};
    for (int i = 0; i < 3; ++i) {
      rec.theta[i] = 2.0 * std::numbers::pi * rec.labels[i] / N;
      rec.product *= std::polar(1.0, rec.theta[i]);
    }
    out[s] = rec;
  };

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(shots, 1024))));
  if (workers == 1) {
    for (std::uint64_t s = 0; s < shots; ++s) run_shot(s);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::uint64_t s = w; s < shots; s += workers) run_shot(s);
      });
  }
  return out;
}

std::vector<double> joint_probabilities(const WaveFunction& psi, ContextId ctx, std::array<int, 3> order) {
  check_order(order);
  if (!psi.normalized()) throw std::invalid_argument("state is not normalised");
  constexpr double kNegligible = 1e-20;
  const auto m = weyl::members(ctx);
  const int N = psi.grid().N();
  std::vector<double> joint(static_cast<std::size_t>(N) * N, 0.0);

  std::array<int, 3> labels_by_member{};
  std::array<ObservableId, 3> measured{m[order[0]], m[order[1]], m[order[2]]};

  auto branch = [&](auto&& self, const WaveFunction& phi, int step) -> void {
    WaveFunction diag = transform(phi, diagonal_representation(measured[step]));
    const auto& labels = observable_labels(measured[step], phi.grid());
    const auto weights = class_weights(diag, labels);
    for (int l = 0; l < N; ++l) {
      if (weights[l] < kNegligible) continue;
      labels_by_member[order[step]] = l;
      if (step == 2) {
        joint[static_cast<std::size_t>(labels_by_member[0]) * N + labels_by_member[1]] += weights[l];
        continue;
      }
      WaveFunction projected = diag;
      project(projected, labels, l);
      self(self, projected, step + 1);
    }
  };
  branch(branch, psi, 0);
  return joint;
}

MarginalCheck compare_marginal(const std::vector<ShotRecord>& shots, int member, const BornDistribution& born) {
  if (shots.empty()) throw std::invalid_argument("no shots to compare");
  if (member < 0 || member > 2) throw std::invalid_argument("member index must be 0, 1 or 2");
  std::vector<double> count(born.N, 0.0);
  for (const auto& r : shots) count[r.labels[member]] += 1.0;
  const double n = static_cast<double>(shots.size());
  MarginalCheck out;
  for (int l = 0; l < born.N; ++l) {
    const double p = std::clamp(born.probability[l], 0.0, 1.0);
    const double f = count[l] / n;
    double z;
    if (p <= 0.0 || p >= 1.0)
      z = f == p ? 0.0 : std::numeric_limits<double>::infinity();
    else
      z = std::abs(f - p) / std::sqrt(p * (1.0 - p) / n);
    if (z > out.max_z || out.worst_label < 0) {
      out.max_z = z;
      out.worst_label = l;
    }
  }
  return out;
}

void write_shot_log_csv(std::ostream& os, const std::vector<ShotRecord>& shots, bool header) {
  if (header) os << "shot,context,theta1,theta2,theta3,product_re,product_im\n";
  os << std::setprecision(17);
  for (std::size_t s = 0; s < shots.size(); ++s) {
    const auto& r = shots[s];
    os << s << ',' << weyl::name(r.context) << ',' << r.theta[0] << ',' << r.theta[1] << ',' << r.theta[2]
       << ',' << r.product.real() << ',' << r.product.imag() << '\n';
  }
}

}  // namespace cvctx::sim
