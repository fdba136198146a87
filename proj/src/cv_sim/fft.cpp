#include "fft.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace cvctx::sim::detail {

namespace {

class AxisPlans {
 public:
  explicit AxisPlans(int N) : N_(N) {
    std::vector<std::complex<double>> scratch(static_cast<std::size_t>(N) * N);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    int n[] = {N};
    for (int d = 0; d < 2; ++d) {
      const int sign = d == 0 ? FFTW_FORWARD : FFTW_BACKWARD;
      // axis 2: contiguous rows
      plans_[0][d] = fftw_plan_many_dft(1, n, N, buf, nullptr, 1, N, buf, nullptr, 1, N, sign, flags);
      // axis 1: strided columns
      plans_[1][d] = fftw_plan_many_dft(1, n, N, buf, nullptr, N, 1, buf, nullptr, N, 1, sign, flags);
    }
    for (auto& row : plans_)
      for (auto* p : row)
        if (p == nullptr) throw std::runtime_error("FFTW planning failed");
  }
  AxisPlans(const AxisPlans&) = delete;
  AxisPlans& operator=(const AxisPlans&) = delete;
  ~AxisPlans() {
    for (auto& row : plans_)
      for (auto* p : row) fftw_destroy_plan(p);
  }

  void execute(std::span<std::complex<double>> data, FftAxis axis, FftDirection dir) const {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    const int a = axis == FftAxis::axis2 ? 0 : 1;
    const int d = dir == FftDirection::to_momentum ? 0 : 1;
    fftw_execute_dft(plans_[a][d], buf, buf);
    const double scale = 1.0 / std::sqrt(static_cast<double>(N_));
    for (auto& z : data) z *= scale;
  }

 private:
  int N_;
  fftw_plan plans_[2][2]{};
};

const AxisPlans& plans_for(int N) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<AxisPlans>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[N];
  if (!slot) slot = std::make_unique<AxisPlans>(N);
  return *slot;
}

}  // namespace

void axis_fft(std::span<std::complex<double>> data, int N, FftAxis axis, FftDirection dir) {
  if (data.size() != static_cast<std::size_t>(N) * N) throw std::invalid_argument("axis_fft: size mismatch");
  plans_for(N).execute(data, axis, dir);
}

}  // namespace cvctx::sim::detail
