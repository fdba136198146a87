#pragma once

// Unitary DFTs along one axis of a row-major N x N array, backed by FFTW.
// Plans are created once per N under a lock; execution is thread-safe.

#include <complex>
#include <span>

namespace cvctx::sim::detail {

enum class FftAxis { axis1, axis2 };
enum class FftDirection { to_momentum, to_position };

/// In-place unitary transform; to_momentum uses exp(-2 pi i j k / N).
void axis_fft(std::span<std::complex<double>> data, int N, FftAxis axis, FftDirection dir);

}  // namespace cvctx::sim::detail
