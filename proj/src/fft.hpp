#pragma once

#include <complex>
#include <span>

namespace crystalflow::fft {

enum class Direction { Forward, Backward };

// In-place unnormalised complex DFT over a row-major cube with `dim` axes
// of length `n`. Forward uses e^{-2πi jk/n}, Backward e^{+2πi jk/n}.
// Safe to call concurrently from multiple threads.
void transform(std::span<std::complex<double>> data, int dim, int n,
               Direction direction);

}  // namespace crystalflow::fft
