#pragma once

#include <complex>
#include <vector>

namespace tomo {

// In-place radix-2 FFT; size must be a power of two. inverse=true applies
// the conjugate transform followed by 1/n scaling.
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse);

std::size_t next_pow2(std::size_t n);

}  // namespace tomo
