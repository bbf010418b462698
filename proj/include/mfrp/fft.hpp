#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace mfrp {

std::size_t next_pow2(std::size_t n);

// In-place iterative radix-2 FFT; a.size() must be a power of two.
// inverse=true applies the 1/n factor.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

// Linear cross-correlation out[b] = sum_k x[b+k] * kernel[k - k_min],
// k = k_min..k_max, evaluated for b = 0..x.size()-1 (out-of-range x treated
// as zero). Used by the fast wavelet-transform path.
std::vector<double> cross_correlate(const std::vector<double>& x,
                                    const std::vector<double>& kernel,
                                    long k_min);

}  // namespace mfrp
