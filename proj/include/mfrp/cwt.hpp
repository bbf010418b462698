#pragma once

#include <span>
#include <vector>

namespace mfrp {

// psi_n(x) = d^n/dx^n exp(-x^2 / 2); n vanishing moments, so the transform
// is blind to polynomial trends of degree n-1.
struct DogWavelet {
  int order = 4;
};

double dog_evaluate(int order, double x);

// Log-spaced scale grid, 8 voices per octave, from 4 samples to length/8.
std::vector<double> default_scales(int length);

// T(scale, b) = (1/scale) sum_t Y(t) psi((t - b)/scale) over every integer
// position b. Cells whose truncated wavelet support (|x| <= 8) crosses a
// series boundary are border-masked and excluded downstream.
struct CwtField {
  std::vector<double> scales;
  int n_positions = 0;
  std::vector<std::vector<double>> coefficients;  // [scale][position]
  std::vector<int> half_support;                  // ceil(8 * scale), per scale

  bool masked(std::size_t scale_idx, int position) const {
    const int w = half_support[scale_idx];
    return position < w || position >= n_positions - w;
  }
};

// FFT-accelerated transform (the default path).
CwtField transform(std::span<const double> series, DogWavelet wavelet,
                   std::span<const double> scales);

// Direct-summation reference path; agrees with transform() to rounding.
CwtField transform_direct(std::span<const double> series, DogWavelet wavelet,
                          std::span<const double> scales);

}  // namespace mfrp
