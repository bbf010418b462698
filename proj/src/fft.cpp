#include "mfrp/fft.hpp"

#include <cmath>

namespace mfrp {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n < 2) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }

  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& z : a) z *= inv;
  }
}

std::vector<double> cross_correlate(const std::vector<double>& x,
                                    const std::vector<double>& kernel,
                                    long k_min) {
  const std::size_t n = x.size();
  const std::size_t m = kernel.size();
  const std::size_t nfft = next_pow2(n + m);

  std::vector<std::complex<double>> fx(nfft), fk(nfft);
  for (std::size_t i = 0; i < n; ++i) fx[i] = x[i];
  // out[b] = sum_j x[b + k_min + j] kernel[j]; as a circular convolution the
  // kernel enters reversed and shifted by k_min.
  for (std::size_t j = 0; j < m; ++j) {
    const long shift = -(k_min + static_cast<long>(j));
    const std::size_t idx =
        static_cast<std::size_t>((shift % static_cast<long>(nfft) +
                                  static_cast<long>(nfft)) %
                                 static_cast<long>(nfft));
    fk[idx] += kernel[j];
  }

  fft_inplace(fx, false);
  fft_inplace(fk, false);
  for (std::size_t i = 0; i < nfft; ++i) fx[i] *= fk[i];
  fft_inplace(fx, true);

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = fx[i].real();
  return out;
}

}  // namespace mfrp
