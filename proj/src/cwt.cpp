#include "mfrp/cwt.hpp"

#include <cmath>
#include <complex>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>

#include "mfrp/errors.hpp"
#include "mfrp/fft.hpp"

namespace mfrp {

namespace {
constexpr double kSupportRadius = 8.0;  // Gaussian tail < 1e-13 beyond
}

double dog_evaluate(int order, double x) {
  if (order < 1) throw ConfigError("dog_evaluate: order must be >= 1");
  // Probabilists' Hermite recursion: He_{k+1} = x He_k - k He_{k-1}.
  double hkm1 = 1.0, hk = x;
  for (int k = 1; k < order; ++k) {
    const double next = x * hk - k * hkm1;
    hkm1 = hk;
    hk = next;
  }
  const double sign = (order % 2 == 0) ? 1.0 : -1.0;
  return sign * hk * std::exp(-0.5 * x * x);
}

std::vector<double> default_scales(int length) {
  if (length < 256) throw ConfigError("default_scales: need length >= 256");
  const double lo = 4.0;
  const double hi = length / 8.0;
  const int voices = 8;
  const int count =
      static_cast<int>(std::floor(voices * std::log2(hi / lo) + 1e-9)) + 1;
  std::vector<double> scales(count);
  for (int k = 0; k < count; ++k)
    scales[k] = lo * std::pow(2.0, k / double(voices));
  return scales;
}

namespace {

CwtField make_field(std::span<const double> series,
                    std::span<const double> scales) {
  const int n = static_cast<int>(series.size());
  if (scales.empty()) throw ConfigError("transform: empty scale grid");
  for (double s : scales) {
    if (!(s >= 1.0)) throw ConfigError("transform: scales must be >= 1 sample");
    if (static_cast<double>(n) < kSupportRadius * s)
      throw ScaleTooLarge("transform: scale " + std::to_string(s) +
                          " too large for length " + std::to_string(n));
  }
  CwtField field;
  field.scales.assign(scales.begin(), scales.end());
  field.n_positions = n;
  field.coefficients.resize(scales.size());
  field.half_support.resize(scales.size());
  return field;
}

std::vector<double> sampled_kernel(int order, double scale, int w) {
  std::vector<double> kernel(2 * w + 1);
  for (int k = -w; k <= w; ++k)
    kernel[k + w] = dog_evaluate(order, k / scale);
  return kernel;
}

// Transform spectra of the reversed, wrapped kernels. The sweep applies the
// same (order, scale, fft length) combinations thousands of times, so the
// spectra are cached process-wide.
using KernelKey = std::tuple<int, std::uint64_t, std::size_t>;
using Spectrum = std::shared_ptr<const std::vector<std::complex<double>>>;

Spectrum kernel_spectrum(int order, double scale, int w, std::size_t nfft) {
  static std::map<KernelKey, Spectrum> cache;
  static std::mutex mutex;

  std::uint64_t scale_bits = 0;
  std::memcpy(&scale_bits, &scale, sizeof(scale));
  const KernelKey key{order, scale_bits, nfft};
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }

  const std::vector<double> kernel = sampled_kernel(order, scale, w);
  auto spec = std::make_shared<std::vector<std::complex<double>>>(nfft);
  // correlation as circular convolution with the reversed kernel
  for (int j = 0; j < 2 * w + 1; ++j) {
    const long shift = -(-(long)w + j);
    const std::size_t idx = (std::size_t)((shift % (long)nfft + (long)nfft) %
                                          (long)nfft);
    (*spec)[idx] += kernel[j];
  }
  fft_inplace(*spec, false);

  std::lock_guard<std::mutex> lock(mutex);
  auto [it, inserted] = cache.emplace(key, std::move(spec));
  return it->second;
}

}  // namespace

CwtField transform(std::span<const double> series, DogWavelet wavelet,
                   std::span<const double> scales) {
  CwtField field = make_field(series, scales);
  const std::size_t n = series.size();

  for (std::size_t si = 0; si < field.scales.size(); ++si)
    field.half_support[si] =
        static_cast<int>(std::ceil(kSupportRadius * field.scales[si]));

  // one signal transform per fft length, shared by all scales in the group
  std::map<std::size_t, std::vector<std::complex<double>>> signal_ffts;
  for (std::size_t si = 0; si < field.scales.size(); ++si) {
    const std::size_t m = 2 * (std::size_t)field.half_support[si] + 1;
    const std::size_t nfft = next_pow2(n + m);
    if (signal_ffts.count(nfft)) continue;
    std::vector<std::complex<double>> fx(nfft);
    for (std::size_t i = 0; i < n; ++i) fx[i] = series[i];
    fft_inplace(fx, false);
    signal_ffts.emplace(nfft, std::move(fx));
  }

  std::vector<std::complex<double>> prod;
  for (std::size_t si = 0; si < field.scales.size(); ++si) {
    const double s = field.scales[si];
    const int w = field.half_support[si];
    const std::size_t nfft = next_pow2(n + 2 * (std::size_t)w + 1);
    const Spectrum spec = kernel_spectrum(wavelet.order, s, w, nfft);
    const auto& fx = signal_ffts.at(nfft);
    prod.resize(nfft);
    for (std::size_t i = 0; i < nfft; ++i) prod[i] = fx[i] * (*spec)[i];
    fft_inplace(prod, true);
    std::vector<double> row(n);
    const double inv = 1.0 / s;
    for (std::size_t i = 0; i < n; ++i) row[i] = prod[i].real() * inv;
    field.coefficients[si] = std::move(row);
  }
  return field;
}

CwtField transform_direct(std::span<const double> series, DogWavelet wavelet,
                          std::span<const double> scales) {
  CwtField field = make_field(series, scales);
  const int n = field.n_positions;
  for (std::size_t si = 0; si < field.scales.size(); ++si) {
    const double s = field.scales[si];
    const int w = static_cast<int>(std::ceil(kSupportRadius * s));
    field.half_support[si] = w;
    const std::vector<double> kernel = sampled_kernel(wavelet.order, s, w);
    std::vector<double> row(n, 0.0);
    for (int b = 0; b < n; ++b) {
      const int k_lo = std::max(-w, -b);
      const int k_hi = std::min(w, n - 1 - b);
      double acc = 0.0;
      for (int k = k_lo; k <= k_hi; ++k)
        acc += series[b + k] * kernel[k + w];
      row[b] = acc / s;
    }
    field.coefficients[si] = std::move(row);
  }
  return field;
}

}  // namespace mfrp
