#include "mfrp/synthetic.hpp"

#include <cmath>
#include <complex>

#include "mfrp/errors.hpp"
#include "mfrp/fft.hpp"
#include "mfrp/rng.hpp"

namespace mfrp {

double fgn_autocovariance(double hurst, int lag) {
  const double k = std::abs(static_cast<double>(lag));
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) +
                std::pow(std::abs(k - 1.0), h2));
}

std::vector<double> generate_fgn(const FbmSpec& spec) {
  if (!(spec.hurst > 0.0 && spec.hurst < 1.0))
    throw ConfigError("generate_fgn: hurst must lie strictly inside (0, 1)");
  if (spec.length < 2) throw ConfigError("generate_fgn: length must be >= 2");

  const std::size_t n = static_cast<std::size_t>(spec.length);
  const std::size_t m = next_pow2(2 * n);

  // first row of the circulant embedding of the fGn covariance
  std::vector<std::complex<double>> c(m);
  for (std::size_t j = 0; j <= m / 2; ++j)
    c[j] = fgn_autocovariance(spec.hurst, static_cast<int>(j));
  for (std::size_t j = m / 2 + 1; j < m; ++j) c[j] = c[m - j];

  fft_inplace(c, false);  // circulant eigenvalues, real and (near) nonnegative

  Rng rng(spec.seed);
  std::vector<std::complex<double>> w(m);
  const double half = std::sqrt(0.5);
  w[0] = rng.normal();
  w[m / 2] = rng.normal();
  for (std::size_t k = 1; k < m / 2; ++k) {
    const double u = rng.normal() * half;
    const double v = rng.normal() * half;
    w[k] = {u, v};
    w[m - k] = {u, -v};
  }

  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
  for (std::size_t k = 0; k < m; ++k) {
    const double lam = std::max(c[k].real(), 0.0);  // clamp rounding noise
    w[k] *= std::sqrt(lam);
  }
  fft_inplace(w, false);

  std::vector<double> fgn(n);
  for (std::size_t i = 0; i < n; ++i) fgn[i] = w[i].real() * inv_sqrt_m;
  return fgn;
}

std::vector<double> generate_fbm(const FbmSpec& spec) {
  std::vector<double> path = generate_fgn(spec);
  double acc = 0.0;
  for (double& v : path) {
    acc += v;
    v = acc;
  }
  return path;
}

std::vector<double> generate_cascade(const CascadeSpec& spec) {
  if (!(spec.p > 0.5 && spec.p < 1.0))
    throw ConfigError("generate_cascade: p must lie in (0.5, 1)");
  if (spec.depth < 1 || spec.depth > 26)
    throw ConfigError("generate_cascade: depth must lie in [1, 26]");

  Rng rng(spec.seed);
  std::vector<double> mass{1.0};
  for (int d = 0; d < spec.depth; ++d) {
    std::vector<double> next(mass.size() * 2);
    for (std::size_t i = 0; i < mass.size(); ++i) {
      const bool p_left = rng.uniform() < 0.5;
      const double left = p_left ? spec.p : 1.0 - spec.p;
      next[2 * i] = mass[i] * left;
      next[2 * i + 1] = mass[i] * (1.0 - left);
    }
    mass = std::move(next);
  }
  return mass;
}

double cascade_tau_q(double p, double q) {
  return -std::log2(std::pow(p, q) + std::pow(1.0 - p, q));
}

double cascade_h_of_q(double p, double q) {
  const double pq = std::pow(p, q), rq = std::pow(1.0 - p, q);
  return -(pq * std::log(p) + rq * std::log(1.0 - p)) /
         ((pq + rq) * std::log(2.0));
}

double cascade_d_of_q(double p, double q) {
  return q * cascade_h_of_q(p, q) - cascade_tau_q(p, q);
}

double cascade_width(double p) { return std::log2(p / (1.0 - p)); }

}  // namespace mfrp
