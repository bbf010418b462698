#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "mfrp/fft.hpp"
#include "mfrp/rng.hpp"

using namespace mfrp;

TEST_CASE("rng streams are reproducible and seed-sensitive") {
  Rng a(42), b(42), c(43);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t x = a.next_u64(), y = b.next_u64(), z = c.next_u64();
    all_equal = all_equal && (x == y);
    any_diff = any_diff || (x != z);
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("uniform lands in [0,1) with mean 1/2") {
  Rng rng(7);
  double sum = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / 200000 - 0.5) < 0.005);
}

TEST_CASE("normal moments match a standard Gaussian") {
  Rng rng(11);
  const int n = 1000000;
  double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    m1 += x;
    m2 += x * x;
    m3 += x * x * x;
    m4 += x * x * x * x;
  }
  m1 /= n;
  m2 /= n;
  m3 /= n;
  m4 /= n;
  CHECK(std::abs(m1) < 0.01);
  CHECK(std::abs(m2 - 1.0) < 0.01);
  CHECK(std::abs(m3) < 0.02);
  CHECK(std::abs(m4 - 3.0) < 0.05);
}

TEST_CASE("fft matches a naive dft") {
  Rng rng(3);
  const std::size_t n = 256;
  std::vector<std::complex<double>> a(n);
  for (auto& z : a) z = {rng.normal(), rng.normal()};

  std::vector<std::complex<double>> naive(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = -2.0 * M_PI * double(k * t % n) / double(n);
      acc += a[t] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    naive[k] = acc;
  }

  std::vector<std::complex<double>> fast = a;
  fft_inplace(fast, false);
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    worst = std::max(worst, std::abs(fast[k] - naive[k]));
  CHECK(worst < 1e-10 * n);
}

TEST_CASE("fft inverse round-trips") {
  Rng rng(5);
  std::vector<std::complex<double>> a(1024);
  for (auto& z : a) z = {rng.normal(), rng.normal()};
  auto b = a;
  fft_inplace(b, false);
  fft_inplace(b, true);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  CHECK(worst < 1e-12);
}

TEST_CASE("cross_correlate equals the direct sum") {
  Rng rng(9);
  const int n = 300, w = 17;
  std::vector<double> x(n), kernel(2 * w + 1);
  for (double& v : x) v = rng.normal();
  for (double& v : kernel) v = rng.normal();

  const std::vector<double> fast = cross_correlate(x, kernel, -w);
  for (int b = 0; b < n; b += 7) {
    double acc = 0.0;
    for (int k = -w; k <= w; ++k)
      if (b + k >= 0 && b + k < n) acc += x[b + k] * kernel[k + w];
    CHECK(std::abs(fast[b] - acc) < 1e-10);
  }
}
