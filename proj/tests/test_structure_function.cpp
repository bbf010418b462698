#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mfrp/errors.hpp"
#include "mfrp/rng.hpp"
#include "mfrp/structure_function.hpp"
#include "mfrp/synthetic.hpp"

using namespace mfrp;

namespace {
std::vector<double> ramp(int n) {
  std::vector<double> y(n);
  for (int t = 0; t < n; ++t) y[t] = t;
  return y;
}
}  // namespace

TEST_CASE("linear ramp: S_q(tau) = tau^q exactly") {
  const auto y = ramp(4096);
  const std::vector<double> qs{0.5, 1.0, 2.0, 3.0};
  const std::vector<int> taus{4, 8, 16, 32, 64, 128};
  const SfTable table = structure_function(y, qs, taus);
  for (std::size_t qi = 0; qi < qs.size(); ++qi)
    for (std::size_t ti = 0; ti < taus.size(); ++ti)
      CHECK(table.log_sf[qi][ti] ==
            doctest::Approx(qs[qi] * std::log(taus[ti])).epsilon(1e-12));

  const auto fits = fit_sf_exponents(table, 4, 128);
  for (const ScalingFit& f : fits) {
    CHECK(f.exponent == doctest::Approx(f.q).epsilon(1e-10));
    CHECK(f.stderr_ < 1e-10);
    CHECK(f.r_squared == doctest::Approx(1.0));
  }
}

TEST_CASE("Brownian path: zeta(2) = 1") {
  const FbmSpec spec{0.5, 32768, 77};
  const std::vector<double> y = generate_fbm(spec);
  const std::vector<double> qs{1.0, 2.0, 3.0};
  const auto taus = default_sf_tau_grid((int)y.size());
  const SfTable table = structure_function(y, qs, taus);
  const auto [lo, hi] = auto_sf_fit_range(table);
  for (const ScalingFit& f : fit_sf_exponents(table, lo, hi))
    if (f.q == 2.0) CHECK(f.exponent == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("stationarity: noise is flat, its integral is not") {
  Rng rng(404);
  std::vector<double> noise(16384);
  for (double& v : noise) v = rng.normal();
  const std::vector<double> qs{1.0, 2.0, 3.0};
  const auto taus = default_sf_tau_grid((int)noise.size());

  const StationarityResult flat = stationarity_check(noise, qs, taus);
  CHECK(flat.stationary);
  for (const ScalingFit& f : flat.fits) CHECK(std::abs(f.exponent) < 0.05);

  std::vector<double> walk(noise.size());
  double acc = 0.0;
  for (std::size_t t = 0; t < noise.size(); ++t) {
    acc += noise[t];
    walk[t] = acc;
  }
  const StationarityResult drifting = stationarity_check(walk, qs, taus);
  CHECK(!drifting.stationary);
  for (const ScalingFit& f : drifting.fits)
    if (f.q == 2.0) CHECK(f.exponent == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("amplitude rescaling leaves the exponents unchanged") {
  const FbmSpec spec{0.6, 8192, 11};
  std::vector<double> y = generate_fbm(spec);
  const std::vector<double> qs{1.0, 2.0};
  const std::vector<int> taus{4, 8, 16, 32, 64, 128, 256};
  const SfTable base = structure_function(y, qs, taus);
  for (double& v : y) v *= 413.27;
  const SfTable scaled = structure_function(y, qs, taus);
  const auto f0 = fit_sf_exponents(base, 4, 256);
  const auto f1 = fit_sf_exponents(scaled, 4, 256);
  for (std::size_t i = 0; i < f0.size(); ++i)
    CHECK(std::abs(f0[i].exponent - f1[i].exponent) < 1e-10);
}

TEST_CASE("zeta(q) is non-decreasing in q (moment inequality)") {
  const FbmSpec spec{0.7, 16384, 5};
  const std::vector<double> y = generate_fbm(spec);
  const std::vector<double> qs = default_sf_q_grid();
  const auto taus = default_sf_tau_grid((int)y.size());
  const SfTable table = structure_function(y, qs, taus);
  const auto fits =
      fit_sf_exponents(table, taus.front(), taus.back());
  for (std::size_t i = 0; i + 1 < fits.size(); ++i)
    CHECK(fits[i + 1].exponent >= fits[i].exponent - 0.05);
}

TEST_CASE("monofractal oracle: zeta(q) linear in q") {
  const FbmSpec spec{0.7, 32768, 19};
  const std::vector<double> y = generate_fbm(spec);
  const std::vector<double> qs{1.0, 2.0, 3.0};
  const auto taus = default_sf_tau_grid((int)y.size());
  const SfTable table = structure_function(y, qs, taus);
  const auto [lo, hi] = auto_sf_fit_range(table);
  for (const ScalingFit& f : fit_sf_exponents(table, lo, hi))
    CHECK(f.exponent == doctest::Approx(0.7 * f.q).epsilon(0.15));
}

TEST_CASE("error paths") {
  const std::vector<double> qs{1.0};
  CHECK_THROWS_AS(
      structure_function(std::vector<double>(100, 3.14), qs,
                         std::vector<int>{2, 4, 8}),
      DegenerateIncrements);
  CHECK_THROWS_AS(
      structure_function(ramp(64), qs, std::vector<int>{2, 4, 32}),
      ConfigError);  // 32 > 64/4
  CHECK_THROWS_AS(
      structure_function(ramp(64), std::vector<double>{-1.0},
                         std::vector<int>{2, 4}),
      ConfigError);

  const SfTable table =
      structure_function(ramp(256), qs, std::vector<int>{4, 8, 16});
  CHECK_THROWS_AS(fit_sf_exponents(table, 4, 8), InsufficientRange);
}

TEST_CASE("default grids") {
  const auto qs = default_sf_q_grid();
  REQUIRE(qs.size() == 10);
  CHECK(qs.front() == 0.5);
  CHECK(qs.back() == 5.0);

  const auto taus = default_sf_tau_grid(32768);
  CHECK(taus.front() == 4);
  CHECK(taus.back() == 4096);
  for (std::size_t i = 0; i + 1 < taus.size(); ++i)
    CHECK(taus[i] < taus[i + 1]);
}
