#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "mfrp/errors.hpp"
#include "mfrp/linfit.hpp"
#include "mfrp/synthetic.hpp"

using namespace mfrp;

namespace {

double sample_autocov(const std::vector<double>& x, int lag) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= x.size();
  double acc = 0.0;
  for (std::size_t t = 0; t + lag < x.size(); ++t)
    acc += (x[t] - m) * (x[t + lag] - m);
  return acc / (x.size() - lag);
}

}  // namespace

TEST_CASE("fgn autocovariance matches the analytic form") {
  for (double hurst : {0.3, 0.5, 0.7}) {
    const FbmSpec spec{hurst, 1000000, 12345};
    const std::vector<double> fgn = generate_fgn(spec);
    const double var = sample_autocov(fgn, 0);
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
    for (int lag = 1; lag <= 10; ++lag) {
      const double got = sample_autocov(fgn, lag) / var;
      const double want = fgn_autocovariance(hurst, lag);
      CHECK(std::abs(got - want) < 0.02);
    }
  }
}

TEST_CASE("lag-1 increment correlation: 2^(2H-1) - 1") {
  const double cases[3][2] = {
      {0.5, 0.0}, {0.7, 0.31951}, {0.3, -0.24214}};
  for (const auto& c : cases) {
    const FbmSpec spec{c[0], 500000, 777};
    const std::vector<double> fgn = generate_fgn(spec);
    const double rho1 = sample_autocov(fgn, 1) / sample_autocov(fgn, 0);
    CHECK(std::abs(rho1 - c[1]) < 0.02);
  }
}

TEST_CASE("fbm increments scale as tau^2H") {
  for (double hurst : {0.3, 0.7}) {
    const FbmSpec spec{hurst, 32768, 515};
    const std::vector<double> path = generate_fbm(spec);
    std::vector<double> lx, ly;
    for (int tau = 1; tau <= 256; tau *= 2) {
      double acc = 0.0;
      long n = 0;
      for (std::size_t t = 0; t + tau < path.size(); ++t) {
        const double d = path[t + tau] - path[t];
        acc += d * d;
        ++n;
      }
      lx.push_back(std::log((double)tau));
      ly.push_back(std::log(acc / n));
    }
    const LinearFit fit = fit_line(lx, ly);
    CHECK(fit.slope == doctest::Approx(2.0 * hurst).epsilon(0.05 / hurst));
  }
}

TEST_CASE("fbm path starts at the first increment and is deterministic") {
  const FbmSpec spec{0.6, 1024, 99};
  const std::vector<double> a = generate_fbm(spec);
  const std::vector<double> b = generate_fbm(spec);
  CHECK(a == b);
  const std::vector<double> fgn = generate_fgn(spec);
  CHECK(a[0] == fgn[0]);

  FbmSpec other = spec;
  other.seed = 100;
  CHECK(generate_fbm(other) != a);

  CHECK_THROWS_AS(generate_fgn(FbmSpec{1.0, 100, 1}), ConfigError);
  CHECK_THROWS_AS(generate_fgn(FbmSpec{0.0, 100, 1}), ConfigError);
}

TEST_CASE("cascade at depth 1 is {p, 1-p} shuffled") {
  int saw_p_first = 0;
  for (int seed = 0; seed < 40; ++seed) {
    const CascadeSpec spec{0.7, 1, (std::uint64_t)seed};
    const std::vector<double> m = generate_cascade(spec);
    REQUIRE(m.size() == 2);
    const bool p_first = m[0] == 0.7 && m[1] == doctest::Approx(0.3);
    const bool p_second = m[1] == 0.7 && m[0] == doctest::Approx(0.3);
    REQUIRE((p_first || p_second));
    if (p_first) ++saw_p_first;
  }
  CHECK(saw_p_first > 5);
  CHECK(saw_p_first < 35);
}

TEST_CASE("cascade mass is conserved at every depth") {
  for (int depth : {3, 8, 15}) {
    const CascadeSpec spec{0.7, depth, 4242};
    const std::vector<double> m = generate_cascade(spec);
    REQUIRE((int)m.size() == (1 << depth));
    const double total = std::accumulate(m.begin(), m.end(), 0.0);
    CHECK(std::abs(total - 1.0) < 1e-12);
    for (double v : m) REQUIRE(v > 0.0);
  }
  CHECK_THROWS_AS(generate_cascade(CascadeSpec{0.5, 4, 1}), ConfigError);
  CHECK_THROWS_AS(generate_cascade(CascadeSpec{0.7, 0, 1}), ConfigError);
}

TEST_CASE("cascade analytic references") {
  CHECK(cascade_tau_q(0.7, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cascade_tau_q(0.7, 0.0) == doctest::Approx(-1.0));
  CHECK(cascade_d_of_q(0.7, 0.0) == doctest::Approx(1.0));
  CHECK(cascade_width(0.7) == doctest::Approx(std::log2(7.0 / 3.0)));
  // extreme-q Hoelder limits: -log2(p) and -log2(1-p)
  CHECK(cascade_h_of_q(0.7, 40.0) ==
        doctest::Approx(-std::log2(0.7)).epsilon(1e-6));
  CHECK(cascade_h_of_q(0.7, -40.0) ==
        doctest::Approx(-std::log2(0.3)).epsilon(1e-6));
  // h is non-increasing in q
  for (double q = -5.0; q < 5.0; q += 0.5)
    CHECK(cascade_h_of_q(0.7, q + 0.5) < cascade_h_of_q(0.7, q));
}
