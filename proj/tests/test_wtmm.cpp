#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mfrp/analysis.hpp"
#include "mfrp/errors.hpp"
#include "mfrp/rng.hpp"
#include "mfrp/synthetic.hpp"
#include "mfrp/wtmm.hpp"

using namespace mfrp;

namespace {

// hand-built field: one row per scale, tiny support masks
CwtField make_field(const std::vector<std::vector<double>>& rows) {
  CwtField f;
  f.n_positions = static_cast<int>(rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    f.scales.push_back(4.0 + i);
    f.coefficients.push_back(rows[i]);
    f.half_support.push_back(1);
  }
  return f;
}

}  // namespace

TEST_CASE("find_maxima picks strict interior maxima") {
  const CwtField f = make_field({{0, 1, 3, 1, 0, 2, 5, 2, 0, 0}});
  const auto maxima = find_maxima(f);
  REQUIRE(maxima[0].size() == 2);
  CHECK(maxima[0][0].position == 2);
  CHECK(maxima[0][1].position == 6);
  CHECK(maxima[0][1].modulus == 5.0);
}

TEST_CASE("negative lobes count through the modulus") {
  const CwtField f = make_field({{0, -1, -4, -1, 0, 0, 0, 0, 0, 0}});
  const auto maxima = find_maxima(f);
  REQUIRE(maxima[0].size() == 1);
  CHECK(maxima[0][0].position == 2);
  CHECK(maxima[0][0].modulus == 4.0);
}

TEST_CASE("plateaus keep the leftmost point only") {
  const CwtField f = make_field({{0, 1, 3, 3, 3, 1, 0, 0, 0, 0}});
  const auto maxima = find_maxima(f);
  REQUIRE(maxima[0].size() == 1);
  CHECK(maxima[0][0].position == 2);
}

TEST_CASE("constant rows and sub-floor bumps yield no maxima") {
  const CwtField flat = make_field({{2, 2, 2, 2, 2, 2, 2, 2, 2, 2}});
  CHECK(find_maxima(flat)[0].empty());

  const CwtField tiny =
      make_field({{0, 1e-20, 0, 0, 1.0, 2.0, 1.0, 0, 0, 0}});
  const auto maxima = find_maxima(tiny);
  REQUIRE(maxima[0].size() == 1);  // the 1e-20 bump sits below the floor
  CHECK(maxima[0][0].position == 5);
}

TEST_CASE("chaining follows an impulse cone and keeps sup-modulus") {
  const int n = 4096, t0 = 2048;
  std::vector<double> y(n, 0.0);
  y[t0] = 1.0;
  std::vector<double> scales;
  for (double s = 4.0; s <= 64.0; s *= std::pow(2.0, 0.25))
    scales.push_back(s);
  const CwtField field = transform(y, DogWavelet{4}, scales);
  const auto lines = chain_maxima(find_maxima(field), field.scales);
  REQUIRE(!lines.empty());

  // the dominant line tracks the impulse
  const MaximaLine* best = &lines.front();
  for (const MaximaLine& l : lines)
    if (l.sup_modulus.back() > best->sup_modulus.back()) best = &l;
  for (const MaximaPoint& p : best->points)
    CHECK(std::abs(p.position - t0) <= 2);

  for (const MaximaLine& l : lines) {
    REQUIRE(l.points.size() >= 3);
    REQUIRE(l.points.size() == l.sup_modulus.size());
    for (std::size_t k = 0; k + 1 < l.points.size(); ++k) {
      REQUIRE(l.points[k + 1].scale_idx == l.points[k].scale_idx + 1);
      REQUIRE(l.sup_modulus[k + 1] >= l.sup_modulus[k]);
      const int window =
          (int)std::ceil(field.scales[l.points[k + 1].scale_idx]);
      REQUIRE(std::abs(l.points[k + 1].position - l.points[k].position) <=
              window);
    }
  }
}

TEST_CASE("two distant impulses produce two separated line bundles") {
  const int n = 4096;
  const int t0 = 1000, t1 = 3100;
  std::vector<double> y(n, 0.0);
  y[t0] = 1.0;
  y[t1] = -1.3;
  std::vector<double> scales;
  for (double s = 4.0; s <= 32.0; s *= std::pow(2.0, 0.25))
    scales.push_back(s);
  const CwtField field = transform(y, DogWavelet{4}, scales);
  const auto lines = chain_maxima(find_maxima(field), field.scales);

  int near_t0 = 0, near_t1 = 0;
  for (const MaximaLine& l : lines) {
    const int pos = l.points.front().position;
    const bool in_cone0 = std::abs(pos - t0) <= 8 * 32;
    const bool in_cone1 = std::abs(pos - t1) <= 8 * 32;
    REQUIRE((in_cone0 || in_cone1));
    if (std::abs(l.points.front().position - t0) <= 2) ++near_t0;
    if (std::abs(l.points.front().position - t1) <= 2) ++near_t1;
  }
  CHECK(near_t0 == 1);
  CHECK(near_t1 == 1);
}

TEST_CASE("maxima thin out with scale on noise") {
  Rng rng(31);
  std::vector<double> y(8192);
  double acc = 0.0;
  for (double& v : y) {
    acc += rng.normal();
    v = acc;
  }
  std::vector<double> scales{4.0, 8.0, 16.0, 32.0, 64.0, 128.0};
  const CwtField field = transform(y, DogWavelet{4}, scales);
  const auto maxima = find_maxima(field);
  for (std::size_t si = 0; si + 1 < scales.size(); ++si)
    CHECK(maxima[si].size() > maxima[si + 1].size());
}

TEST_CASE("partition functions match a naive oracle") {
  Rng rng(505);
  for (int rep = 0; rep < 100; ++rep) {
    const int n_scales = 4;
    const int n_lines = 2 + (int)(rng.uniform() * 25);
    std::vector<double> scales{4.0, 8.0, 16.0, 32.0};
    std::vector<MaximaLine> lines(n_lines);
    for (int li = 0; li < n_lines; ++li) {
      double sup = 0.0;
      for (int s = 0; s < n_scales; ++s) {
        const double mod = std::exp(1.5 * rng.normal());
        sup = std::max(sup, mod);
        lines[li].points.push_back({s, li * 7, mod});
        lines[li].sup_modulus.push_back(sup);
      }
    }
    const std::vector<double> qs{-4.0, -2.0, -0.5, 0.5, 1.0, 3.0};
    const PartitionTable table = partition_functions(lines, qs, scales);
    REQUIRE(table.tau_values.size() == 4);

    for (std::size_t ti = 0; ti < 4; ++ti) {
      REQUIRE(table.counts[ti] == n_lines);
      for (std::size_t qi = 0; qi < qs.size(); ++qi) {
        // naive evaluation with plain powers
        double norm = 0.0;
        for (const auto& l : lines)
          norm += std::pow(l.sup_modulus[ti], qs[qi]);
        double z = 0.0, z_star = 0.0;
        for (const auto& l : lines) {
          const double what = std::pow(l.sup_modulus[ti], qs[qi]) / norm;
          z += what * std::log(l.sup_modulus[ti]);
          z_star += what * std::log(what);
        }
        const double tol = 1e-12 * std::max(1.0, std::abs(z));
        CHECK(std::abs(table.z[qi][ti] - z) <= tol);
        const double tol2 = 1e-12 * std::max(1.0, std::abs(z_star));
        CHECK(std::abs(table.z_star[qi][ti] - z_star) <= tol2);
        CHECK(table.z_star[qi][ti] <= 1e-15);
      }
    }
  }
}

TEST_CASE("q = 0 reduces to uniform weights exactly") {
  std::vector<double> scales{4.0, 8.0, 16.0, 32.0};
  std::vector<MaximaLine> lines(5);
  Rng rng(3);
  for (int li = 0; li < 5; ++li) {
    double sup = 0.0;
    for (int s = 0; s < 4; ++s) {
      const double mod = std::exp(rng.normal());
      sup = std::max(sup, mod);
      lines[li].points.push_back({s, li, mod});
      lines[li].sup_modulus.push_back(sup);
    }
  }
  const PartitionTable table =
      partition_functions(lines, std::vector<double>{0.0}, scales);
  for (std::size_t ti = 0; ti < table.tau_values.size(); ++ti) {
    CHECK(table.z_star[0][ti] == -std::log(5.0));
    double mean_log = 0.0;
    for (const auto& l : lines) mean_log += std::log(l.sup_modulus[ti]);
    CHECK(table.z[0][ti] == doctest::Approx(mean_log / 5.0).epsilon(1e-14));
  }
}

TEST_CASE("scales crossed by fewer than two lines are dropped") {
  std::vector<double> scales{4.0, 8.0, 16.0};
  std::vector<MaximaLine> lines(2);
  for (int li = 0; li < 2; ++li)
    for (int s = 0; s < (li == 0 ? 3 : 2); ++s) {
      lines[li].points.push_back({s, li, 1.0 + li});
      lines[li].sup_modulus.push_back(1.0 + li);
    }
  const PartitionTable table =
      partition_functions(lines, std::vector<double>{1.0}, scales);
  REQUIRE(table.tau_values.size() == 2);  // the last scale has one line
  CHECK(table.scale_indices == std::vector<int>{0, 1});
}

TEST_CASE("fit_spectrum on an exactly scaling synthetic table") {
  // every line carries modulus tau^0.7; the line count halves per octave
  std::vector<double> scales;
  for (int k = 0; k < 16; ++k) scales.push_back(4.0 * std::pow(2.0, k / 4.0));
  std::vector<MaximaLine> lines;
  const int base_count = 512;
  for (int li = 0; li < base_count; ++li) {
    // line li survives up to a death scale so counts decay like 1/tau
    const int death = 15 - (int)(std::log2((li % 256) + 2.0) * 4.0 / 2.0);
    MaximaLine l;
    double sup = 0.0;
    for (int s = 0; s <= std::max(2, death); ++s) {
      const double mod = std::pow(scales[s], 0.7);
      sup = std::max(sup, mod);
      l.points.push_back({s, li, mod});
      l.sup_modulus.push_back(sup);
    }
    lines.push_back(std::move(l));
  }
  const PartitionTable table =
      partition_functions(lines, default_wtmm_q_grid(), scales);
  SpectrumSettings settings;
  const SingularitySpectrum spec = fit_spectrum(table, settings);
  // identical moduli at each scale: weights uniform, h(q) = 0.7 for all q
  CHECK(spec.hurst == doctest::Approx(0.7).epsilon(0.01));
  CHECK(spec.width < 0.02);
  CHECK(spec.h_left == doctest::Approx(0.7).epsilon(0.02));
  CHECK(spec.h_right == doctest::Approx(0.7).epsilon(0.02));
  CHECK(spec.h_top == doctest::Approx(0.7).epsilon(0.02));
}

TEST_CASE("amplitude invariance: power-of-two rescaling shifts nothing") {
  const FbmSpec spec{0.5, 8192, 2027};
  std::vector<double> y = generate_fbm(spec);
  AnalysisSettings settings;
  const SingularitySpectrum base = analyze_series(y, settings);
  for (double& v : y) v *= 1024.0;  // exact in floating point
  const SingularitySpectrum scaled = analyze_series(y, settings);
  CHECK(std::abs(base.hurst - scaled.hurst) < 1e-9);
  CHECK(std::abs(base.width - scaled.width) < 1e-9);
  for (std::size_t i = 0; i < base.fits.size(); ++i)
    CHECK(std::abs(base.fits[i].d - scaled.fits[i].d) < 1e-9);
}

TEST_CASE("monofractal collapse and spectrum geometry on Brownian motion") {
  const FbmSpec spec{0.5, 32768, 909};
  const std::vector<double> y = generate_fbm(spec);
  AnalysisSettings settings;
  const SingularitySpectrum s = analyze_series(y, settings);
  CHECK(s.h_range(3.0) < 0.25);
  CHECK(s.hurst == doctest::Approx(0.5).epsilon(0.15));
  CHECK(s.h_left <= s.h_top + 1e-12);
  CHECK(s.h_top <= s.h_right + 1e-12);
  CHECK(s.width >= 0.0);
  CHECK(s.d_apex <= 1.1 + 0.1);
  // h(q) non-increasing within fit noise
  for (std::size_t i = 0; i + 1 < s.fits.size(); ++i)
    CHECK(s.fits[i + 1].h <= s.fits[i].h + 0.02);
}

TEST_CASE("cascade oracle: wide spectrum with a unit apex") {
  const CascadeSpec cspec{0.7, 15, 11};
  const std::vector<double> mass = generate_cascade(cspec);
  const std::vector<double> profile = profile_from_returns(mass);
  AnalysisSettings settings;
  const SingularitySpectrum s = analyze_series(profile, settings);
  CHECK(s.width == doctest::Approx(cascade_width(0.7)).epsilon(0.25));
  CHECK(s.d_apex > 0.8);
  CHECK(s.d_apex < 1.2);
  CHECK(s.h_left == doctest::Approx(cascade_h_of_q(0.7, 5.0)).epsilon(0.3));
  for (std::size_t i = 0; i + 1 < s.fits.size(); ++i)
    CHECK(s.fits[i + 1].h <= s.fits[i].h + 0.02);
}

TEST_CASE("explicit fit range restricts the scales used") {
  const FbmSpec spec{0.5, 8192, 4};
  const std::vector<double> y = generate_fbm(spec);
  AnalysisSettings settings;
  settings.spectrum.fit_range = {{8.0, 128.0}};
  const SingularitySpectrum s = analyze_series(y, settings);
  CHECK(s.fit_tau_lo >= 8.0);
  CHECK(s.fit_tau_hi <= 128.0);

  settings.spectrum.fit_range = {{8.0, 10.0}};
  CHECK_THROWS_AS(analyze_series(y, settings), InsufficientRange);
}
