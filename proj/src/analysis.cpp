#include "mfrp/analysis.hpp"

#include <cmath>
#include <string>

#include "mfrp/errors.hpp"
#include "mfrp/stats.hpp"

namespace mfrp {

std::vector<double> profile_from_returns(std::span<const double> returns) {
  const double m = mean_of(returns);
  std::vector<double> profile(returns.size());
  double acc = 0.0;
  for (std::size_t t = 0; t < returns.size(); ++t) {
    acc += returns[t] - m;
    profile[t] = acc;
  }
  return profile;
}

SingularitySpectrum analyze_series(std::span<const double> profile,
                                   const AnalysisSettings& settings) {
  const std::vector<double> scales =
      default_scales(static_cast<int>(profile.size()));
  const CwtField field =
      transform(profile, DogWavelet{settings.wavelet_order}, scales);
  const auto maxima = find_maxima(field);
  const auto lines = chain_maxima(maxima, field.scales);
  const PartitionTable table =
      partition_functions(lines, settings.q_grid, field.scales);
  return fit_spectrum(table, settings.spectrum);
}

SpectrumSummary summary_of(const SingularitySpectrum& spec) {
  return {spec.h_left, spec.h_top, spec.h_right, spec.width, spec.hurst};
}

PanelAnalysis analyze_panel(const ReturnPanel& panel,
                            const AnalysisSettings& settings) {
  PanelAnalysis out;
  const int n_assets = static_cast<int>(panel.returns.cols());
  for (int a = 0; a < n_assets; ++a) {
    try {
      const std::vector<double> profile =
          profile_from_returns(panel.asset_returns(a));
      out.per_asset.push_back(analyze_series(profile, settings));
    } catch (const Error& e) {
      throw Error("asset " + std::to_string(a) + ": " + e.what());
    }
  }

  const double n = static_cast<double>(out.per_asset.size());
  auto accumulate = [&](auto field_of) {
    double m = 0.0;
    for (const auto& s : out.per_asset) m += field_of(s);
    m /= n;
    double ss = 0.0;
    for (const auto& s : out.per_asset) {
      const double d = field_of(s) - m;
      ss += d * d;
    }
    return std::pair<double, double>{m, std::sqrt(ss / n)};
  };

  auto [hl_m, hl_s] = accumulate([](const auto& s) { return s.h_left; });
  auto [ht_m, ht_s] = accumulate([](const auto& s) { return s.h_top; });
  auto [hr_m, hr_s] = accumulate([](const auto& s) { return s.h_right; });
  auto [w_m, w_s] = accumulate([](const auto& s) { return s.width; });
  auto [hu_m, hu_s] = accumulate([](const auto& s) { return s.hurst; });
  out.mean = {hl_m, ht_m, hr_m, w_m, hu_m};
  out.stddev = {hl_s, ht_s, hr_s, w_s, hu_s};
  return out;
}

}  // namespace mfrp
