#pragma once

#include <span>
#include <vector>

#include "mfrp/model.hpp"
#include "mfrp/structure_function.hpp"
#include "mfrp/wtmm.hpp"

namespace mfrp {

// Additive h calibration fixed against the fractional-noise H=0.5 oracle
// (see `mfrp validate`); reported in every output that carries h values.
// Measured as 0.5 minus the mean raw h(2) of 20 independent 32768-sample
// H=0.5 paths.
inline constexpr double kDefaultCalibration = 0.0066;

struct AnalysisSettings {
  int wavelet_order = 4;
  std::vector<double> q_grid = default_wtmm_q_grid();
  SpectrumSettings spectrum{kDefaultCalibration, std::nullopt, 1.5, 0.005};
};

// Analysis profile: running sum of the mean-removed series. Integrating the
// centered increments keeps a constant drift out of the scaling estimates.
std::vector<double> profile_from_returns(std::span<const double> returns);

// Full modulus-maxima pipeline on a profile/price series.
SingularitySpectrum analyze_series(std::span<const double> profile,
                                   const AnalysisSettings& settings);

struct SpectrumSummary {
  double h_left = 0.0;
  double h_top = 0.0;
  double h_right = 0.0;
  double width = 0.0;
  double hurst = 0.0;
};

struct PanelAnalysis {
  std::vector<SingularitySpectrum> per_asset;
  SpectrumSummary mean;
  SpectrumSummary stddev;  // across assets
};

// Per-asset spectra from the return panel plus across-asset aggregates.
PanelAnalysis analyze_panel(const ReturnPanel& panel,
                            const AnalysisSettings& settings);

SpectrumSummary summary_of(const SingularitySpectrum& spec);

}  // namespace mfrp
