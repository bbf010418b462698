#include "mfrp/stats.hpp"

#include <algorithm>
#include <cmath>

#include "mfrp/errors.hpp"

namespace mfrp {

WindowedSeries aggregate_windows(std::span<const double> series, int window) {
  if (window < 1) throw ConfigError("aggregate_windows: window must be >= 1");
  const std::size_t n = series.size() / static_cast<std::size_t>(window);
  if (n == 0)
    throw EmptyResult("aggregate_windows: series shorter than window");
  WindowedSeries out;
  out.window = window;
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    const std::size_t base = k * static_cast<std::size_t>(window);
    for (int j = 0; j < window; ++j) s += series[base + j];
    out.values[k] = s;
  }
  return out;
}

double mean_of(std::span<const double> series) {
  double s = 0.0;
  for (double v : series) s += v;
  return s / static_cast<double>(series.size());
}

double variance_of(std::span<const double> series) {
  const double m = mean_of(series);
  double s = 0.0;
  for (double v : series) s += (v - m) * (v - m);
  return s / static_cast<double>(series.size());
}

double excess_kurtosis(std::span<const double> series) {
  if (series.size() < 4)
    throw ConfigError("excess_kurtosis: need at least 4 samples");
  const double m = mean_of(series);
  double m2 = 0.0, m4 = 0.0;
  for (double v : series) {
    const double d = v - m;
    const double d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
  }
  const double n = static_cast<double>(series.size());
  m2 /= n;
  m4 /= n;
  // relative floor: rounding noise of a constant series must not pass
  if (m2 <= 1e-28 * (1.0 + m * m))
    throw ZeroVariance("excess_kurtosis: zero variance");
  return m4 / (m2 * m2) - 3.0;
}

namespace {

std::vector<double> standardized(std::span<const double> series) {
  const double m = mean_of(series);
  const double var = variance_of(series);
  if (var <= 1e-28 * (1.0 + m * m))
    throw ZeroVariance("standardize: zero variance");
  const double sd = std::sqrt(var);
  std::vector<double> out(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) out[i] = (series[i] - m) / sd;
  return out;
}

}  // namespace

TailCurve upper_tail(std::span<const double> series, int n_points) {
  if (series.size() < 100)
    throw ConfigError("upper_tail: need at least 100 samples");
  if (n_points < 2) throw ConfigError("upper_tail: need at least 2 points");

  std::vector<double> z = standardized(series);
  std::sort(z.begin(), z.end());
  const double zmax = z.back();
  double lo = z[z.size() / 2];  // median of the standardized values
  // The median of a centered series sits near zero; keep the log spacing
  // well defined by flooring the start of the grid.
  lo = std::max(lo, std::max(1e-3, 1e-3 * std::abs(zmax)));
  if (!(zmax > lo)) throw ZeroVariance("upper_tail: degenerate upper tail");

  TailCurve curve;
  curve.thresholds.resize(n_points);
  curve.exceedance_prob.resize(n_points);
  const double llo = std::log(lo), lhi = std::log(zmax);
  for (int k = 0; k < n_points; ++k) {
    const double t =
        std::exp(llo + (lhi - llo) * k / static_cast<double>(n_points - 1));
    curve.thresholds[k] = t;
    const auto it = std::upper_bound(z.begin(), z.end(), t);
    curve.exceedance_prob[k] =
        static_cast<double>(z.end() - it) / static_cast<double>(z.size());
  }
  return curve;
}

double exceedance_probability(std::span<const double> series,
                              double threshold) {
  const std::vector<double> z = standardized(series);
  std::size_t count = 0;
  for (double v : z)
    if (v > threshold) ++count;
  return static_cast<double>(count) / static_cast<double>(z.size());
}

double gaussian_exceedance(double threshold) {
  return 0.5 * std::erfc(threshold / std::sqrt(2.0));
}

std::vector<KurtosisRow> sweep_kurtosis(const std::vector<ModelConfig>& configs,
                                        const std::vector<int>& windows,
                                        int n_realizations) {
  if (n_realizations < 2)
    throw ConfigError("sweep_kurtosis: need at least 2 realizations");

  std::vector<KurtosisRow> rows;
  for (const ModelConfig& base : configs) {
    // kurt[w][k]: asset-averaged kurtosis for window w, realization k
    std::vector<std::vector<double>> kurt(windows.size());
    for (int k = 0; k < n_realizations; ++k) {
      ModelConfig cfg = base;
      cfg.seed = base.seed + static_cast<std::uint64_t>(k);
      const ReturnPanel panel = simulate(cfg);
      for (std::size_t wi = 0; wi < windows.size(); ++wi) {
        double acc = 0.0;
        for (int a = 0; a < cfg.n_assets; ++a) {
          const std::vector<double> r = panel.asset_returns(a);
          const WindowedSeries w = aggregate_windows(r, windows[wi]);
          acc += excess_kurtosis(w.values);
        }
        kurt[wi].push_back(acc / cfg.n_assets);
      }
    }
    for (std::size_t wi = 0; wi < windows.size(); ++wi) {
      KurtosisRow row;
      row.r = base.n_random;
      row.alpha = base.alpha;
      row.window = windows[wi];
      row.mean_kurtosis = mean_of(kurt[wi]);
      double ss = 0.0;
      for (double v : kurt[wi]) {
        const double d = v - row.mean_kurtosis;
        ss += d * d;
      }
      row.std_kurtosis = std::sqrt(ss / (n_realizations - 1));
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace mfrp
