#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mfrp/model.hpp"

namespace mfrp {

struct WindowedSeries {
  std::vector<double> values;  // non-overlapping window sums
  int window = 1;
};

// Consecutive non-overlapping sums of `window` samples; remainder dropped.
WindowedSeries aggregate_windows(std::span<const double> series, int window);

double mean_of(std::span<const double> series);
double variance_of(std::span<const double> series);  // population (1/n)

// Fourth standardized central moment minus 3, population normalization.
double excess_kurtosis(std::span<const double> series);

struct TailCurve {
  std::vector<double> thresholds;       // ascending
  std::vector<double> exceedance_prob;  // empirical P(X > threshold)
};

// Standardizes the series and evaluates the empirical upper tail at
// n_points log-spaced thresholds between the median and the maximum.
TailCurve upper_tail(std::span<const double> series, int n_points);

// P(X > threshold) for the standardized series.
double exceedance_probability(std::span<const double> series, double threshold);

// Gaussian reference P(Z > threshold).
double gaussian_exceedance(double threshold);

struct KurtosisRow {
  int r = 0;
  double alpha = 0.0;
  int window = 1;
  double mean_kurtosis = 0.0;
  double std_kurtosis = 0.0;  // across-realization standard deviation
};

// For each config and window: excess kurtosis of windowed return sums,
// averaged over assets, then mean/std across n_realizations independent
// runs (realization k uses seed cfg.seed + k).
std::vector<KurtosisRow> sweep_kurtosis(const std::vector<ModelConfig>& configs,
                                        const std::vector<int>& windows,
                                        int n_realizations);

}  // namespace mfrp
