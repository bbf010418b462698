#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mfrp/analysis.hpp"

namespace mfrp {

struct SweepConfig {
  std::vector<double> alpha_grid{0.0, 0.001, 0.005, 0.01, 0.05, 0.1, 0.5, 1.0};
  std::vector<int> r_values{1, 2, 5, 10};
  int n_realizations = 10;
  std::uint64_t base_seed = 20080808ULL;

  int n_assets = 10;
  int n_main = 5;
  int n_steps = 32768;
  int transient = 16384;
  double target_var = 1.0;

  int wavelet_order = 4;
  double calibration = kDefaultCalibration;
  std::optional<std::pair<double, double>> fit_range;
  std::vector<int> kurtosis_windows{1, 10, 100};

  int jobs = 0;  // 0: hardware concurrency
  std::string out_dir;

  // Merge keys from a sectioned key=value file; unknown keys are an error.
  void apply(const std::map<std::string, std::string>& kv);
  void validate() const;
};

// Deterministic per-cell seed schedule:
// base_seed XOR SplitMix64(mix(alpha_idx, r_idx, realization)).
std::uint64_t cell_seed(std::uint64_t base_seed, int alpha_idx, int r_idx,
                        int realization);

// Fixed standardized thresholds used for the tail curves written by the
// sweep (realization averaging needs a common grid).
const std::vector<double>& sweep_tail_thresholds();

struct GroupAggregate {
  double alpha = 0.0;
  int r = 0;
  int n_ok = 0;  // realizations that completed

  // per kurtosis window: mean and across-realization sample std
  std::vector<double> kurt_mean, kurt_std;
  SpectrumSummary spec_mean, spec_std;
  double sf_max_abs_exponent = 0.0;  // worst return-series SF exponent
  double price_zeta2_mean = 0.0;     // price SF exponent at q=2
  double price_zeta2_std = 0.0;

  std::vector<double> h_mean, h_std, d_mean, d_std;  // per q over the grid
};

struct SweepResult {
  std::vector<GroupAggregate> groups;  // r-major, alpha-minor order
  std::vector<double> q_grid;
  int n_cells = 0;
  int n_failed = 0;
  double wall_seconds = 0.0;
  std::string out_dir;

  const GroupAggregate& group(int r, double alpha) const;
};

// Runs the full grid (simulate + kurtosis/tails + structure-function screen
// + modulus-maxima analysis per realization), writes CSV tables, SVG plots
// and a checksum manifest under cfg.out_dir, and returns the aggregates.
SweepResult run_sweep(const SweepConfig& cfg);

}  // namespace mfrp
