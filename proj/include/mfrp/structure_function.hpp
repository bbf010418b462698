#pragma once

#include <span>
#include <utility>
#include <vector>

namespace mfrp {

// ln S_q(tau) over a (q, tau) grid, S_q(tau) = < |Y(t+tau) - Y(t)|^q >.
// Positive moments only; negative q is the modulus-maxima method's job.
struct SfTable {
  std::vector<double> q_grid;  // ascending, strictly positive
  std::vector<int> tau_grid;   // ascending lags
  std::vector<std::vector<double>> log_sf;  // [q index][tau index]
};

struct ScalingFit {
  double q = 0.0;
  double exponent = 0.0;  // fitted slope of ln S_q vs ln tau, = q h(q)
  double stderr_ = 0.0;
  double r_squared = 0.0;
  int tau_min = 0;
  int tau_max = 0;
};

std::vector<double> default_sf_q_grid();      // 0.5, 1.0, ..., 5.0
std::vector<int> default_sf_tau_grid(int length);  // 16 log-spaced in [4, length/8]

SfTable structure_function(std::span<const double> series,
                           std::span<const double> q_grid,
                           std::span<const int> tau_grid);

// Least-squares line of ln S_q against ln tau for every q, over lags in
// [tau_lo, tau_hi]. Needs at least 3 lags in range.
std::vector<ScalingFit> fit_sf_exponents(const SfTable& table, int tau_lo,
                                         int tau_hi);

// Widest contiguous lag window (>= min_octaves octaves, >= 4 lags)
// maximizing the minimum R^2 over q <= 2; R^2 compared in 0.005 steps so
// near-ties resolve to the wider window. Returns (tau_lo, tau_hi).
std::pair<int, int> auto_sf_fit_range(const SfTable& table,
                                      double min_octaves = 1.5);

struct StationarityResult {
  bool stationary = false;
  std::vector<ScalingFit> fits;
};

// A series is flagged stationary when |exponent(q)| < tol for every q,
// fitted over the full lag grid.
StationarityResult stationarity_check(std::span<const double> returns,
                                      std::span<const double> q_grid,
                                      std::span<const int> tau_grid,
                                      double tol = 0.05);

}  // namespace mfrp
