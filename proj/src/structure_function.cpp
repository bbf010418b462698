#include "mfrp/structure_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mfrp/errors.hpp"
#include "mfrp/linfit.hpp"

namespace mfrp {

std::vector<double> default_sf_q_grid() {
  std::vector<double> q;
  for (int k = 1; k <= 10; ++k) q.push_back(0.5 * k);
  return q;
}

std::vector<int> default_sf_tau_grid(int length) {
  if (length < 64)
    throw ConfigError("default_sf_tau_grid: series too short");
  const double lo = 4.0, hi = length / 8.0;
  std::vector<int> taus;
  const int n_points = 16;
  for (int k = 0; k < n_points; ++k) {
    const double t = lo * std::pow(hi / lo, k / double(n_points - 1));
    const int ti = static_cast<int>(std::lround(t));
    if (taus.empty() || ti > taus.back()) taus.push_back(ti);
  }
  return taus;
}

SfTable structure_function(std::span<const double> series,
                           std::span<const double> q_grid,
                           std::span<const int> tau_grid) {
  const int n = static_cast<int>(series.size());
  if (q_grid.empty() || tau_grid.empty())
    throw ConfigError("structure_function: empty grid");
  for (double q : q_grid)
    if (!(q > 0.0))
      throw ConfigError("structure_function: q must be positive");
  for (std::size_t i = 0; i + 1 < tau_grid.size(); ++i)
    if (tau_grid[i] >= tau_grid[i + 1])
      throw ConfigError("structure_function: tau grid must be ascending");
  if (tau_grid.front() < 1 || tau_grid.back() > n / 4)
    throw ConfigError("structure_function: lags must lie in [1, length/4]");

  SfTable table;
  table.q_grid.assign(q_grid.begin(), q_grid.end());
  table.tau_grid.assign(tau_grid.begin(), tau_grid.end());
  table.log_sf.assign(q_grid.size(),
                      std::vector<double>(tau_grid.size(), 0.0));

  std::vector<double> log_abs;
  for (std::size_t ti = 0; ti < tau_grid.size(); ++ti) {
    const int tau = tau_grid[ti];
    const int m = n - tau;
    log_abs.clear();
    log_abs.reserve(m);
    bool any_nonzero = false;
    for (int t = 0; t < m; ++t) {
      const double d = std::abs(series[t + tau] - series[t]);
      if (d > 0.0) any_nonzero = true;
      log_abs.push_back(d > 0.0 ? std::log(d) : -std::numeric_limits<double>::infinity());
    }
    if (!any_nonzero)
      throw DegenerateIncrements(
          "structure_function: all increments zero at tau " +
          std::to_string(tau));
    for (std::size_t qi = 0; qi < q_grid.size(); ++qi) {
      const double q = q_grid[qi];
      double acc = 0.0;
      for (double la : log_abs)
        acc += std::isfinite(la) ? std::exp(q * la) : 0.0;
      table.log_sf[qi][ti] = std::log(acc / m);
    }
  }
  return table;
}

namespace {

std::vector<ScalingFit> fit_over_indices(const SfTable& table,
                                         std::size_t lo, std::size_t hi) {
  std::vector<double> x;
  for (std::size_t k = lo; k <= hi; ++k)
    x.push_back(std::log(double(table.tau_grid[k])));
  std::vector<ScalingFit> fits;
  for (std::size_t qi = 0; qi < table.q_grid.size(); ++qi) {
    std::vector<double> y(table.log_sf[qi].begin() + lo,
                          table.log_sf[qi].begin() + hi + 1);
    const LinearFit f = fit_line(x, y);
    ScalingFit sf;
    sf.q = table.q_grid[qi];
    sf.exponent = f.slope;
    sf.stderr_ = f.slope_stderr;
    sf.r_squared = f.r_squared;
    sf.tau_min = table.tau_grid[lo];
    sf.tau_max = table.tau_grid[hi];
    fits.push_back(sf);
  }
  return fits;
}

}  // namespace

std::vector<ScalingFit> fit_sf_exponents(const SfTable& table, int tau_lo,
                                         int tau_hi) {
  std::size_t lo = table.tau_grid.size(), hi = 0;
  for (std::size_t k = 0; k < table.tau_grid.size(); ++k) {
    if (table.tau_grid[k] >= tau_lo && table.tau_grid[k] <= tau_hi) {
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
  }
  if (lo >= table.tau_grid.size() || hi < lo + 2)
    throw InsufficientRange("fit_sf_exponents: fewer than 3 lags in range");
  return fit_over_indices(table, lo, hi);
}

std::pair<int, int> auto_sf_fit_range(const SfTable& table,
                                      double min_octaves) {
  const std::size_t nt = table.tau_grid.size();
  if (nt < 4) throw InsufficientRange("auto_sf_fit_range: too few lags");

  std::vector<std::size_t> q_sel;
  for (std::size_t qi = 0; qi < table.q_grid.size(); ++qi)
    if (table.q_grid[qi] <= 2.0 + 1e-12) q_sel.push_back(qi);
  if (q_sel.empty()) q_sel.push_back(0);

  long best_bucket = -1;
  double best_oct = -1.0;
  std::pair<std::size_t, std::size_t> best{0, nt - 1};
  for (std::size_t i = 0; i < nt; ++i) {
    for (std::size_t j = i + 3; j < nt; ++j) {
      const double oct =
          std::log2(double(table.tau_grid[j]) / table.tau_grid[i]);
      if (oct < min_octaves) continue;
      std::vector<double> x;
      for (std::size_t k = i; k <= j; ++k)
        x.push_back(std::log(double(table.tau_grid[k])));
      double min_r2 = 1.0;
      for (std::size_t qi : q_sel) {
        std::vector<double> y(table.log_sf[qi].begin() + i,
                              table.log_sf[qi].begin() + j + 1);
        min_r2 = std::min(min_r2, fit_line(x, y).r_squared);
      }
      const long bucket = static_cast<long>(min_r2 / 0.005);
      if (bucket > best_bucket ||
          (bucket == best_bucket && oct > best_oct)) {
        best_bucket = bucket;
        best_oct = oct;
        best = {i, j};
      }
    }
  }
  if (best_bucket < 0)
    throw InsufficientRange("auto_sf_fit_range: no window spans the minimum octaves");
  return {table.tau_grid[best.first], table.tau_grid[best.second]};
}

StationarityResult stationarity_check(std::span<const double> returns,
                                      std::span<const double> q_grid,
                                      std::span<const int> tau_grid,
                                      double tol) {
  const SfTable table = structure_function(returns, q_grid, tau_grid);
  StationarityResult res;
  res.fits = fit_sf_exponents(table, table.tau_grid.front(),
                              table.tau_grid.back());
  res.stationary = true;
  for (const ScalingFit& f : res.fits)
    if (std::abs(f.exponent) >= tol) res.stationary = false;
  return res;
}

}  // namespace mfrp
