#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mfrp/cwt.hpp"

namespace mfrp {

struct MaximaPoint {
  int scale_idx = 0;
  int position = 0;
  double modulus = 0.0;
};

// A modulus-maxima ridge chained across consecutive scales, smallest first.
// sup_modulus[k] is the running supremum of the modulus along the line up to
// and including point k; it is the value entering the partition functions
// (the standard safeguard that keeps negative-q moments finite).
struct MaximaLine {
  std::vector<MaximaPoint> points;
  std::vector<double> sup_modulus;

  int birth_scale() const { return points.front().scale_idx; }
  int death_scale() const { return points.back().scale_idx; }
};

// Strict local maxima of |T| per scale among unmasked cells (plateaus keep
// the leftmost point); moduli below 1e-12 times the field maximum dropped.
std::vector<std::vector<MaximaPoint>> find_maxima(const CwtField& field);

// Greedy nearest-neighbour linking from the smallest scale upward. A link is
// allowed when |delta position| <= ceil(larger scale); unmatched maxima start
// new lines; lines spanning fewer than 3 scales are discarded.
std::vector<MaximaLine> chain_maxima(
    const std::vector<std::vector<MaximaPoint>>& per_scale,
    std::span<const double> scales);

// Z(q; tau) = sum_i What_i ln|T_i| and Z*(q; tau) = sum_i What_i ln What_i,
// with What_i = |T_i|^q / sum |T_i|^q over the lines crossing scale tau.
// Scales crossed by fewer than 2 lines are dropped.
struct PartitionTable {
  std::vector<double> q_grid;
  std::vector<int> scale_indices;   // indices into the CWT scale grid
  std::vector<double> tau_values;   // the surviving scales
  std::vector<std::vector<double>> z;       // [q][tau]
  std::vector<std::vector<double>> z_star;  // [q][tau]
  std::vector<int> counts;                  // lines per surviving scale
};

PartitionTable partition_functions(const std::vector<MaximaLine>& lines,
                                   std::span<const double> q_grid,
                                   std::span<const double> scales);

std::vector<double> default_wtmm_q_grid();  // -5 to 5, step 0.5

struct QFit {
  double q = 0.0;
  double h = 0.0;  // slope of Z vs ln tau, plus the calibration offset
  double h_stderr = 0.0;
  double h_r_squared = 0.0;
  double d = 0.0;  // slope of Z* vs ln tau
  double d_stderr = 0.0;
  double d_r_squared = 0.0;
};

struct SpectrumSettings {
  // Additive offset on h fixed against the fractional-noise H=0.5 oracle;
  // see docs/validate. The Z* slopes need no such calibration.
  double calibration = 0.0;
  // Explicit scaling range (tau_lo, tau_hi); unset selects automatically.
  std::optional<std::pair<double, double>> fit_range;
  double min_octaves = 1.5;
  // Windows whose min R^2 (|q| <= 2) ties within this quantum resolve to the
  // widest window.
  double r2_quantum = 0.005;
};

struct SingularitySpectrum {
  std::vector<QFit> fits;  // one per q, ascending q
  double h_left = 0.0;     // min tabulated h (most positive q side)
  double h_top = 0.0;      // h at the apex of D, |q| <= 3
  double h_right = 0.0;    // max tabulated h (most negative q side)
  double width = 0.0;      // h_right - h_left
  double hurst = 0.0;      // h at q = 2
  double d_apex = 0.0;     // max D over |q| <= 3
  double fit_tau_lo = 0.0;
  double fit_tau_hi = 0.0;
  bool poor_fit = false;  // some R^2 < 0.9 inside |q| <= 2
  double calibration = 0.0;

  const QFit& at_q(double q) const;
  // max h - min h over |q| <= q_abs_max.
  double h_range(double q_abs_max) const;
};

// Slopes of Z and Z* against ln tau per q over the scaling range give the
// parametric spectrum (h(q), D(q)) and its summary points.
SingularitySpectrum fit_spectrum(const PartitionTable& table,
                                 const SpectrumSettings& settings);

}  // namespace mfrp
