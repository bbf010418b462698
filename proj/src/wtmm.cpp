#include "mfrp/wtmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mfrp/errors.hpp"
#include "mfrp/linfit.hpp"

namespace mfrp {

std::vector<std::vector<MaximaPoint>> find_maxima(const CwtField& field) {
  double field_max = 0.0;
  for (std::size_t si = 0; si < field.scales.size(); ++si) {
    const auto& row = field.coefficients[si];
    for (int b = 0; b < field.n_positions; ++b)
      if (!field.masked(si, b)) field_max = std::max(field_max, std::abs(row[b]));
  }
  const double floor = 1e-12 * field_max;

  std::vector<std::vector<MaximaPoint>> out(field.scales.size());
  for (std::size_t si = 0; si < field.scales.size(); ++si) {
    const auto& row = field.coefficients[si];
    const int w = field.half_support[si];
    const int lo = w, hi = field.n_positions - w;  // unmasked range [lo, hi)
    if (hi - lo < 3) continue;
    int i = lo + 1;
    while (i < hi - 1) {
      const double a = std::abs(row[i]);
      if (a > std::abs(row[i - 1])) {
        // plateau scan: leftmost point of a run of equal moduli
        int j = i;
        while (j + 1 < hi - 1 && std::abs(row[j + 1]) == a) ++j;
        if (j + 1 < hi && a > std::abs(row[j + 1])) {
          if (a >= floor && a > 0.0)
            out[si].push_back({static_cast<int>(si), i, a});
        }
        i = j + 1;
      } else {
        ++i;
      }
    }
  }
  return out;
}

std::vector<MaximaLine> chain_maxima(
    const std::vector<std::vector<MaximaPoint>>& per_scale,
    std::span<const double> scales) {
  struct Candidate {
    int dist;
    int line;
    int max_idx;
    bool operator<(const Candidate& o) const {
      if (dist != o.dist) return dist < o.dist;
      if (line != o.line) return line < o.line;
      return max_idx < o.max_idx;
    }
  };

  std::vector<MaximaLine> lines;
  std::vector<int> alive;  // line indices extendable at the previous scale

  auto start_line = [&lines](const MaximaPoint& p) {
    MaximaLine l;
    l.points.push_back(p);
    l.sup_modulus.push_back(p.modulus);
    lines.push_back(std::move(l));
    return static_cast<int>(lines.size()) - 1;
  };

  if (!per_scale.empty())
    for (const MaximaPoint& p : per_scale[0]) alive.push_back(start_line(p));

  for (std::size_t si = 1; si < per_scale.size(); ++si) {
    const int window = static_cast<int>(std::ceil(scales[si]));
    const auto& maxima = per_scale[si];

    // endpoints of extendable lines, ordered by position for window lookups
    std::vector<std::pair<int, int>> ends;  // (position, line index)
    ends.reserve(alive.size());
    for (int li : alive) ends.emplace_back(lines[li].points.back().position, li);
    std::sort(ends.begin(), ends.end());

    std::vector<Candidate> cands;
    for (std::size_t mi = 0; mi < maxima.size(); ++mi) {
      const int pos = maxima[mi].position;
      auto lo = std::lower_bound(ends.begin(), ends.end(),
                                 std::make_pair(pos - window, -1));
      for (auto it = lo; it != ends.end() && it->first <= pos + window; ++it)
        cands.push_back(
            {std::abs(pos - it->first), it->second, static_cast<int>(mi)});
    }
    std::sort(cands.begin(), cands.end());

    std::vector<char> line_used(lines.size(), 0), max_used(maxima.size(), 0);
    std::vector<int> next_alive;
    for (const Candidate& c : cands) {
      if (line_used[c.line] || max_used[c.max_idx]) continue;
      line_used[c.line] = 1;
      max_used[c.max_idx] = 1;
      MaximaLine& l = lines[c.line];
      l.points.push_back(maxima[c.max_idx]);
      l.sup_modulus.push_back(
          std::max(l.sup_modulus.back(), maxima[c.max_idx].modulus));
      next_alive.push_back(c.line);
    }
    for (std::size_t mi = 0; mi < maxima.size(); ++mi)
      if (!max_used[mi]) next_alive.push_back(start_line(maxima[mi]));
    alive = std::move(next_alive);
  }

  std::vector<MaximaLine> kept;
  for (MaximaLine& l : lines)
    if (l.points.size() >= 3) kept.push_back(std::move(l));
  return kept;
}

std::vector<double> default_wtmm_q_grid() {
  std::vector<double> q;
  for (int k = -10; k <= 10; ++k) q.push_back(0.5 * k);
  return q;
}

PartitionTable partition_functions(const std::vector<MaximaLine>& lines,
                                   std::span<const double> q_grid,
                                   std::span<const double> scales) {
  PartitionTable table;
  table.q_grid.assign(q_grid.begin(), q_grid.end());

  // ln(sup modulus) of every line crossing each scale
  std::vector<std::vector<double>> log_values(scales.size());
  for (const MaximaLine& line : lines) {
    for (std::size_t k = 0; k < line.points.size(); ++k) {
      const int si = line.points[k].scale_idx;
      if (line.sup_modulus[k] > 0.0)
        log_values[si].push_back(std::log(line.sup_modulus[k]));
    }
  }

  for (std::size_t si = 0; si < scales.size(); ++si) {
    if (log_values[si].size() < 2) continue;  // insufficient lines: dropped
    table.scale_indices.push_back(static_cast<int>(si));
    table.tau_values.push_back(scales[si]);
    table.counts.push_back(static_cast<int>(log_values[si].size()));
  }
  if (table.tau_values.empty())
    throw InsufficientRange("partition_functions: no scale crossed by 2+ lines");

  const std::size_t nq = table.q_grid.size();
  const std::size_t nt = table.tau_values.size();
  table.z.assign(nq, std::vector<double>(nt, 0.0));
  table.z_star.assign(nq, std::vector<double>(nt, 0.0));

  std::vector<double> weights;
  for (std::size_t ti = 0; ti < nt; ++ti) {
    const auto& lv = log_values[table.scale_indices[ti]];
    const double n = static_cast<double>(lv.size());
    for (std::size_t qi = 0; qi < nq; ++qi) {
      const double q = table.q_grid[qi];
      if (q == 0.0) {
        // uniform weights: Z is the plain mean, Z* = -ln(count) exactly
        double mean_lv = 0.0;
        for (double v : lv) mean_lv += v;
        table.z[qi][ti] = mean_lv / n;
        table.z_star[qi][ti] = -std::log(n);
        continue;
      }
      double m = -std::numeric_limits<double>::infinity();
      for (double v : lv) m = std::max(m, q * v);
      weights.assign(lv.size(), 0.0);
      double norm = 0.0;
      for (std::size_t k = 0; k < lv.size(); ++k) {
        weights[k] = std::exp(q * lv[k] - m);
        norm += weights[k];
      }
      double z = 0.0, z_star = 0.0;
      for (std::size_t k = 0; k < lv.size(); ++k) {
        const double what = weights[k] / norm;
        if (what > 0.0) {
          z += what * lv[k];
          z_star += what * std::log(what);
        }
      }
      table.z[qi][ti] = z;
      table.z_star[qi][ti] = z_star;
    }
  }
  return table;
}

const QFit& SingularitySpectrum::at_q(double q) const {
  for (const QFit& f : fits)
    if (std::abs(f.q - q) < 1e-9) return f;
  throw ConfigError("SingularitySpectrum: q = " + std::to_string(q) +
                    " not tabulated");
}

double SingularitySpectrum::h_range(double q_abs_max) const {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const QFit& f : fits) {
    if (std::abs(f.q) <= q_abs_max + 1e-12) {
      lo = std::min(lo, f.h);
      hi = std::max(hi, f.h);
    }
  }
  return hi - lo;
}

namespace {

struct Window {
  std::size_t lo = 0, hi = 0;  // inclusive index range into the table scales
};

Window select_window(const PartitionTable& table,
                     const SpectrumSettings& settings) {
  const std::size_t nt = table.tau_values.size();
  std::vector<double> x(nt);
  for (std::size_t k = 0; k < nt; ++k) x[k] = std::log(table.tau_values[k]);

  if (settings.fit_range) {
    const auto [tlo, thi] = *settings.fit_range;
    std::size_t lo = nt, hi = 0;
    for (std::size_t k = 0; k < nt; ++k) {
      if (table.tau_values[k] >= tlo && table.tau_values[k] <= thi) {
        lo = std::min(lo, k);
        hi = std::max(hi, k);
      }
    }
    if (lo >= nt || hi < lo + 3)
      throw InsufficientRange("fit_spectrum: fewer than 4 scales in range");
    return {lo, hi};
  }

  std::vector<std::size_t> q_sel;
  for (std::size_t qi = 0; qi < table.q_grid.size(); ++qi)
    if (std::abs(table.q_grid[qi]) <= 2.0 + 1e-12) q_sel.push_back(qi);
  if (q_sel.empty())
    for (std::size_t qi = 0; qi < table.q_grid.size(); ++qi)
      q_sel.push_back(qi);

  long best_bucket = -1;
  double best_oct = -1.0;
  Window best;
  for (std::size_t i = 0; i < nt; ++i) {
    for (std::size_t j = i + 3; j < nt; ++j) {
      // contiguity on the underlying scale grid
      if (table.scale_indices[j] - table.scale_indices[i] !=
          static_cast<int>(j - i))
        continue;
      const double oct = std::log2(table.tau_values[j] / table.tau_values[i]);
      if (oct < settings.min_octaves) continue;
      std::span<const double> xs(x.data() + i, j - i + 1);
      double min_r2 = 1.0;
      for (std::size_t qi : q_sel) {
        std::span<const double> ys(table.z[qi].data() + i, j - i + 1);
        min_r2 = std::min(min_r2, fit_line(xs, ys).r_squared);
      }
      const long bucket = static_cast<long>(min_r2 / settings.r2_quantum);
      if (bucket > best_bucket || (bucket == best_bucket && oct > best_oct)) {
        best_bucket = bucket;
        best_oct = oct;
        best = {i, j};
      }
    }
  }
  if (best_bucket < 0)
    throw InsufficientRange(
        "fit_spectrum: no contiguous window spans the minimum octaves");
  return best;
}

}  // namespace

SingularitySpectrum fit_spectrum(const PartitionTable& table,
                                 const SpectrumSettings& settings) {
  if (table.tau_values.size() < 4)
    throw InsufficientRange("fit_spectrum: need at least 4 scales");

  const Window win = select_window(table, settings);
  const std::size_t count = win.hi - win.lo + 1;
  std::vector<double> x(count);
  for (std::size_t k = 0; k < count; ++k)
    x[k] = std::log(table.tau_values[win.lo + k]);

  SingularitySpectrum spec;
  spec.calibration = settings.calibration;
  spec.fit_tau_lo = table.tau_values[win.lo];
  spec.fit_tau_hi = table.tau_values[win.hi];

  for (std::size_t qi = 0; qi < table.q_grid.size(); ++qi) {
    std::span<const double> zs(table.z[qi].data() + win.lo, count);
    std::span<const double> zss(table.z_star[qi].data() + win.lo, count);
    const LinearFit fh = fit_line(x, zs);
    const LinearFit fd = fit_line(x, zss);
    QFit f;
    f.q = table.q_grid[qi];
    f.h = fh.slope + settings.calibration;
    f.h_stderr = fh.slope_stderr;
    f.h_r_squared = fh.r_squared;
    f.d = fd.slope;
    f.d_stderr = fd.slope_stderr;
    f.d_r_squared = fd.r_squared;
    spec.fits.push_back(f);
    if (std::abs(f.q) <= 2.0 + 1e-12 && fh.r_squared < 0.9)
      spec.poor_fit = true;
  }

  double h_lo = std::numeric_limits<double>::infinity(), h_hi = -h_lo;
  for (const QFit& f : spec.fits) {
    h_lo = std::min(h_lo, f.h);
    h_hi = std::max(h_hi, f.h);
  }
  spec.h_left = h_lo;
  spec.h_right = h_hi;
  spec.width = h_hi - h_lo;

  double best_d = -std::numeric_limits<double>::infinity();
  for (const QFit& f : spec.fits) {
    if (std::abs(f.q) <= 3.0 + 1e-12 && f.d > best_d) {
      best_d = f.d;
      spec.h_top = f.h;
    }
  }
  spec.d_apex = best_d;
  spec.hurst = spec.at_q(2.0).h;
  return spec;
}

}  // namespace mfrp
