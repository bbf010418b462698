#include "mfrp/validation.hpp"

#include <cmath>
#include <sstream>

#include "mfrp/analysis.hpp"
#include "mfrp/csv.hpp"
#include "mfrp/errors.hpp"
#include "mfrp/synthetic.hpp"

namespace mfrp {

bool ValidationReport::all_pass() const {
  for (const ValidationCheck& c : checks)
    if (!c.pass) return false;
  return true;
}

namespace {

ValidationCheck make_check(const std::string& name, double measured,
                           double target, double tol) {
  return {name, measured, target, tol, std::abs(measured - target) <= tol};
}

// --- stationary variance of the mean-reverting state recursion -----------

double measure_state_variance(double alpha, std::uint64_t seed, long steps) {
  ModelConfig cfg;
  cfg.n_assets = 4;
  cfg.n_main = 3;
  cfg.target_var = 1.0;
  cfg.seed = seed;
  Rng rng(seed);
  PhiMatrix phi = init_phi(cfg, rng);
  const double sigma_eps = derive_sigma_eps(alpha, 1.0);

  double sum = 0.0, sum_sq = 0.0;
  long counted = 0;
  for (long t = 0; t < steps; ++t) {
    evolve_main_vectors(phi, alpha, sigma_eps, rng);
    if (t < 1000) continue;  // settle from the exact-variance init
    for (int j = 0; j < cfg.n_main; ++j)
      for (int i = 0; i < cfg.n_assets; ++i) {
        const double v = phi.values(i, j);
        sum += v;
        sum_sq += v * v;
        ++counted;
      }
  }
  const double n = static_cast<double>(counted);
  const double mean = sum / n;
  return sum_sq / n - mean * mean;
}

// --- naive re-implementations used as brute-force oracles ----------------

void naive_moments(const std::vector<std::vector<double>>& phi, int cols,
                   std::vector<double>& mu,
                   std::vector<std::vector<double>>& cov) {
  const int n = static_cast<int>(phi.size());
  mu.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < cols; ++j) mu[i] += phi[i][j];
    mu[i] /= cols;
  }
  cov.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      for (int j = 0; j < cols; ++j) s += phi[i][j] * phi[l][j];
      cov[i][l] = s / cols - mu[i] * mu[l];
    }
}

double naive_sf_value(const std::vector<double>& y, double q, int tau) {
  double acc = 0.0;
  const int m = static_cast<int>(y.size()) - tau;
  for (int t = 0; t < m; ++t) acc += std::pow(std::abs(y[t + tau] - y[t]), q);
  return std::log(acc / m);
}

void naive_partition(const std::vector<double>& moduli, double q, double& z,
                     double& z_star) {
  double norm = 0.0;
  for (double v : moduli) norm += std::pow(v, q);
  z = 0.0;
  z_star = 0.0;
  for (double v : moduli) {
    const double what = std::pow(v, q) / norm;
    z += what * std::log(v);
    z_star += what * std::log(what);
  }
}

// mixed tolerance: relative for large values, absolute near zero. The
// compared quantities are logarithms, where an absolute difference is a
// relative difference of the underlying moments.
double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1.0);
}

double check_moment_equivalence(std::uint64_t seed, int cases) {
  Rng rng(seed);
  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    const int n = 2 + static_cast<int>(rng.uniform() * 9);
    const int p = 2 + static_cast<int>(rng.uniform() * 7);
    PhiMatrix phi;
    phi.n_main = p;
    phi.values.resize(n, p);
    std::vector<std::vector<double>> raw(n, std::vector<double>(p));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < p; ++j) {
        raw[i][j] = rng.normal() * (1.0 + rng.uniform());
        phi.values(i, j) = raw[i][j];
      }
    MomentPair got;
    try {
      got = compute_moments(phi, MomentMode::MainOnly);
    } catch (const Error&) {
      --c;  // degenerate draw; retry
      continue;
    }
    std::vector<double> mu;
    std::vector<std::vector<double>> cov;
    naive_moments(raw, p, mu, cov);
    double scale = 1.0;
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l)
        scale = std::max(scale, std::abs(cov[i][l]));
    for (int i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(got.mean(i) - mu[i]) / scale);
      for (int l = 0; l < n; ++l)
        worst =
            std::max(worst, std::abs(got.covariance(i, l) - cov[i][l]) / scale);
    }
  }
  return worst;
}

double check_sf_equivalence(std::uint64_t seed, int cases) {
  Rng rng(seed);
  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    const int n = 120 + static_cast<int>(rng.uniform() * 200);
    std::vector<double> y(n);
    double acc = 0.0;
    for (int t = 0; t < n; ++t) {
      acc += rng.normal();
      y[t] = acc;
    }
    const std::vector<double> qs{0.5, 1.0, 2.0, 3.5};
    const std::vector<int> taus{2, 5, 9, 17};
    const SfTable table = structure_function(y, qs, taus);
    for (std::size_t qi = 0; qi < qs.size(); ++qi)
      for (std::size_t ti = 0; ti < taus.size(); ++ti)
        worst = std::max(rel_err(table.log_sf[qi][ti],
                                 naive_sf_value(y, qs[qi], taus[ti])),
                         worst);
  }
  return worst;
}

double check_partition_equivalence(std::uint64_t seed, int cases) {
  Rng rng(seed);
  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    // synthetic line set: every line spans all scales with positive moduli
    const int n_scales = 5;
    const int n_lines = 2 + static_cast<int>(rng.uniform() * 30);
    std::vector<double> scales;
    for (int s = 0; s < n_scales; ++s) scales.push_back(4.0 * (s + 1));
    std::vector<MaximaLine> lines(n_lines);
    for (int li = 0; li < n_lines; ++li) {
      double sup = 0.0;
      for (int s = 0; s < n_scales; ++s) {
        const double mod = std::exp(2.0 * rng.normal());
        sup = std::max(sup, mod);
        lines[li].points.push_back({s, li, mod});
        lines[li].sup_modulus.push_back(sup);
      }
    }
    const std::vector<double> qs{-3.0, -1.0, -0.5, 0.5, 1.0, 2.0, 4.0};
    const PartitionTable table = partition_functions(lines, qs, scales);
    for (std::size_t ti = 0; ti < table.tau_values.size(); ++ti) {
      std::vector<double> sups;
      for (const MaximaLine& l : lines)
        sups.push_back(l.sup_modulus[table.scale_indices[ti]]);
      for (std::size_t qi = 0; qi < qs.size(); ++qi) {
        double z = 0.0, z_star = 0.0;
        naive_partition(sups, qs[qi], z, z_star);
        worst = std::max(worst, rel_err(table.z[qi][ti], z));
        worst = std::max(worst, rel_err(table.z_star[qi][ti], z_star));
      }
    }
  }
  return worst;
}

}  // namespace

ValidationReport run_validation(std::uint64_t base_seed, int n_oracle_seeds) {
  ValidationReport report;

  for (double alpha : {0.005, 0.01, 0.1, 0.5}) {
    const double var =
        measure_state_variance(alpha, base_seed + 17, 1000000);
    report.checks.push_back(make_check(
        "state variance fixed point, alpha=" + fmt_short(alpha), var, 1.0,
        0.05));
  }

  AnalysisSettings settings;
  const std::vector<double> hursts =
      n_oracle_seeds > 0 ? std::vector<double>{0.3, 0.5, 0.7}
                         : std::vector<double>{};
  for (double hurst : hursts) {
    double h_acc = 0.0, z2_acc = 0.0;
    for (int s = 0; s < n_oracle_seeds; ++s) {
      FbmSpec spec{hurst, 32768, base_seed + 1000 + (std::uint64_t)s};
      const std::vector<double> path = generate_fbm(spec);
      h_acc += analyze_series(path, settings).hurst;

      const std::vector<int> taus = default_sf_tau_grid((int)path.size());
      const std::vector<double> qs{1.0, 2.0, 3.0};
      const SfTable table = structure_function(path, qs, taus);
      const auto [lo, hi] = auto_sf_fit_range(table);
      for (const ScalingFit& f : fit_sf_exponents(table, lo, hi))
        if (f.q == 2.0) z2_acc += f.exponent;
    }
    report.checks.push_back(
        make_check("fractional noise hurst, H=" + fmt_short(hurst),
                   h_acc / n_oracle_seeds, hurst, 0.05));
    report.checks.push_back(
        make_check("structure function zeta(2), H=" + fmt_short(hurst),
                   z2_acc / n_oracle_seeds, 2.0 * hurst, 0.1));
  }

  if (n_oracle_seeds > 0) {
    double width_acc = 0.0, apex_acc = 0.0;
    for (int s = 0; s < n_oracle_seeds; ++s) {
      CascadeSpec spec{0.7, 15, base_seed + 2000 + (std::uint64_t)s};
      const std::vector<double> mass = generate_cascade(spec);
      const std::vector<double> profile = profile_from_returns(mass);
      const SingularitySpectrum spectrum = analyze_series(profile, settings);
      width_acc += spectrum.width;
      apex_acc += spectrum.d_apex;
    }
    report.checks.push_back(make_check("cascade spectrum width, p=0.7",
                                       width_acc / n_oracle_seeds,
                                       cascade_width(0.7), 0.15));
    report.checks.push_back(make_check("cascade spectrum apex, p=0.7",
                                       apex_acc / n_oracle_seeds, 1.0, 0.1));
  }

  report.checks.push_back(
      make_check("moment brute-force equivalence (normwise)",
                 check_moment_equivalence(base_seed + 3000, 100), 0.0, 1e-12));
  report.checks.push_back(
      make_check("structure function brute-force equivalence",
                 check_sf_equivalence(base_seed + 4000, 100), 0.0, 1e-12));
  report.checks.push_back(
      make_check("partition function brute-force equivalence",
                 check_partition_equivalence(base_seed + 5000, 100), 0.0,
                 1e-12));

  return report;
}

std::string format_report(const ValidationReport& report) {
  std::ostringstream out;
  for (const ValidationCheck& c : report.checks) {
    out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": measured "
        << fmt_short(c.measured) << ", target " << fmt_short(c.target)
        << " +- " << fmt_short(c.tolerance) << "\n";
  }
  out << (report.all_pass() ? "all checks passed\n" : "CHECKS FAILED\n");
  return out.str();
}

}  // namespace mfrp
