#include "mfrp/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <thread>

#include "mfrp/csv.hpp"
#include "mfrp/errors.hpp"
#include "mfrp/stats.hpp"
#include "mfrp/structure_function.hpp"
#include "mfrp/svg.hpp"

namespace fs = std::filesystem;

namespace mfrp {

std::uint64_t cell_seed(std::uint64_t base_seed, int alpha_idx, int r_idx,
                        int realization) {
  std::uint64_t mix = 0x9e3779b97f4a7c15ULL * (std::uint64_t)(alpha_idx + 1);
  mix ^= 0xd1b54a32d192ed03ULL * (std::uint64_t)(r_idx + 1);
  mix ^= 0x94d049bb133111ebULL * (std::uint64_t)(realization + 1);
  return base_seed ^ splitmix64(mix);
}

const std::vector<double>& sweep_tail_thresholds() {
  static const std::vector<double> thresholds = [] {
    std::vector<double> t(12);
    const double lo = std::log(0.5), hi = std::log(6.0);
    for (int k = 0; k < 12; ++k)
      t[k] = std::exp(lo + (hi - lo) * k / 11.0);
    return t;
  }();
  return thresholds;
}

void SweepConfig::validate() const {
  if (alpha_grid.empty()) throw ConfigError("sweep: empty alpha grid");
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    if (!(alpha_grid[i] >= 0.0 && alpha_grid[i] <= 1.0))
      throw ConfigError("sweep: alpha values must lie in [0, 1]");
    if (i > 0 && alpha_grid[i] <= alpha_grid[i - 1])
      throw ConfigError("sweep: alpha grid must be strictly ascending");
  }
  if (r_values.empty()) throw ConfigError("sweep: empty R list");
  for (int r : r_values)
    if (r < 0) throw ConfigError("sweep: R must be non-negative");
  if (n_realizations < 1)
    throw ConfigError("sweep: need at least one realization");
  if (kurtosis_windows.empty()) throw ConfigError("sweep: no kurtosis windows");
  if (out_dir.empty()) throw ConfigError("sweep: output directory not set");
  ModelConfig probe;
  probe.n_assets = n_assets;
  probe.n_main = n_main;
  probe.n_random = r_values.front();
  probe.n_steps = n_steps;
  probe.transient = transient;
  probe.target_var = target_var;
  probe.validate();
}

void SweepConfig::apply(const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    try {
    if (key == "model.n_assets") n_assets = std::stoi(value);
    else if (key == "model.n_main") n_main = std::stoi(value);
    else if (key == "model.n_steps") n_steps = std::stoi(value);
    else if (key == "model.transient") transient = std::stoi(value);
    else if (key == "model.target_var") target_var = std::stod(value);
    else if (key == "sweep.alpha") alpha_grid = parse_double_list(value);
    else if (key == "sweep.r") r_values = parse_int_list(value);
    else if (key == "sweep.realizations") n_realizations = std::stoi(value);
    else if (key == "sweep.base_seed") base_seed = std::stoull(value);
    else if (key == "sweep.jobs") jobs = std::stoi(value);
    else if (key == "analysis.wavelet_order") wavelet_order = std::stoi(value);
    else if (key == "analysis.calibration") calibration = std::stod(value);
    else if (key == "analysis.windows") kurtosis_windows = parse_int_list(value);
    else if (key == "analysis.fit_range") {
      const std::size_t colon = value.find(':');
      if (colon == std::string::npos)
        throw ConfigError("analysis.fit_range must be LO:HI");
      fit_range = {std::stod(value.substr(0, colon)),
                   std::stod(value.substr(colon + 1))};
    } else if (key == "output.dir") {
      out_dir = value;
    } else {
      throw ConfigError("unknown config key: " + key);
    }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("bad value for " + key + ": " + value);
    }
  }
}

namespace {

struct CellKey {
  int alpha_idx, r_idx, realization;
};

struct CellResult {
  bool ok = false;
  std::string error;
  std::vector<double> kurtosis;                      // per window
  std::vector<std::vector<double>> tail_exceedance;  // [window][threshold]
  double price_zeta2 = 0.0;  // price SF slope over the modulus-maxima window
  SpectrumSummary spectrum;
  std::vector<double> h_of_q, d_of_q;                // asset means per q
  std::vector<std::vector<double>> returns_log_sf;   // [q in {1,2,3}][tau]
  std::vector<std::vector<double>> price_log_sf;     // [q in {1,2,3}][tau]
};

const std::vector<double> kScreenQ{1.0, 2.0, 3.0};

CellResult compute_cell(const SweepConfig& sc, const CellKey& key) {
  CellResult cell;
  ModelConfig mc;
  mc.n_assets = sc.n_assets;
  mc.n_main = sc.n_main;
  mc.n_random = sc.r_values[key.r_idx];
  mc.alpha = sc.alpha_grid[key.alpha_idx];
  mc.sigma_eps = derive_sigma_eps(mc.alpha, sc.target_var);
  mc.target_var = sc.target_var;
  mc.n_steps = sc.n_steps;
  mc.transient = sc.transient;
  mc.seed = cell_seed(sc.base_seed, key.alpha_idx, key.r_idx, key.realization);

  const ReturnPanel panel = simulate(mc);
  const auto& thresholds = sweep_tail_thresholds();

  cell.kurtosis.assign(sc.kurtosis_windows.size(), 0.0);
  cell.tail_exceedance.assign(sc.kurtosis_windows.size(),
                              std::vector<double>(thresholds.size(), 0.0));
  for (std::size_t wi = 0; wi < sc.kurtosis_windows.size(); ++wi) {
    for (int a = 0; a < mc.n_assets; ++a) {
      const WindowedSeries w =
          aggregate_windows(panel.asset_returns(a), sc.kurtosis_windows[wi]);
      cell.kurtosis[wi] += excess_kurtosis(w.values);
      for (std::size_t ti = 0; ti < thresholds.size(); ++ti)
        cell.tail_exceedance[wi][ti] +=
            exceedance_probability(w.values, thresholds[ti]);
    }
    cell.kurtosis[wi] /= mc.n_assets;
    for (double& v : cell.tail_exceedance[wi]) v /= mc.n_assets;
  }

  // structure-function screen: returns must be flat, prices carry scaling
  const std::vector<int> taus = default_sf_tau_grid(sc.n_steps);
  cell.returns_log_sf.assign(kScreenQ.size(),
                             std::vector<double>(taus.size(), 0.0));
  cell.price_log_sf.assign(kScreenQ.size(),
                           std::vector<double>(taus.size(), 0.0));
  std::vector<SfTable> price_tables;
  for (int a = 0; a < mc.n_assets; ++a) {
    const SfTable rsf =
        structure_function(panel.asset_returns(a), kScreenQ, taus);
    const std::vector<double> profile =
        profile_from_returns(panel.asset_returns(a));
    SfTable psf = structure_function(profile, kScreenQ, taus);
    for (std::size_t qi = 0; qi < kScreenQ.size(); ++qi)
      for (std::size_t ti = 0; ti < taus.size(); ++ti) {
        cell.returns_log_sf[qi][ti] += rsf.log_sf[qi][ti] / mc.n_assets;
        cell.price_log_sf[qi][ti] += psf.log_sf[qi][ti] / mc.n_assets;
      }
    price_tables.push_back(std::move(psf));
  }

  AnalysisSettings as;
  as.wavelet_order = sc.wavelet_order;
  as.spectrum.calibration = sc.calibration;
  as.spectrum.fit_range = sc.fit_range;
  const PanelAnalysis pa = analyze_panel(panel, as);
  cell.spectrum = pa.mean;

  // price scaling exponent measured over each asset's modulus-maxima
  // scaling window, so the two methods see the same regime
  double zeta2_acc = 0.0;
  for (int a = 0; a < mc.n_assets; ++a) {
    const SfTable& psf = price_tables[a];
    std::size_t lo = psf.tau_grid.size(), hi = 0;
    for (std::size_t ti = 0; ti < psf.tau_grid.size(); ++ti) {
      if (psf.tau_grid[ti] >= pa.per_asset[a].fit_tau_lo &&
          psf.tau_grid[ti] <= pa.per_asset[a].fit_tau_hi) {
        lo = std::min(lo, ti);
        hi = std::max(hi, ti);
      }
    }
    if (lo >= psf.tau_grid.size()) {
      lo = 0;
      hi = 2;
    }
    while (hi - lo + 1 < 3) {  // widen to the 3 lags a fit needs
      if (lo > 0)
        --lo;
      else
        ++hi;
    }
    const auto fits =
        fit_sf_exponents(psf, psf.tau_grid[lo], psf.tau_grid[hi]);
    for (const ScalingFit& f : fits)
      if (f.q == 2.0) zeta2_acc += f.exponent;
  }
  cell.price_zeta2 = zeta2_acc / mc.n_assets;
  cell.h_of_q.assign(as.q_grid.size(), 0.0);
  cell.d_of_q.assign(as.q_grid.size(), 0.0);
  for (const SingularitySpectrum& s : pa.per_asset) {
    for (std::size_t qi = 0; qi < as.q_grid.size(); ++qi) {
      cell.h_of_q[qi] += s.fits[qi].h / pa.per_asset.size();
      cell.d_of_q[qi] += s.fits[qi].d / pa.per_asset.size();
    }
  }
  cell.ok = true;
  return cell;
}

double mean_vec(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  return v.empty() ? 0.0 : m / v.size();
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_vec(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / (v.size() - 1));
}

std::string alpha_tag(double alpha) {
  std::ostringstream ss;
  ss << alpha;
  return ss.str();
}

}  // namespace

const GroupAggregate& SweepResult::group(int r, double alpha) const {
  for (const GroupAggregate& g : groups)
    if (g.r == r && std::abs(g.alpha - alpha) < 1e-12) return g;
  throw ConfigError("sweep result: no group for the requested (R, alpha)");
}

SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const auto t_start = std::chrono::steady_clock::now();
  fs::create_directories(cfg.out_dir);

  std::vector<CellKey> cells;
  for (int ri = 0; ri < (int)cfg.r_values.size(); ++ri)
    for (int ai = 0; ai < (int)cfg.alpha_grid.size(); ++ai)
      for (int k = 0; k < cfg.n_realizations; ++k)
        cells.push_back({ai, ri, k});

  std::vector<CellResult> results(cells.size());
  const int jobs = cfg.jobs > 0
                       ? cfg.jobs
                       : std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        results[i] = compute_cell(cfg, cells[i]);
      } catch (const std::exception& e) {
        results[i].ok = false;
        results[i].error = e.what();
      }
    }
  };
  {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SweepResult res;
  res.q_grid = default_wtmm_q_grid();
  res.out_dir = cfg.out_dir;
  res.n_cells = (int)cells.size();

  const auto& thresholds = sweep_tail_thresholds();
  const std::vector<int> taus = default_sf_tau_grid(cfg.n_steps);
  std::vector<std::string> failures;
  std::vector<std::string> written;

  auto emit = [&](const std::string& name, const std::string& content) {
    write_text_file(cfg.out_dir + "/" + name, content);
    written.push_back(name);
  };

  std::ostringstream kurt_csv;
  kurt_csv << "R,alpha,window,mean_kurt,std_kurt\n";

  std::ostringstream summary_csv;
  summary_csv << "R,alpha,h_l,h0,h_r,width,hurst,h_l_std,h0_std,h_r_std,"
                 "width_std,hurst_std,sf_max_abs_exponent,price_zeta2,"
                 "price_zeta2_std,n_ok\n";

  for (int ri = 0; ri < (int)cfg.r_values.size(); ++ri) {
    for (int ai = 0; ai < (int)cfg.alpha_grid.size(); ++ai) {
      GroupAggregate g;
      g.r = cfg.r_values[ri];
      g.alpha = cfg.alpha_grid[ai];

      std::vector<const CellResult*> ok_cells;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].r_idx != ri || cells[i].alpha_idx != ai) continue;
        if (results[i].ok) {
          ok_cells.push_back(&results[i]);
        } else {
          std::ostringstream f;
          f << "cell alpha=" << g.alpha << " R=" << g.r
            << " realization=" << cells[i].realization << ": "
            << results[i].error;
          failures.push_back(f.str());
        }
      }
      g.n_ok = (int)ok_cells.size();
      if (g.n_ok == 0) {
        res.groups.push_back(g);
        continue;
      }

      auto collect = [&](auto getter) {
        std::vector<double> v;
        for (const CellResult* c : ok_cells) v.push_back(getter(*c));
        return v;
      };

      for (std::size_t wi = 0; wi < cfg.kurtosis_windows.size(); ++wi) {
        const auto v =
            collect([&](const CellResult& c) { return c.kurtosis[wi]; });
        g.kurt_mean.push_back(mean_vec(v));
        g.kurt_std.push_back(sample_std(v));
        kurt_csv << g.r << "," << alpha_tag(g.alpha) << ","
                 << cfg.kurtosis_windows[wi] << ","
                 << fmt_short(g.kurt_mean.back()) << ","
                 << fmt_short(g.kurt_std.back()) << "\n";
      }

      {
        auto grab = [&](auto getter) {
          const auto v = collect(getter);
          return std::pair<double, double>{mean_vec(v), sample_std(v)};
        };
        auto [hl, hls] = grab([](const CellResult& c) { return c.spectrum.h_left; });
        auto [ht, hts] = grab([](const CellResult& c) { return c.spectrum.h_top; });
        auto [hr, hrs] = grab([](const CellResult& c) { return c.spectrum.h_right; });
        auto [w, ws] = grab([](const CellResult& c) { return c.spectrum.width; });
        auto [hu, hus] = grab([](const CellResult& c) { return c.spectrum.hurst; });
        g.spec_mean = {hl, ht, hr, w, hu};
        g.spec_std = {hls, hts, hrs, ws, hus};
        auto [z2, z2s] =
            grab([](const CellResult& c) { return c.price_zeta2; });
        g.price_zeta2_mean = z2;
        g.price_zeta2_std = z2s;

        // stationarity screen on the realization-averaged returns SF
        SfTable ret_table;
        ret_table.q_grid = kScreenQ;
        ret_table.tau_grid = taus;
        ret_table.log_sf.assign(kScreenQ.size(),
                                std::vector<double>(taus.size(), 0.0));
        for (std::size_t qi = 0; qi < kScreenQ.size(); ++qi)
          for (std::size_t ti = 0; ti < taus.size(); ++ti) {
            const auto v = collect([&](const CellResult& c) {
              return c.returns_log_sf[qi][ti];
            });
            ret_table.log_sf[qi][ti] = mean_vec(v);
          }
        for (const ScalingFit& f :
             fit_sf_exponents(ret_table, taus.front(), taus.back()))
          g.sf_max_abs_exponent =
              std::max(g.sf_max_abs_exponent, std::abs(f.exponent));
      }

      for (std::size_t qi = 0; qi < res.q_grid.size(); ++qi) {
        const auto hv =
            collect([&](const CellResult& c) { return c.h_of_q[qi]; });
        const auto dv =
            collect([&](const CellResult& c) { return c.d_of_q[qi]; });
        g.h_mean.push_back(mean_vec(hv));
        g.h_std.push_back(sample_std(hv));
        g.d_mean.push_back(mean_vec(dv));
        g.d_std.push_back(sample_std(dv));
      }

      summary_csv << g.r << "," << alpha_tag(g.alpha) << ","
                  << fmt_short(g.spec_mean.h_left) << ","
                  << fmt_short(g.spec_mean.h_top) << ","
                  << fmt_short(g.spec_mean.h_right) << ","
                  << fmt_short(g.spec_mean.width) << ","
                  << fmt_short(g.spec_mean.hurst) << ","
                  << fmt_short(g.spec_std.h_left) << ","
                  << fmt_short(g.spec_std.h_top) << ","
                  << fmt_short(g.spec_std.h_right) << ","
                  << fmt_short(g.spec_std.width) << ","
                  << fmt_short(g.spec_std.hurst) << ","
                  << fmt_short(g.sf_max_abs_exponent) << ","
                  << fmt_short(g.price_zeta2_mean) << ","
                  << fmt_short(g.price_zeta2_std) << "," << g.n_ok << "\n";

      const std::string tag =
          "R" + std::to_string(g.r) + "_a" + alpha_tag(g.alpha);

      // tail curves, averaged over realizations, with a Gaussian reference
      {
        std::ostringstream tail;
        tail << "threshold,window,exceedance,gaussian\n";
        for (std::size_t wi = 0; wi < cfg.kurtosis_windows.size(); ++wi) {
          for (std::size_t ti = 0; ti < thresholds.size(); ++ti) {
            const auto v = collect([&](const CellResult& c) {
              return c.tail_exceedance[wi][ti];
            });
            tail << fmt_short(thresholds[ti]) << ","
                 << cfg.kurtosis_windows[wi] << "," << fmt_short(mean_vec(v))
                 << "," << fmt_short(gaussian_exceedance(thresholds[ti]))
                 << "\n";
          }
        }
        emit("tail_" + tag + ".csv", tail.str());
      }

      // price structure function and its exponents
      {
        std::ostringstream sf_csv;
        sf_csv << "q,tau,ln_sf\n";
        SfTable mean_table;
        mean_table.q_grid = kScreenQ;
        mean_table.tau_grid = taus;
        mean_table.log_sf.assign(kScreenQ.size(),
                                 std::vector<double>(taus.size(), 0.0));
        for (std::size_t qi = 0; qi < kScreenQ.size(); ++qi)
          for (std::size_t ti = 0; ti < taus.size(); ++ti) {
            const auto v = collect([&](const CellResult& c) {
              return c.price_log_sf[qi][ti];
            });
            mean_table.log_sf[qi][ti] = mean_vec(v);
            sf_csv << fmt_short(kScreenQ[qi]) << "," << taus[ti] << ","
                   << fmt_short(mean_table.log_sf[qi][ti]) << "\n";
          }
        emit("sf_" + tag + ".csv", sf_csv.str());

        std::ostringstream sfe;
        sfe << "q,zeta,stderr,r2\n";
        const auto [lo, hi] = auto_sf_fit_range(mean_table);
        for (const ScalingFit& f : fit_sf_exponents(mean_table, lo, hi))
          sfe << fmt_short(f.q) << "," << fmt_short(f.exponent) << ","
              << fmt_short(f.stderr_) << "," << fmt_short(f.r_squared) << "\n";
        emit("sf_exponents_" + tag + ".csv", sfe.str());
      }

      // spectrum table
      {
        std::ostringstream sp;
        sp << "q,h,h_stderr,D,D_stderr\n";
        for (std::size_t qi = 0; qi < res.q_grid.size(); ++qi)
          sp << fmt_short(res.q_grid[qi]) << "," << fmt_short(g.h_mean[qi])
             << "," << fmt_short(g.h_std[qi]) << "," << fmt_short(g.d_mean[qi])
             << "," << fmt_short(g.d_std[qi]) << "\n";
        emit("spectrum_" + tag + ".csv", sp.str());
      }

      res.groups.push_back(std::move(g));
    }
  }

  emit("kurtosis_sweep.csv", kurt_csv.str());
  emit("summary.csv", summary_csv.str());
  res.n_failed = (int)failures.size();

  // ---- plots -------------------------------------------------------------

  auto group_or_null = [&](int r, double alpha) -> const GroupAggregate* {
    for (const GroupAggregate& g : res.groups)
      if (g.r == r && std::abs(g.alpha - alpha) < 1e-12 && g.n_ok > 0)
        return &g;
    return nullptr;
  };

  // alpha axis: plotted against the grid index (the grid spans decades and
  // includes zero, so a log axis is not available)
  std::vector<double> alpha_x(cfg.alpha_grid.size());
  for (std::size_t i = 0; i < alpha_x.size(); ++i) alpha_x[i] = (double)i;
  std::string alpha_axis_label = "alpha (grid:";
  for (double a : cfg.alpha_grid) alpha_axis_label += " " + alpha_tag(a);
  alpha_axis_label += ")";

  // tails for the first group with R=2, alpha=0.01 if present
  {
    const GroupAggregate* g = group_or_null(2, 0.01);
    if (g == nullptr)
      for (const GroupAggregate& cand : res.groups)
        if (cand.n_ok > 0) {
          g = &cand;
          break;
        }
    if (g != nullptr) {
      // rebuild from the emitted csv data in memory
      std::vector<PlotSeries> series;
      for (std::size_t wi = 0; wi < cfg.kurtosis_windows.size(); ++wi) {
        PlotSeries s;
        s.label = "t=" + std::to_string(cfg.kurtosis_windows[wi]);
        s.x = thresholds;
        for (std::size_t ti = 0; ti < thresholds.size(); ++ti) {
          std::vector<double> v;
          for (std::size_t i = 0; i < cells.size(); ++i)
            if (results[i].ok &&
                cfg.r_values[cells[i].r_idx] == g->r &&
                std::abs(cfg.alpha_grid[cells[i].alpha_idx] - g->alpha) <
                    1e-12)
              v.push_back(results[i].tail_exceedance[wi][ti]);
          s.y.push_back(std::max(mean_vec(v), 1e-7));
        }
        series.push_back(std::move(s));
      }
      PlotSeries gauss;
      gauss.label = "Gaussian";
      gauss.x = thresholds;
      for (double t : thresholds)
        gauss.y.push_back(std::max(gaussian_exceedance(t), 1e-7));
      series.push_back(std::move(gauss));
      PlotSpec spec;
      spec.title = "Upper tail of standardized window sums (R=" +
                   std::to_string(g->r) + ", alpha=" + alpha_tag(g->alpha) +
                   ")";
      spec.x_label = "threshold (sigma)";
      spec.y_label = "P(X > threshold)";
      spec.log_y = true;
      emit("fig_tails.svg", render_svg_plot(spec, series));
    }
  }

  // kurtosis vs alpha, one figure per window, one series per R
  for (std::size_t wi = 0; wi < cfg.kurtosis_windows.size(); ++wi) {
    std::vector<PlotSeries> series;
    for (int r : cfg.r_values) {
      PlotSeries s;
      s.label = "R=" + std::to_string(r);
      for (std::size_t ai = 0; ai < cfg.alpha_grid.size(); ++ai) {
        const GroupAggregate* g = group_or_null(r, cfg.alpha_grid[ai]);
        if (g == nullptr) continue;
        s.x.push_back(alpha_x[ai]);
        s.y.push_back(g->kurt_mean[wi]);
      }
      series.push_back(std::move(s));
    }
    PlotSpec spec;
    spec.title =
        "Excess kurtosis vs alpha (window " +
        std::to_string(cfg.kurtosis_windows[wi]) + ")";
    spec.x_label = alpha_axis_label;
    spec.y_label = "excess kurtosis";
    emit("fig_kurtosis_t" + std::to_string(cfg.kurtosis_windows[wi]) + ".svg",
         render_svg_plot(spec, series));
  }

  // kurtosis error bars for R=2 (or the first R), window 1
  {
    const int r_pick =
        std::find(cfg.r_values.begin(), cfg.r_values.end(), 2) !=
                cfg.r_values.end()
            ? 2
            : cfg.r_values.front();
    PlotSeries s;
    s.label = "R=" + std::to_string(r_pick) + ", t=" +
              std::to_string(cfg.kurtosis_windows.front());
    for (std::size_t ai = 0; ai < cfg.alpha_grid.size(); ++ai) {
      const GroupAggregate* g = group_or_null(r_pick, cfg.alpha_grid[ai]);
      if (g == nullptr) continue;
      s.x.push_back(alpha_x[ai]);
      s.y.push_back(g->kurt_mean.front());
      s.yerr.push_back(g->kurt_std.front());
    }
    PlotSpec spec;
    spec.title = "Excess kurtosis with realization scatter";
    spec.x_label = alpha_axis_label;
    spec.y_label = "excess kurtosis";
    emit("fig_kurtosis_error.svg", render_svg_plot(spec, {s}));
  }

  // D(h) spectra for alpha in {0, 0.01, 1} at the smallest R present
  {
    std::vector<PlotSeries> series;
    const int r_pick = cfg.r_values.front();
    for (double a : {0.0, 0.01, 1.0}) {
      const GroupAggregate* g = group_or_null(r_pick, a);
      if (g == nullptr) continue;
      PlotSeries s;
      s.label = "alpha=" + alpha_tag(a);
      s.x = g->h_mean;
      s.y = g->d_mean;
      series.push_back(std::move(s));
    }
    if (!series.empty()) {
      PlotSpec spec;
      spec.title = "Singularity spectra, R=" + std::to_string(r_pick);
      spec.x_label = "h";
      spec.y_label = "D(h)";
      emit("fig_spectrum.svg", render_svg_plot(spec, series));
    }
  }

  // summary points vs alpha per R
  for (int r : cfg.r_values) {
    std::vector<PlotSeries> series(3);
    series[0].label = "h_l";
    series[1].label = "h_0";
    series[2].label = "h_r";
    for (std::size_t ai = 0; ai < cfg.alpha_grid.size(); ++ai) {
      const GroupAggregate* g = group_or_null(r, cfg.alpha_grid[ai]);
      if (g == nullptr) continue;
      series[0].x.push_back(alpha_x[ai]);
      series[0].y.push_back(g->spec_mean.h_left);
      series[0].yerr.push_back(g->spec_std.h_left);
      series[1].x.push_back(alpha_x[ai]);
      series[1].y.push_back(g->spec_mean.h_top);
      series[1].yerr.push_back(g->spec_std.h_top);
      series[2].x.push_back(alpha_x[ai]);
      series[2].y.push_back(g->spec_mean.h_right);
      series[2].yerr.push_back(g->spec_std.h_right);
    }
    PlotSpec spec;
    spec.title = "Spectrum summary points vs alpha, R=" + std::to_string(r);
    spec.x_label = alpha_axis_label;
    spec.y_label = "h";
    emit("fig_summary_R" + std::to_string(r) + ".svg",
         render_svg_plot(spec, series));
  }

  // spectrum width and hurst vs alpha, one series per R
  auto emit_vs_alpha = [&](const std::string& name, const std::string& title,
                           const std::string& ylab, auto getter,
                           auto err_getter) {
    std::vector<PlotSeries> series;
    for (int r : cfg.r_values) {
      PlotSeries s;
      s.label = "R=" + std::to_string(r);
      for (std::size_t ai = 0; ai < cfg.alpha_grid.size(); ++ai) {
        const GroupAggregate* g = group_or_null(r, cfg.alpha_grid[ai]);
        if (g == nullptr) continue;
        s.x.push_back(alpha_x[ai]);
        s.y.push_back(getter(*g));
        s.yerr.push_back(err_getter(*g));
      }
      series.push_back(std::move(s));
    }
    PlotSpec spec;
    spec.title = title;
    spec.x_label = alpha_axis_label;
    spec.y_label = ylab;
    emit(name, render_svg_plot(spec, series));
  };
  emit_vs_alpha(
      "fig_width.svg", "Spectrum width vs alpha", "h_r - h_l",
      [](const GroupAggregate& g) { return g.spec_mean.width; },
      [](const GroupAggregate& g) { return g.spec_std.width; });
  emit_vs_alpha(
      "fig_hurst.svg", "Hurst exponent vs alpha", "h(q=2)",
      [](const GroupAggregate& g) { return g.spec_mean.hurst; },
      [](const GroupAggregate& g) { return g.spec_std.hurst; });

  const auto t_end = std::chrono::steady_clock::now();
  res.wall_seconds =
      std::chrono::duration<double>(t_end - t_start).count();

  // ---- manifest (written last; the only file carrying run-varying data) ---
  {
    std::ostringstream m;
    m << "tool=mfrp " << kVersion << "\n";
    m << "alpha_grid=";
    for (std::size_t i = 0; i < cfg.alpha_grid.size(); ++i)
      m << (i ? "," : "") << alpha_tag(cfg.alpha_grid[i]);
    m << "\nr_values=";
    for (std::size_t i = 0; i < cfg.r_values.size(); ++i)
      m << (i ? "," : "") << cfg.r_values[i];
    m << "\nn_realizations=" << cfg.n_realizations
      << "\nbase_seed=" << cfg.base_seed
      << "\nseed_schedule=base_seed XOR splitmix64(mix(alpha_idx, r_idx, "
         "realization))"
      << "\nn_assets=" << cfg.n_assets << "\nn_main=" << cfg.n_main
      << "\nn_steps=" << cfg.n_steps << "\ntransient=" << cfg.transient
      << "\ntarget_var=" << fmt_short(cfg.target_var)
      << "\nwavelet_order=" << cfg.wavelet_order
      << "\ncalibration=" << fmt_full(cfg.calibration) << "\nfit_range="
      << (cfg.fit_range ? fmt_short(cfg.fit_range->first) + ":" +
                              fmt_short(cfg.fit_range->second)
                        : std::string("auto"))
      << "\ncells=" << res.n_cells << "\ncells_failed=" << res.n_failed
      << "\nwall_seconds=" << fmt_short(res.wall_seconds) << "\n";
    for (const std::string& f : failures) m << "failure=" << f << "\n";
    std::vector<std::string> sorted = written;
    std::sort(sorted.begin(), sorted.end());
    for (const std::string& name : sorted) {
      char hex[32];
      std::snprintf(hex, sizeof(hex), "%016llx",
                    (unsigned long long)fnv1a_file(cfg.out_dir + "/" + name));
      m << "file=" << name << " fnv1a=" << hex << "\n";
    }
    write_text_file(cfg.out_dir + "/manifest.txt", m.str());
  }

  return res;
}

}  // namespace mfrp
