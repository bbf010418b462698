// mfrp: simulator for the random-parameters return model plus a
// multifractal scaling-analysis toolkit (structure functions and wavelet
// modulus maxima). Subcommands: simulate, analyze, sweep, validate, plot.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "mfrp/analysis.hpp"
#include "mfrp/csv.hpp"
#include "mfrp/errors.hpp"
#include "mfrp/stats.hpp"
#include "mfrp/svg.hpp"
#include "mfrp/sweep.hpp"
#include "mfrp/validation.hpp"

namespace fs = std::filesystem;
using namespace mfrp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitConfigError = 2;

std::string out_dir_or_env(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("MFRP_OUT"); env && *env) return env;
  return "out";
}

std::optional<std::pair<double, double>> parse_fit_range(
    const std::string& text) {
  if (text.empty()) return std::nullopt;
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos)
    throw ConfigError("--fit-range must be LO:HI");
  return std::make_pair(std::stod(text.substr(0, colon)),
                        std::stod(text.substr(colon + 1)));
}

int cmd_simulate(const ModelConfig& cfg, bool locked_sigma,
                 const std::string& out_flag) {
  ModelConfig c = cfg;
  if (locked_sigma) c.sigma_eps = derive_sigma_eps(c.alpha, c.target_var);
  const std::string dir = out_dir_or_env(out_flag);
  fs::create_directories(dir);
  const ReturnPanel panel = simulate(c);
  write_returns_csv(panel, dir + "/returns.csv");
  write_panel_meta(panel, dir + "/meta.txt");
  std::cout << "wrote " << dir << "/returns.csv (" << c.n_steps << " steps, "
            << c.n_assets << " assets)\n";
  return kExitOk;
}

int cmd_analyze(const std::string& input, int column, bool levels,
                const std::string& fit_range_text, int wavelet_order,
                double calibration, bool dump_cwt,
                const std::string& out_flag) {
  AnalysisSettings settings;
  settings.wavelet_order = wavelet_order;
  settings.spectrum.calibration = calibration;
  settings.spectrum.fit_range = parse_fit_range(fit_range_text);

  const int n_cols = csv_column_count(input);
  std::vector<int> columns;
  if (column >= 0) {
    columns.push_back(column);
  } else {
    for (int c = 1; c < n_cols; ++c) columns.push_back(c);  // skip index col
    if (columns.empty()) columns.push_back(0);
  }

  const std::string dir = out_dir_or_env(out_flag);
  fs::create_directories(dir);

  std::ostringstream table;
  table << "column,q,h,h_stderr,D,D_stderr\n";
  std::ostringstream summary;
  summary << "column,h_l,h0,h_r,width,hurst,fit_tau_lo,fit_tau_hi,"
             "calibration,poor_fit\n";

  for (int c : columns) {
    const std::vector<double> raw = read_series_csv(input, c);
    const std::vector<double> series =
        levels ? raw : profile_from_returns(raw);
    if (dump_cwt) {
      const CwtField field =
          transform(series, DogWavelet{settings.wavelet_order},
                    default_scales((int)series.size()));
      std::ostringstream dump;
      dump << "scale,position,coefficient\n";
      for (std::size_t si = 0; si < field.scales.size(); ++si)
        for (int b = 0; b < field.n_positions; ++b)
          if (!field.masked(si, b))
            dump << fmt_short(field.scales[si]) << "," << b << ","
                 << fmt_short(field.coefficients[si][b]) << "\n";
      write_text_file(dir + "/cwt_col" + std::to_string(c) + ".csv",
                      dump.str());
    }
    const SingularitySpectrum spec = analyze_series(series, settings);
    for (const QFit& f : spec.fits)
      table << c << "," << fmt_short(f.q) << "," << fmt_short(f.h) << ","
            << fmt_short(f.h_stderr) << "," << fmt_short(f.d) << ","
            << fmt_short(f.d_stderr) << "\n";
    summary << c << "," << fmt_short(spec.h_left) << ","
            << fmt_short(spec.h_top) << "," << fmt_short(spec.h_right) << ","
            << fmt_short(spec.width) << "," << fmt_short(spec.hurst) << ","
            << fmt_short(spec.fit_tau_lo) << "," << fmt_short(spec.fit_tau_hi)
            << "," << fmt_full(spec.calibration) << ","
            << (spec.poor_fit ? 1 : 0) << "\n";
    std::cout << "column " << c << ": hurst=" << fmt_short(spec.hurst)
              << " width=" << fmt_short(spec.width) << " h_l="
              << fmt_short(spec.h_left) << " h_r=" << fmt_short(spec.h_right)
              << " fit=[" << fmt_short(spec.fit_tau_lo) << ", "
              << fmt_short(spec.fit_tau_hi) << "]\n";
  }
  write_text_file(dir + "/spectrum.csv", table.str());
  write_text_file(dir + "/spectrum_summary.csv", summary.str());
  std::cout << "wrote " << dir << "/spectrum.csv\n";
  return kExitOk;
}

int cmd_plot(const std::string& input, const std::string& kind,
             const std::string& out_file) {
  // generic: pick columns by header name from the known table schemas
  const std::string text = read_text_file(input);
  std::istringstream in(text);
  std::string header;
  std::getline(in, header);
  std::vector<std::string> cols;
  {
    std::string cur;
    for (char ch : header) {
      if (ch == ',') {
        cols.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur.push_back(ch);
      }
    }
    cols.push_back(cur);
  }
  auto col_index = [&](const std::string& name) {
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (cols[i] == name) return static_cast<int>(i);
    throw ConfigError("column '" + name + "' not found in " + input);
  };

  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::string cur;
    for (char ch : line + ",") {
      if (ch == ',') {
        try {
          row.push_back(cur.empty() ? 0.0 : std::stod(cur));
        } catch (const std::exception&) {
          throw IoError("non-numeric value in " + input + ": " + cur);
        }
        cur.clear();
      } else if (ch != '\r') {
        cur.push_back(ch);
      }
    }
    rows.push_back(row);
  }

  PlotSpec spec;
  std::vector<PlotSeries> series;
  if (kind == "spectrum") {
    const int qc = col_index("q"), hc = col_index("h"), dc = col_index("D");
    PlotSeries s;
    s.label = "D(h)";
    for (const auto& r : rows) {
      s.x.push_back(r[hc]);
      s.y.push_back(r[dc]);
    }
    series.push_back(s);
    spec = {"Singularity spectrum", "h", "D(h)", false, false, 840, 560};
    (void)qc;
  } else if (kind == "tails") {
    const int tc = col_index("threshold"), wc = col_index("window"),
              ec = col_index("exceedance"), gc = col_index("gaussian");
    std::vector<double> windows;
    for (const auto& r : rows)
      if (std::find(windows.begin(), windows.end(), r[wc]) == windows.end())
        windows.push_back(r[wc]);
    for (double w : windows) {
      PlotSeries s;
      s.label = "t=" + fmt_short(w);
      for (const auto& r : rows)
        if (r[wc] == w) {
          s.x.push_back(r[tc]);
          s.y.push_back(std::max(r[ec], 1e-7));
        }
      series.push_back(s);
    }
    PlotSeries g;
    g.label = "Gaussian";
    for (const auto& r : rows)
      if (r[wc] == windows.front()) {
        g.x.push_back(r[tc]);
        g.y.push_back(std::max(r[gc], 1e-7));
      }
    series.push_back(g);
    spec = {"Upper tail", "threshold (sigma)", "P(X > threshold)",
            false,        true,                840,
            560};
  } else if (kind == "width" || kind == "hurst" || kind == "summary") {
    const int rc = col_index("R");
    const int yc = col_index(kind == "width"
                                 ? "width"
                                 : (kind == "hurst" ? "hurst" : "h0"));
    std::vector<int> r_values;
    for (const auto& r : rows)
      if (std::find(r_values.begin(), r_values.end(), (int)r[rc]) ==
          r_values.end())
        r_values.push_back((int)r[rc]);
    for (int rv : r_values) {
      PlotSeries s;
      s.label = "R=" + std::to_string(rv);
      int idx = 0;
      for (const auto& r : rows)
        if ((int)r[rc] == rv) {
          s.x.push_back(idx++);
          s.y.push_back(r[yc]);
        }
      series.push_back(s);
    }
    spec = {kind + " vs alpha (grid index)", "alpha grid index", kind, false,
            false, 840, 560};
  } else if (kind == "sf") {
    const int qc = col_index("q"), tc = col_index("tau"),
              vc = col_index("ln_sf");
    std::vector<double> qs;
    for (const auto& r : rows)
      if (std::find(qs.begin(), qs.end(), r[qc]) == qs.end())
        qs.push_back(r[qc]);
    for (double q : qs) {
      PlotSeries s;
      s.label = "q=" + fmt_short(q);
      for (const auto& r : rows)
        if (r[qc] == q) {
          s.x.push_back(r[tc]);
          s.y.push_back(r[vc]);
        }
      series.push_back(s);
    }
    spec = {"Structure function", "tau", "ln S_q", true, false, 840, 560};
  } else if (kind == "kurtosis") {
    const int rc = col_index("R"), wc = col_index("window"),
              kc = col_index("mean_kurt");
    std::vector<std::pair<int, int>> keys;
    for (const auto& r : rows) {
      const std::pair<int, int> key{(int)r[rc], (int)r[wc]};
      if (std::find(keys.begin(), keys.end(), key) == keys.end())
        keys.push_back(key);
    }
    for (auto [rv, wv] : keys) {
      PlotSeries s;
      s.label = "R=" + std::to_string(rv) + ",t=" + std::to_string(wv);
      int idx = 0;
      for (const auto& r : rows)
        if ((int)r[rc] == rv && (int)r[wc] == wv) {
          s.x.push_back(idx++);
          s.y.push_back(r[kc]);
        }
      series.push_back(s);
    }
    spec = {"Excess kurtosis vs alpha (grid index)", "alpha grid index",
            "excess kurtosis", false, false, 840, 560};
  } else {
    throw ConfigError("unknown plot kind: " + kind);
  }

  write_svg_plot(out_file, spec, series);
  std::cout << "wrote " << out_file << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random-parameters model simulator & multifractal analysis"};
  app.require_subcommand(1);

  // simulate ---------------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "simulate a return panel");
  ModelConfig mc;
  std::string sim_out;
  bool sim_locked = true;
  double sim_sigma = -1.0;
  sim->add_option("--alpha", mc.alpha, "mean-reversal strength in [0,1]");
  sim->add_option("--sigma-eps", sim_sigma,
                  "innovation scale (default: derived from alpha)");
  sim->add_option("--r", mc.n_random, "number of pseudo-parameter vectors");
  sim->add_option("--n-assets", mc.n_assets, "number of assets");
  sim->add_option("--n-main", mc.n_main, "number of persistent vectors");
  sim->add_option("--steps", mc.n_steps, "samples kept after the transient");
  sim->add_option("--transient", mc.transient, "discarded prefix length");
  sim->add_option("--target-var", mc.target_var, "stationary state variance");
  sim->add_option("--seed", mc.seed, "random seed");
  sim->add_option("--out", sim_out, "output directory (or $MFRP_OUT)");

  // analyze ----------------------------------------------------------------
  auto* ana = app.add_subcommand("analyze", "spectrum of a series file");
  std::string ana_input, ana_fit, ana_out;
  int ana_col = -1, ana_order = 4;
  bool ana_levels = false, ana_dump = false;
  double ana_cal = kDefaultCalibration;
  ana->add_option("--input", ana_input, "CSV with the series")->required();
  ana->add_option("--col", ana_col, "column index (default: all data columns)");
  ana->add_flag("--levels", ana_levels,
                "input is already a level/price series (default: returns)");
  ana->add_option("--fit-range", ana_fit, "scaling range LO:HI in samples");
  ana->add_option("--wavelet-order", ana_order, "vanishing moments");
  ana->add_option("--calibration", ana_cal, "additive h calibration");
  ana->add_flag("--dump-cwt", ana_dump,
                "also write the unmasked wavelet coefficients");
  ana->add_option("--out", ana_out, "output directory (or $MFRP_OUT)");

  // sweep ------------------------------------------------------------------
  auto* swp = app.add_subcommand("sweep", "full parameter-grid experiment");
  SweepConfig sc;
  std::string swp_config, swp_out, swp_alpha, swp_r, swp_fit;
  swp->add_option("--config", swp_config, "key=value config file");
  swp->add_option("--out", swp_out, "output directory (or $MFRP_OUT)");
  swp->add_option("--seed", sc.base_seed, "base seed of the cell schedule");
  swp->add_option("--jobs", sc.jobs, "worker threads (0 = cpu count)");
  swp->add_option("--alpha", swp_alpha, "comma list of alpha values");
  swp->add_option("--r", swp_r, "comma list of R values");
  swp->add_option("--realizations", sc.n_realizations,
                  "realizations per cell");
  swp->add_option("--fit-range", swp_fit, "scaling range LO:HI in samples");

  // validate ---------------------------------------------------------------
  auto* val = app.add_subcommand("validate", "oracle suite pass/fail report");
  std::uint64_t val_seed = 424242;
  int val_oracle_seeds = 10;
  val->add_option("--seed", val_seed, "base seed of the oracle suite");
  val->add_option("--oracle-seeds", val_oracle_seeds,
                  "independent oracle realizations");

  // plot -------------------------------------------------------------------
  auto* plt = app.add_subcommand("plot", "render a CSV table to SVG");
  std::string plt_input, plt_kind = "spectrum", plt_out = "plot.svg";
  plt->add_option("--input", plt_input, "input CSV")->required();
  plt->add_option("--kind", plt_kind,
                  "spectrum|width|hurst|summary|kurtosis|tails|sf");
  plt->add_option("--out", plt_out, "output SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (sim->parsed()) {
      if (sim_sigma >= 0.0) {
        mc.sigma_eps = sim_sigma;
        sim_locked = false;
      }
      return cmd_simulate(mc, sim_locked, sim_out);
    }
    if (ana->parsed()) {
      return cmd_analyze(ana_input, ana_col, ana_levels, ana_fit, ana_order,
                         ana_cal, ana_dump, ana_out);
    }
    if (swp->parsed()) {
      if (!swp_config.empty()) {
        try {
          sc.apply(read_key_value_file(swp_config));
        } catch (const IoError& e) {
          throw ConfigError(e.what());
        }
      }
      if (!swp_alpha.empty()) sc.alpha_grid = parse_double_list(swp_alpha);
      if (!swp_r.empty()) sc.r_values = parse_int_list(swp_r);
      if (!swp_fit.empty()) sc.fit_range = parse_fit_range(swp_fit);
      sc.out_dir = out_dir_or_env(!swp_out.empty() ? swp_out : sc.out_dir);
      const SweepResult res = run_sweep(sc);
      std::cout << "sweep finished: " << res.n_cells << " cells, "
                << res.n_failed << " failed, "
                << fmt_short(res.wall_seconds) << " s, outputs in "
                << res.out_dir << "\n";
      if (res.n_failed * 10 > res.n_cells) return kExitValidationFailure;
      return kExitOk;
    }
    if (val->parsed()) {
      const ValidationReport report =
          run_validation(val_seed, val_oracle_seeds);
      std::cout << format_report(report);
      return report.all_pass() ? kExitOk : kExitValidationFailure;
    }
    if (plt->parsed()) {
      return cmd_plot(plt_input, plt_kind, plt_out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidationFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidationFailure;
  }
  return kExitOk;
}
