#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <map>
#include <set>
#include <string>

#include "mfrp/csv.hpp"
#include "mfrp/errors.hpp"
#include "mfrp/sweep.hpp"
#include "mfrp/validation.hpp"

using namespace mfrp;
namespace fs = std::filesystem;

TEST_CASE("cell seeds are deterministic and well spread") {
  std::set<std::uint64_t> seen;
  for (int ai = 0; ai < 8; ++ai)
    for (int ri = 0; ri < 4; ++ri)
      for (int k = 0; k < 10; ++k) {
        const std::uint64_t s = cell_seed(123, ai, ri, k);
        CHECK(s == cell_seed(123, ai, ri, k));
        seen.insert(s);
      }
  CHECK(seen.size() == 8 * 4 * 10);
  CHECK(cell_seed(123, 0, 0, 0) != cell_seed(124, 0, 0, 0));
}

TEST_CASE("config file keys map onto the sweep config") {
  SweepConfig cfg;
  std::map<std::string, std::string> kv{
      {"model.n_assets", "4"},         {"model.n_main", "3"},
      {"sweep.alpha", "0,0.5"},        {"sweep.r", "1,2"},
      {"sweep.realizations", "3"},     {"sweep.base_seed", "77"},
      {"analysis.fit_range", "8:256"}, {"output.dir", "somewhere"}};
  cfg.apply(kv);
  CHECK(cfg.n_assets == 4);
  CHECK(cfg.n_main == 3);
  CHECK(cfg.alpha_grid == std::vector<double>{0.0, 0.5});
  CHECK(cfg.r_values == std::vector<int>{1, 2});
  CHECK(cfg.n_realizations == 3);
  CHECK(cfg.base_seed == 77);
  REQUIRE(cfg.fit_range.has_value());
  CHECK(cfg.fit_range->first == 8.0);
  CHECK(cfg.fit_range->second == 256.0);
  CHECK(cfg.out_dir == "somewhere");

  CHECK_THROWS_AS(cfg.apply({{"bogus.key", "1"}}), ConfigError);
}

TEST_CASE("sweep config validation") {
  SweepConfig cfg;
  cfg.out_dir = "x";
  cfg.validate();
  cfg.alpha_grid = {0.5, 0.1};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.alpha_grid = {0.0, 2.0};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.alpha_grid = {0.0, 1.0};
  cfg.out_dir.clear();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("miniature sweep runs end to end and is byte reproducible") {
  SweepConfig cfg;
  cfg.alpha_grid = {0.0, 0.5};
  cfg.r_values = {1};
  cfg.n_realizations = 2;
  cfg.n_assets = 4;
  cfg.n_main = 3;
  cfg.n_steps = 4096;
  cfg.transient = 512;
  cfg.kurtosis_windows = {1, 10};
  cfg.base_seed = 99;
  cfg.jobs = 2;

  const fs::path root =
      fs::temp_directory_path() / ("mfrp_sweep_" + std::to_string(::getpid()));
  fs::remove_all(root);
  cfg.out_dir = (root / "run1").string();
  const SweepResult r1 = run_sweep(cfg);
  CHECK(r1.n_cells == 4);
  CHECK(r1.n_failed == 0);
  REQUIRE(r1.groups.size() == 2);
  CHECK(r1.group(1, 0.0).n_ok == 2);
  CHECK(r1.group(1, 0.5).kurt_mean.size() == 2);
  CHECK_THROWS_AS(r1.group(7, 0.0), ConfigError);

  for (const char* name :
       {"summary.csv", "kurtosis_sweep.csv", "manifest.txt",
        "tail_R1_a0.csv", "tail_R1_a0.5.csv", "sf_R1_a0.csv",
        "sf_exponents_R1_a0.5.csv", "spectrum_R1_a0.csv", "fig_width.svg",
        "fig_hurst.svg", "fig_tails.svg", "fig_spectrum.svg"})
    CHECK(fs::exists(fs::path(cfg.out_dir) / name));

  // rerun: identical bytes for everything except the manifest
  SweepConfig cfg2 = cfg;
  cfg2.jobs = 1;  // thread count must not affect results
  cfg2.out_dir = (root / "run2").string();
  run_sweep(cfg2);
  for (const auto& entry : fs::directory_iterator(cfg.out_dir)) {
    const std::string name = entry.path().filename().string();
    if (name == "manifest.txt") continue;
    const std::string other = cfg2.out_dir + "/" + name;
    REQUIRE(fs::exists(other));
    CHECK(fnv1a_file(entry.path().string()) == fnv1a_file(other));
  }

  // manifest lists every emitted file
  const std::string manifest =
      read_text_file(cfg.out_dir + std::string("/manifest.txt"));
  for (const auto& entry : fs::directory_iterator(cfg.out_dir)) {
    const std::string name = entry.path().filename().string();
    if (name == "manifest.txt") continue;
    CHECK(manifest.find("file=" + name) != std::string::npos);
  }
  fs::remove_all(root);
}

TEST_CASE("brute-force equivalence checks sit at rounding noise") {
  // the three equivalence oracles from the validation suite
  const ValidationReport report = run_validation(11, 0);
  int seen = 0;
  for (const ValidationCheck& c : report.checks) {
    if (c.name.find("equivalence") == std::string::npos) continue;
    ++seen;
    CHECK(c.pass);
    CHECK(c.measured < 1e-12);
  }
  CHECK(seen == 3);
}
