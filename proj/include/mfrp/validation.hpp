#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mfrp {

struct ValidationCheck {
  std::string name;
  double measured = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_pass() const;
};

// Ground-truth oracle suite run through the full analysis stack:
// the variance fixed point of the state recursion, fractional-noise
// hurst/structure-function recovery at H in {0.3, 0.5, 0.7}, binomial
// cascade width and apex, and brute-force equivalence of the moment,
// structure-function and partition computations.
ValidationReport run_validation(std::uint64_t base_seed = 424242,
                                int n_oracle_seeds = 10);

std::string format_report(const ValidationReport& report);

}  // namespace mfrp
