#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mfrp/rng.hpp"

namespace mfrp {

// Which columns of the state matrix enter a moment estimate: the M main
// (persistent) columns only, or all P = M + R columns including the
// per-step pseudo-parameter vectors.
enum class MomentMode { MainOnly, AllColumns };

// Variance source for drawing pseudo-parameter vectors.
enum class PseudoVarianceSource { Effective, MainOnly };

struct ModelConfig {
  int n_assets = 10;   // N
  int n_main = 5;      // M, persistent state vectors
  int n_random = 0;    // R, pseudo-parameter vectors redrawn each step
  double alpha = 0.0;  // mean-reversal strength in [0, 1]
  double sigma_eps = 0.0;
  double target_var = 1.0;  // stationary variance level of state entries
  int n_steps = 32768;      // samples kept after the transient
  int transient = 16384;    // discarded prefix
  std::uint64_t seed = 1;
  MomentMode effective_mode = MomentMode::AllColumns;
  PseudoVarianceSource pseudo_source = PseudoVarianceSource::Effective;

  int n_params() const { return n_main + n_random; }  // P
  void validate() const;                              // throws ConfigError
};

// sigma_eps such that the entry variance of the mean-reverting walk
// phi(t+1) = (1-alpha) phi(t) + eps settles at target_var:
// target_var = sigma_eps^2 / (2 alpha - alpha^2).
double derive_sigma_eps(double alpha, double target_var);

// N x P state matrix; columns [0, n_main) persist across steps, the
// remaining columns are redrawn every step when R > 0.
struct PhiMatrix {
  Eigen::MatrixXd values;
  int n_main = 0;

  int n_assets() const { return static_cast<int>(values.rows()); }
  int n_params() const { return static_cast<int>(values.cols()); }
  int n_random() const { return n_params() - n_main; }
};

// Main entries i.i.d. N(0, target_var); pseudo columns zero until first draw.
PhiMatrix init_phi(const ModelConfig& cfg, Rng& rng);

struct MomentPair {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  Eigen::MatrixXd correlation;
};

// One step of the mean-reverting walk on the main columns:
// phi <- (1 - alpha) phi + N(0, sigma_eps^2), entrywise i.i.d. noise.
// Pseudo columns are untouched. sigma_eps == 0 draws nothing.
void evolve_main_vectors(PhiMatrix& phi, double alpha, double sigma_eps,
                         Rng& rng);

// Redraw the pseudo columns: entry (i, j) ~ N(0, prev_cov_diag[i]).
// No-op when the matrix has no pseudo columns.
void draw_random_vectors(PhiMatrix& phi, const Eigen::VectorXd& prev_cov_diag,
                         Rng& rng);

// mean_i = (1/K) sum_j phi_ij, cov_il = (1/K) sum_j phi_ij phi_lj - mu_i mu_l
// over the selected K columns; correlation from the covariance with a unit
// diagonal. Throws DegenerateVariance below the 1e-30 floor.
MomentPair compute_moments(const PhiMatrix& phi, MomentMode mode);

// One multivariate normal draw via symmetric eigen-factorization of the
// covariance. Eigenvalues below 1e-12 * max_eig are clamped to that floor;
// indefiniteness beyond tolerance raises FactorizationFailure.
Eigen::VectorXd sample_returns(const Eigen::VectorXd& mean,
                               const Eigen::MatrixXd& covariance, Rng& rng);

struct ReturnPanel {
  Eigen::MatrixXd returns;  // n_steps x N
  Eigen::MatrixXd prices;   // running sums of returns, per asset
  ModelConfig config;

  std::vector<double> asset_returns(int asset) const;
  std::vector<double> asset_prices(int asset) const;
};

// Full simulation loop: evolve main vectors, compute main-only moments,
// redraw pseudo vectors from the previous step's covariance diagonal,
// form the effective moments, draw returns, accumulate prices. The first
// cfg.transient steps are discarded. Reproducible from cfg.seed.
ReturnPanel simulate(const ModelConfig& cfg);

}  // namespace mfrp
