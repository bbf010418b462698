#include "mfrp/model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "mfrp/errors.hpp"

namespace mfrp {

namespace {
constexpr double kVarianceFloor = 1e-30;
constexpr double kEigenFloorRel = 1e-12;
constexpr double kIndefiniteTolRel = 1e-8;
}  // namespace

void ModelConfig::validate() const {
  if (n_assets < 1) throw ConfigError("n_assets must be positive");
  if (n_main < 2) throw ConfigError("n_main must be at least 2");
  if (n_random < 0) throw ConfigError("n_random must be non-negative");
  if (n_random > 0 && n_params() < 3)
    throw ConfigError("n_main + n_random must be at least 3 when n_random > 0");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw ConfigError("alpha must lie in [0, 1]");
  if (!(sigma_eps >= 0.0)) throw ConfigError("sigma_eps must be non-negative");
  if (!(target_var > 0.0)) throw ConfigError("target_var must be positive");
  if (n_steps < 1) throw ConfigError("n_steps must be positive");
  if (transient < 0) throw ConfigError("transient must be non-negative");
}

double derive_sigma_eps(double alpha, double target_var) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw ConfigError("derive_sigma_eps: alpha must lie in [0, 1]");
  if (!(target_var > 0.0))
    throw ConfigError("derive_sigma_eps: target_var must be positive");
  return std::sqrt(target_var * (2.0 * alpha - alpha * alpha));
}

PhiMatrix init_phi(const ModelConfig& cfg, Rng& rng) {
  PhiMatrix phi;
  phi.n_main = cfg.n_main;
  phi.values = Eigen::MatrixXd::Zero(cfg.n_assets, cfg.n_params());
  const double sd = std::sqrt(cfg.target_var);
  for (int j = 0; j < cfg.n_main; ++j)
    for (int i = 0; i < cfg.n_assets; ++i)
      phi.values(i, j) = rng.normal(0.0, sd);
  return phi;
}

void evolve_main_vectors(PhiMatrix& phi, double alpha, double sigma_eps,
                         Rng& rng) {
  const double keep = 1.0 - alpha;
  if (sigma_eps == 0.0) {
    if (alpha != 0.0) phi.values.leftCols(phi.n_main) *= keep;
    return;
  }
  for (int j = 0; j < phi.n_main; ++j)
    for (int i = 0; i < phi.n_assets(); ++i)
      phi.values(i, j) = keep * phi.values(i, j) + rng.normal(0.0, sigma_eps);
}

void draw_random_vectors(PhiMatrix& phi, const Eigen::VectorXd& prev_cov_diag,
                         Rng& rng) {
  const int n_random = phi.n_random();
  if (n_random == 0) return;
  const int n = phi.n_assets();
  Eigen::VectorXd sd(n);
  for (int i = 0; i < n; ++i) {
    if (!(prev_cov_diag(i) > 0.0))
      throw NonPositiveVariance("draw_random_vectors: variance of asset " +
                                std::to_string(i) + " is not positive");
    sd(i) = std::sqrt(prev_cov_diag(i));
  }
  for (int j = phi.n_main; j < phi.n_params(); ++j)
    for (int i = 0; i < n; ++i) phi.values(i, j) = rng.normal(0.0, sd(i));
}

MomentPair compute_moments(const PhiMatrix& phi, MomentMode mode) {
  const int cols =
      mode == MomentMode::MainOnly ? phi.n_main : phi.n_params();
  if (cols < 2)
    throw ConfigError("compute_moments: need at least 2 columns");
  const auto block = phi.values.leftCols(cols);
  const double inv = 1.0 / static_cast<double>(cols);

  MomentPair m;
  m.mean = block.rowwise().sum() * inv;
  m.covariance = block * block.transpose() * inv - m.mean * m.mean.transpose();

  const int n = phi.n_assets();
  for (int i = 0; i < n; ++i) {
    if (m.covariance(i, i) <= kVarianceFloor)
      throw DegenerateVariance("compute_moments: variance of asset " +
                               std::to_string(i) + " is degenerate");
  }

  m.correlation.resize(n, n);
  for (int i = 0; i < n; ++i) {
    m.correlation(i, i) = 1.0;
    for (int l = 0; l < i; ++l) {
      const double c = m.covariance(i, l) /
                       std::sqrt(m.covariance(i, i) * m.covariance(l, l));
      m.correlation(i, l) = c;
      m.correlation(l, i) = c;
    }
  }
  return m;
}

Eigen::VectorXd sample_returns(const Eigen::VectorXd& mean,
                               const Eigen::MatrixXd& covariance, Rng& rng) {
  const int n = static_cast<int>(mean.size());
  const Eigen::MatrixXd sym = 0.5 * (covariance + covariance.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success)
    throw FactorizationFailure("sample_returns: eigen-decomposition failed");

  Eigen::VectorXd evals = es.eigenvalues();
  const double max_eig = evals.maxCoeff();
  if (evals.minCoeff() < -kIndefiniteTolRel * std::max(1.0, max_eig))
    throw FactorizationFailure(
        "sample_returns: covariance indefinite beyond tolerance");

  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z(i) = rng.normal();

  if (max_eig <= 0.0) return mean;  // zero-variance limit

  const double floor = kEigenFloorRel * max_eig;
  for (int i = 0; i < n; ++i)
    evals(i) = std::sqrt(evals(i) < floor ? floor : evals(i));
  return mean + es.eigenvectors() * evals.asDiagonal() * z;
}

std::vector<double> ReturnPanel::asset_returns(int asset) const {
  std::vector<double> out(returns.rows());
  for (Eigen::Index t = 0; t < returns.rows(); ++t) out[t] = returns(t, asset);
  return out;
}

std::vector<double> ReturnPanel::asset_prices(int asset) const {
  std::vector<double> out(prices.rows());
  for (Eigen::Index t = 0; t < prices.rows(); ++t) out[t] = prices(t, asset);
  return out;
}

ReturnPanel simulate(const ModelConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);

  PhiMatrix phi = init_phi(cfg, rng);
  // Main-only moments of the initial state seed the first pseudo draw.
  MomentPair effective = compute_moments(phi, MomentMode::MainOnly);
  MomentPair main_moments = effective;

  ReturnPanel panel;
  panel.config = cfg;
  panel.returns.resize(cfg.n_steps, cfg.n_assets);
  panel.prices.resize(cfg.n_steps, cfg.n_assets);

  Eigen::VectorXd price_acc = Eigen::VectorXd::Zero(cfg.n_assets);
  const long total = static_cast<long>(cfg.transient) + cfg.n_steps;

  for (long t = 0; t < total; ++t) {
    try {
      evolve_main_vectors(phi, cfg.alpha, cfg.sigma_eps, rng);
      main_moments = compute_moments(phi, MomentMode::MainOnly);
      if (cfg.n_random > 0) {
        const MomentPair& src =
            cfg.pseudo_source == PseudoVarianceSource::Effective
                ? effective
                : main_moments;
        draw_random_vectors(phi, src.covariance.diagonal(), rng);
        effective = cfg.effective_mode == MomentMode::AllColumns
                        ? compute_moments(phi, MomentMode::AllColumns)
                        : main_moments;
      } else {
        effective = main_moments;
      }
      const Eigen::VectorXd r =
          sample_returns(effective.mean, effective.covariance, rng);
      if (t >= cfg.transient) {
        const long row = t - cfg.transient;
        price_acc += r;
        panel.returns.row(row) = r.transpose();
        panel.prices.row(row) = price_acc.transpose();
      }
    } catch (const SimulationError&) {
      throw;
    } catch (const Error& e) {
      throw SimulationError(t, e.what());
    }
  }
  return panel;
}

}  // namespace mfrp
