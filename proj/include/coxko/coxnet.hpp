#pragma once

// L1-penalized Cox regression.
//
// The smooth part is the normalized partial log-likelihood
//
//   l(b) = n^-1 sum_i delta_i { b'z_i - log sum_{j: y_j >= y_i} exp(b'z_j) },
//
// which already encodes Breslow's convention for tied event times (every event
// in a tie block sees the full block in its risk set). The path solver
// minimizes -l(b) + lambda * |b|_1 for a decreasing grid of lambda values.

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "coxko/survival.hpp"

namespace coxko {

/// Risk-set sums evaluated in a single sorted sweep.
///
/// All exponentials go through a streaming log-sum-exp so the kernels stay
/// finite for linear predictors spanning hundreds of nats.
class RiskSetKernel {
 public:
  explicit RiskSetKernel(const SurvivalDataset& data);

  const RiskSetIndex& index() const { return index_; }
  int n() const { return static_cast<int>(delta_.size()); }

  /// Unnormalized log partial likelihood at the linear predictor `eta`.
  double log_lik_sum(const VectorXd& eta) const;

  /// Fills `expected` with exp(eta_j) * sum_{events k with j in R_k} 1/S_k and
  /// returns the unnormalized log partial likelihood. The score with respect
  /// to eta is delta - expected.
  double expected_events(const VectorXd& eta, VectorXd& expected) const;

  /// Hessian of -l(b) restricted to the columns in `zw` (n x k), that is
  /// n^-1 [ zw' diag(expected) zw - sum_k d_k mu_k mu_k' ].
  MatrixXd loss_hessian(const MatrixXd& zw, const VectorXd& eta, const VectorXd& expected) const;

  /// u' (d^2 l / d eta^2) u for u = Z v, without forming any matrix.
  double quadratic_form(const VectorXd& u, const VectorXd& eta) const;

 private:
  RiskSetIndex index_;
  VectorXi delta_;
};

/// n^-1 * log partial likelihood at coefficients b.
double partial_loglik(const SurvivalDataset& data, const VectorXd& b);

/// Gradient of partial_loglik with respect to b.
VectorXd gradient(const SurvivalDataset& data, const VectorXd& b);

/// v' H(b) v where H is the Hessian of partial_loglik; always <= 0 up to rounding.
double hessian_quadratic(const SurvivalDataset& data, const VectorXd& b, const VectorXd& v);

struct PathOptions {
  int max_iter = 10000;        // coordinate-descent cycles per lambda
  int max_newton = 500;        // outer quadratic-surrogate steps per lambda
  double kkt_tol = 1e-9;       // target stationarity
  double kkt_certify = 1e-6;   // stationarity required to flag a lambda converged
  bool record_objective = false;
};

struct CoxLassoFit {
  std::vector<double> lambda_grid;       // decreasing
  MatrixXd coefs;                        // G x m
  std::optional<VectorXd> cv_deviance;   // length G when cross-validated
  int chosen_lambda = 0;
  std::vector<int> n_iter;               // surrogate steps per lambda
  std::vector<char> converged;
  std::vector<double> kkt_residual;
  std::vector<std::vector<double>> objective_trace;  // filled when requested
  int empty_test_folds = 0;

  int size() const { return static_cast<int>(lambda_grid.size()); }
  int m() const { return static_cast<int>(coefs.cols()); }
  VectorXd coef(int g) const { return coefs.row(g).transpose(); }
  double chosen_value() const { return lambda_grid.at(chosen_lambda); }
  bool all_converged() const;
};

/// Smallest lambda for which b = 0 is optimal: max_j |d l / d b_j at 0|.
double lambda_max(const SurvivalDataset& data);

/// `points` log-spaced values from lambda_max down to eps * lambda_max, with
/// eps = 1e-3 when n > m and 1e-2 otherwise unless given explicitly.
std::vector<double> lambda_grid(const SurvivalDataset& data, int points = 100,
                                std::optional<double> eps = std::nullopt);

/// -l(b) + lambda |b|_1
double penalized_objective(const SurvivalDataset& data, const VectorXd& b, double lambda);

/// Largest KKT violation of b for the penalized problem at lambda.
double kkt_violation(const SurvivalDataset& data, const VectorXd& b, double lambda);

CoxLassoFit fit_path(const SurvivalDataset& data, const std::vector<double>& grid,
                     const PathOptions& options = {});

/// Fold labels in [0, folds), seeded and stratified by event status.
std::vector<int> stratified_folds(const VectorXi& delta, int folds, std::uint64_t seed);

/// k-fold cross-validated partial-likelihood deviance over `grid`, followed by
/// a fit on all rows. Folds may be evaluated concurrently.
CoxLassoFit cross_validate(const SurvivalDataset& data, int folds, const std::vector<double>& grid,
                           std::uint64_t seed, const PathOptions& options = {});

CoxLassoFit cross_validate(const SurvivalDataset& data, const std::vector<int>& fold_of_row,
                           const std::vector<double>& grid, const PathOptions& options = {});

/// Centers each column and scales it to unit sample standard deviation
/// (divisor n - 1). Constant columns become zero.
MatrixXd standardize_columns(const MatrixXd& x);

}  // namespace coxko
