#pragma once

// Second-order Gaussian knockoffs.
//
// Covariates are standardized with the sample mean and standard deviation, and
// their correlation matrix Sigma is estimated (with a minimal ridge-type
// shrinkage toward the identity when it is close to singular). Knockoffs are
// then drawn from the Gaussian conditional law implied by the joint covariance
//
//   cov([x, x~]) = [ Sigma            Sigma - diag(s) ]
//                  [ Sigma - diag(s)  Sigma           ]
//
// i.e. x~ | x ~ N(x (I - Sigma^-1 diag(s)), 2 diag(s) - diag(s) Sigma^-1 diag(s)).

#include <cstdint>

#include <Eigen/Dense>

namespace coxko {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline constexpr double kEigenFloor = 1e-3;

struct MomentModel {
  VectorXd mean;    // per-covariate sample mean
  VectorXd scale;   // per-covariate sample standard deviation (divisor n - 1)
  MatrixXd sigma;   // covariance of the standardized covariates
  double shrinkage = 0.0;

  int p() const { return static_cast<int>(sigma.rows()); }
};

struct KnockoffSampler {
  MomentModel moments;
  VectorXd s;
  MatrixXd cond_coef;   // row x -> conditional mean x * cond_coef
  MatrixXd cond_chol;   // lower triangular, cond_chol * cond_chol' = conditional covariance

  int p() const { return moments.p(); }
};

/// [X, X~] on the standardized scale; column j + p is the knockoff of column j.
struct AugmentedDesign {
  MatrixXd z;
  int n = 0;
  int p = 0;

  auto originals() const { return z.leftCols(p); }
  auto knockoffs() const { return z.rightCols(p); }
};

MomentModel fit_moments(const MatrixXd& x, double eigen_floor = kEigenFloor);

/// Moments for a known correlation matrix (zero mean, unit scale).
MomentModel moments_from_sigma(const MatrixXd& sigma);

/// s_j = min(2 * lambda_min(Sigma), 1) for every j.
VectorXd equicorrelated_s(const MomentModel& moments);

KnockoffSampler build_sampler(const MomentModel& moments, const VectorXd& s);

/// Standardizes `x` with the sampler's moments and draws one knockoff row per
/// observation. Row i uses a random stream keyed by (rng_seed, i), so the
/// output does not depend on how rows are split across threads.
AugmentedDesign sample_knockoffs(const KnockoffSampler& sampler, const MatrixXd& x,
                                 std::uint64_t rng_seed);

/// The 2p x 2p target covariance built from Sigma and s.
MatrixXd target_joint_covariance(const MomentModel& moments, const VectorXd& s);

/// The 2p x 2p covariance implied by the sampler's conditional law.
MatrixXd implied_joint_covariance(const KnockoffSampler& sampler);

/// Lower-triangular factor of a positive semi-definite matrix. Pivots within
/// `clamp` of zero are treated as exact zeros; a pivot below -`fail` throws NotPSD.
MatrixXd psd_cholesky(const MatrixXd& a, double clamp = 1e-10, double fail = 1e-8);

}  // namespace coxko
