#include "coxko/knockoffs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "coxko/error.hpp"
#include "coxko/rng.hpp"

namespace coxko {

namespace {

double min_eigenvalue(const MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

MatrixXd symmetrized(const MatrixXd& a) { return 0.5 * (a + a.transpose()); }

}  // namespace

MomentModel fit_moments(const MatrixXd& x, double eigen_floor) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (n < 3) throw Error(ErrorKind::TooFewRows, "need at least 3 rows, got " + std::to_string(n));
  if (p < 1) throw Error(ErrorKind::DimensionMismatch, "no covariates");

  MomentModel model;
  model.mean = x.colwise().mean().transpose();
  MatrixXd centered = x.rowwise() - model.mean.transpose();
  model.scale = (centered.colwise().squaredNorm() / static_cast<double>(n - 1)).cwiseSqrt().transpose();
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!(model.scale[j] > 0.0)) {
      throw Error(ErrorKind::ConstantColumn, "column " + std::to_string(j + 1) + " has zero variance");
    }
  }
  centered = centered.array().rowwise() / model.scale.transpose().array();
  model.sigma = symmetrized(centered.transpose() * centered / static_cast<double>(n - 1));
  model.sigma.diagonal().setOnes();

  const double smallest = min_eigenvalue(model.sigma);
  if (smallest < eigen_floor) {
    // lambda_min((1 - g) Sigma + g I) = (1 - g) lambda_min + g, so the smallest
    // admissible shrinkage has a closed form.
    double gamma = (eigen_floor - smallest) / (1.0 - smallest);
    const MatrixXd identity = MatrixXd::Identity(p, p);
    MatrixXd shrunk = (1.0 - gamma) * model.sigma + gamma * identity;
    while (min_eigenvalue(shrunk) < eigen_floor && gamma < 1.0) {
      gamma = std::min(1.0, gamma + 1e-6);
      shrunk = (1.0 - gamma) * model.sigma + gamma * identity;
    }
    model.sigma = symmetrized(shrunk);
    model.sigma.diagonal().setOnes();
    model.shrinkage = gamma;
  }
  return model;
}

MomentModel moments_from_sigma(const MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "sigma must be square");
  }
  MomentModel model;
  model.mean = VectorXd::Zero(sigma.rows());
  model.scale = VectorXd::Ones(sigma.rows());
  model.sigma = symmetrized(sigma);
  return model;
}

VectorXd equicorrelated_s(const MomentModel& moments) {
  const double value = std::min(2.0 * min_eigenvalue(moments.sigma), 1.0);
  return VectorXd::Constant(moments.p(), std::max(value, 0.0));
}

MatrixXd psd_cholesky(const MatrixXd& a, double clamp, double fail) {
  const Eigen::Index n = a.rows();
  MatrixXd work = symmetrized(a);
  Eigen::VectorXi perm = Eigen::VectorXi::LinSpaced(n, 0, static_cast<int>(n) - 1);
  MatrixXd factor = MatrixXd::Zero(n, n);  // pivoted factor, rows in permuted order

  Eigen::Index rank = 0;
  for (; rank < n; ++rank) {
    Eigen::Index best;
    const double pivot = work.diagonal().tail(n - rank).maxCoeff(&best);
    best += rank;
    if (pivot <= clamp) break;
    if (best != rank) {
      work.row(rank).swap(work.row(best));
      work.col(rank).swap(work.col(best));
      factor.row(rank).swap(factor.row(best));
      std::swap(perm[rank], perm[best]);
    }
    const double root = std::sqrt(pivot);
    factor(rank, rank) = root;
    const Eigen::Index rest = n - rank - 1;
    if (rest > 0) {
      const VectorXd col = work.col(rank).tail(rest) / root;
      factor.col(rank).tail(rest) = col;
      work.bottomRightCorner(rest, rest).noalias() -= col * col.transpose();
    }
  }
  if (rank < n) {
    const double worst = work.diagonal().tail(n - rank).minCoeff();
    if (worst < -fail) {
      throw Error(ErrorKind::NotPSD, "matrix has a pivot of " + std::to_string(worst));
    }
  }

  // Undo the permutation: F F' = A with F = P' factor.
  MatrixXd unpermuted(n, rank);
  for (Eigen::Index i = 0; i < n; ++i) unpermuted.row(perm[i]) = factor.row(i).head(rank);
  if (rank == 0) return MatrixXd::Zero(n, n);

  // F' = Q R gives A = R' R with R' lower trapezoidal.
  Eigen::HouseholderQR<MatrixXd> qr(unpermuted.transpose());
  const MatrixXd r = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
  MatrixXd lower = MatrixXd::Zero(n, n);
  lower.leftCols(rank) = r.transpose();
  for (Eigen::Index j = 0; j < rank; ++j) {
    if (lower(j, j) < 0.0) lower.col(j) = -lower.col(j);
  }
  return lower;
}

KnockoffSampler build_sampler(const MomentModel& moments, const VectorXd& s) {
  const Eigen::Index p = moments.p();
  if (s.size() != p) throw Error(ErrorKind::DimensionMismatch, "s must have length p");
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!(s[j] >= -1e-12 && s[j] <= 1.0 + 1e-12)) {
      throw Error(ErrorKind::InvalidArgument, "s entries must lie in [0, 1]");
    }
  }
  Eigen::LLT<MatrixXd> llt(moments.sigma);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::NotPSD, "sigma is not positive definite");

  KnockoffSampler sampler;
  sampler.moments = moments;
  sampler.s = s;
  const MatrixXd diag_s = s.asDiagonal();
  const MatrixXd sinv_d = llt.solve(diag_s);  // Sigma^-1 diag(s)
  sampler.cond_coef = MatrixXd::Identity(p, p) - sinv_d;
  const MatrixXd cond_cov = symmetrized(2.0 * diag_s - s.asDiagonal() * sinv_d);
  sampler.cond_chol = psd_cholesky(cond_cov);
  return sampler;
}

AugmentedDesign sample_knockoffs(const KnockoffSampler& sampler, const MatrixXd& x,
                                 std::uint64_t rng_seed) {
  const Eigen::Index p = sampler.p();
  if (x.cols() != p) {
    throw Error(ErrorKind::DimensionMismatch,
                "expected " + std::to_string(p) + " columns, got " + std::to_string(x.cols()));
  }
  const Eigen::Index n = x.rows();
  const auto& mom = sampler.moments;
  const MatrixXd xs =
      (x.rowwise() - mom.mean.transpose()).array().rowwise() / mom.scale.transpose().array();

  MatrixXd noise(n, p);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    CounterRng rng(rng_seed, {static_cast<std::uint64_t>(Stream::Knockoffs),
                              static_cast<std::uint64_t>(i)});
    for (Eigen::Index j = 0; j < p; ++j) noise(i, j) = rng.normal();
  }

  AugmentedDesign out;
  out.n = static_cast<int>(n);
  out.p = static_cast<int>(p);
  out.z.resize(n, 2 * p);
  out.z.leftCols(p) = xs;
  out.z.rightCols(p).noalias() = xs * sampler.cond_coef;
  out.z.rightCols(p).noalias() += noise * sampler.cond_chol.transpose();
  return out;
}

MatrixXd target_joint_covariance(const MomentModel& moments, const VectorXd& s) {
  const Eigen::Index p = moments.p();
  MatrixXd joint(2 * p, 2 * p);
  const MatrixXd off = moments.sigma - MatrixXd(s.asDiagonal());
  joint.topLeftCorner(p, p) = moments.sigma;
  joint.bottomRightCorner(p, p) = moments.sigma;
  joint.topRightCorner(p, p) = off;
  joint.bottomLeftCorner(p, p) = off;
  return joint;
}

MatrixXd implied_joint_covariance(const KnockoffSampler& sampler) {
  const Eigen::Index p = sampler.p();
  const MatrixXd& sigma = sampler.moments.sigma;
  MatrixXd joint(2 * p, 2 * p);
  const MatrixXd cross = sigma * sampler.cond_coef;
  joint.topLeftCorner(p, p) = sigma;
  joint.topRightCorner(p, p) = cross;
  joint.bottomLeftCorner(p, p) = cross.transpose();
  joint.bottomRightCorner(p, p) = sampler.cond_coef.transpose() * sigma * sampler.cond_coef +
                                  sampler.cond_chol * sampler.cond_chol.transpose();
  return joint;
}

}  // namespace coxko
