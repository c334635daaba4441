#include "coxko/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace coxko::reference {

namespace {

// exp(eta_j - shift) for the risk set of observation i, with shift the
// largest eta in that risk set.
VectorXd shifted_weights(const SurvivalDataset& data, const VectorXd& eta, int i, double& shift) {
  shift = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < data.n(); ++j) {
    if (data.y()[j] >= data.y()[i]) shift = std::max(shift, eta[j]);
  }
  return (eta.array() - shift).exp();
}

}  // namespace

double partial_loglik(const SurvivalDataset& data, const VectorXd& b) {
  const VectorXd eta = data.design() * b;
  const int n = data.n();
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!data.delta()[i]) continue;
    double shift;
    const VectorXd w = shifted_weights(data, eta, i, shift);
    double risk = 0.0;
    for (int j = 0; j < n; ++j) {
      if (data.y()[j] >= data.y()[i]) risk += w[j];
    }
    total += eta[i] - (std::log(risk) + shift);
  }
  return total / n;
}

VectorXd gradient(const SurvivalDataset& data, const VectorXd& b) {
  const VectorXd eta = data.design() * b;
  const int n = data.n();
  const auto& z = data.design();
  VectorXd grad = VectorXd::Zero(data.m());
  for (int i = 0; i < n; ++i) {
    if (!data.delta()[i]) continue;
    double shift;
    const VectorXd w = shifted_weights(data, eta, i, shift);
    double risk = 0.0;
    VectorXd weighted = VectorXd::Zero(data.m());
    for (int j = 0; j < n; ++j) {
      if (data.y()[j] >= data.y()[i]) {
        risk += w[j];
        weighted += w[j] * z.row(j).transpose();
      }
    }
    grad += z.row(i).transpose() - weighted / risk;
  }
  return grad / n;
}

MatrixXd hessian(const SurvivalDataset& data, const VectorXd& b) {
  const VectorXd eta = data.design() * b;
  const int n = data.n();
  const int m = data.m();
  const auto& z = data.design();
  MatrixXd hess = MatrixXd::Zero(m, m);
  for (int i = 0; i < n; ++i) {
    if (!data.delta()[i]) continue;
    double shift;
    const VectorXd w = shifted_weights(data, eta, i, shift);
    double risk = 0.0;
    for (int j = 0; j < n; ++j) {
      if (data.y()[j] >= data.y()[i]) risk += w[j];
    }
    VectorXd mean = VectorXd::Zero(m);
    for (int j = 0; j < n; ++j) {
      if (data.y()[j] >= data.y()[i]) mean += (w[j] / risk) * z.row(j).transpose();
    }
    for (int j = 0; j < n; ++j) {
      if (data.y()[j] >= data.y()[i]) {
        const VectorXd d = z.row(j).transpose() - mean;
        hess -= (w[j] / risk) * d * d.transpose();
      }
    }
  }
  return hess / n;
}

}  // namespace coxko::reference
