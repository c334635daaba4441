#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the streaming kernels or the path solver.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "coxko/reference.hpp"
#include "coxko/survival.hpp"

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::VectorXi;

/// Random survival instance with continuous times (no ties unless `tie_levels` > 0).
inline coxko::SurvivalDataset random_instance(std::mt19937_64& gen, int n, int m, double event_prob = 0.7,
                                              int tie_levels = 0, double signal = 0.5) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  MatrixXd x(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) x(i, j) = normal(gen);
  VectorXd beta = VectorXd::Constant(m, signal);
  VectorXd y(n);
  VectorXi d(n);
  for (int i = 0; i < n; ++i) {
    y[i] = -std::log(unif(gen)) * std::exp(-x.row(i).dot(beta));
    if (tie_levels > 0) y[i] = std::ceil(y[i] * tie_levels) / tie_levels + 1.0 / tie_levels;
    d[i] = unif(gen) < event_prob ? 1 : 0;
  }
  d[0] = 1;
  return coxko::SurvivalDataset::create(y, d, x);
}

/// Central finite-difference gradient.
inline VectorXd fd_gradient(const std::function<double(const VectorXd&)>& f, const VectorXd& b,
                            double h = 1e-5) {
  VectorXd g(b.size());
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    VectorXd up = b;
    VectorXd down = b;
    up[j] += h;
    down[j] -= h;
    g[j] = (f(up) - f(down)) / (2.0 * h);
  }
  return g;
}

/// FISTA with backtracking on -l(b) + lambda |b|_1, using the naive double-loop
/// likelihood. Slow but simple; runs until the iterate stops moving.
inline VectorXd proximal_gradient(const coxko::SurvivalDataset& data, double lambda, int max_iter = 200000,
                                  double tol = 1e-13) {
  const auto m = data.m();
  auto loss = [&](const VectorXd& b) { return -coxko::reference::partial_loglik(data, b); };
  auto grad = [&](const VectorXd& b) { return VectorXd(-coxko::reference::gradient(data, b)); };
  auto prox = [&](const VectorXd& v, double step) {
    VectorXd out(v.size());
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      const double a = std::abs(v[j]) - step * lambda;
      out[j] = a > 0 ? std::copysign(a, v[j]) : 0.0;
    }
    return out;
  };
  VectorXd x = VectorXd::Zero(m);
  VectorXd yv = x;
  double t = 1.0;
  double step = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    const VectorXd g = grad(yv);
    const double fy = loss(yv);
    VectorXd next;
    for (;;) {
      next = prox(yv - step * g, step);
      const VectorXd diff = next - yv;
      if (loss(next) <= fy + g.dot(diff) + diff.squaredNorm() / (2.0 * step) + 1e-15) break;
      step *= 0.5;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    yv = next + ((t - 1.0) / t_next) * (next - x);
    const double moved = (next - x).lpNorm<Eigen::Infinity>();
    x = next;
    t = t_next;
    if (moved < tol && it > 10) break;
  }
  return x;
}

/// Knockoff threshold straight from the definition: the smallest t in
/// {|w_j|} \ {0} with (#{w <= -t} + plus) / max(#{w >= t}, 1) <= q.
inline double brute_threshold(const VectorXd& w, double q, bool plus) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    const double t = std::abs(w[k]);
    if (t == 0.0) continue;
    int neg = 0;
    int pos = 0;
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      if (w[j] <= -t) ++neg;
      if (w[j] >= t) ++pos;
    }
    const double ratio = (neg + (plus ? 1.0 : 0.0)) / std::max(pos, 1);
    if (ratio <= q) best = std::min(best, t);
  }
  return best;
}

/// Two-sided exact binomial test p-value for k successes in n trials at 1/2.
inline double binomial_two_sided(int k, int n) {
  auto log_pmf = [n](int i) {
    return std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) - n * std::log(2.0);
  };
  const double observed = log_pmf(k);
  double p = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double lp = log_pmf(i);
    if (lp <= observed + 1e-12) p += std::exp(lp);
  }
  return std::min(1.0, p);
}

inline MatrixXd ar_sigma(int p, double rho) {
  MatrixXd s(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) s(i, j) = std::pow(rho, std::abs(i - j));
  return s;
}

inline MatrixXd sample_cov(const MatrixXd& x) {
  const MatrixXd c = x.rowwise() - x.colwise().mean();
  return c.transpose() * c / static_cast<double>(x.rows() - 1);
}

}  // namespace oracle
