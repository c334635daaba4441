#include "coxko/coxnet.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <string>

#include "coxko/error.hpp"
#include "coxko/rng.hpp"

namespace coxko {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Running log(sum exp(x)) that rescales whenever a new maximum arrives.
struct LogSumExp {
  double max = kNegInf;
  double sum = 0.0;

  // Returns the factor by which previously accumulated terms were rescaled.
  double add(double x, double& weight) {
    if (x <= max) {
      weight = std::exp(x - max);
      sum += weight;
      return 1.0;
    }
    const double factor = std::exp(max - x);
    sum = sum * factor + 1.0;
    max = x;
    weight = 1.0;
    return factor;
  }

  void add(double x) {
    double w;
    add(x, w);
  }

  double value() const { return max + std::log(sum); }
};

double soft_threshold(double u, double t) {
  if (u > t) return u - t;
  if (u < -t) return u + t;
  return 0.0;
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, what);
}

// log S_k for every block, in block order.
std::vector<double> block_log_denominators(const RiskSetIndex& index, const VectorXd& eta) {
  std::vector<double> log_denom(index.blocks.size());
  LogSumExp acc;
  for (std::size_t k = 0; k < index.blocks.size(); ++k) {
    const auto& block = index.blocks[k];
    for (int pos = block.begin; pos < block.end; ++pos) acc.add(eta[index.order[pos]]);
    log_denom[k] = acc.value();
  }
  return log_denom;
}

double log_lik_from_denominators(const RiskSetIndex& index, const VectorXi& delta,
                                 const VectorXd& eta, const std::vector<double>& log_denom) {
  double total = 0.0;
  for (std::size_t k = 0; k < index.blocks.size(); ++k) {
    const auto& block = index.blocks[k];
    if (block.events == 0) continue;
    for (int pos = block.begin; pos < block.end; ++pos) {
      const int j = index.order[pos];
      if (delta[j]) total += eta[j];
    }
    total -= block.events * log_denom[k];
  }
  return total;
}

}  // namespace

RiskSetKernel::RiskSetKernel(const SurvivalDataset& data)
    : index_(RiskSetIndex::build(data.y(), data.delta())), delta_(data.delta()) {}

double RiskSetKernel::log_lik_sum(const VectorXd& eta) const {
  const double value =
      log_lik_from_denominators(index_, delta_, eta, block_log_denominators(index_, eta));
  check_finite(value, "partial likelihood overflow");
  return value;
}

double RiskSetKernel::expected_events(const VectorXd& eta, VectorXd& expected) const {
  const auto log_denom = block_log_denominators(index_, eta);
  expected.resize(eta.size());
  // Walk from the latest block to the earliest so each observation sees every
  // event block whose risk set contains it.
  LogSumExp hazard;
  for (std::size_t k = index_.blocks.size(); k-- > 0;) {
    const auto& block = index_.blocks[k];
    if (block.events > 0) hazard.add(std::log(static_cast<double>(block.events)) - log_denom[k]);
    const double log_cum = hazard.sum > 0.0 ? hazard.value() : kNegInf;
    for (int pos = block.begin; pos < block.end; ++pos) {
      const int j = index_.order[pos];
      expected[j] = log_cum == kNegInf ? 0.0 : std::exp(eta[j] + log_cum);
    }
  }
  const double value = log_lik_from_denominators(index_, delta_, eta, log_denom);
  check_finite(value, "partial likelihood overflow");
  return value;
}

MatrixXd RiskSetKernel::loss_hessian(const MatrixXd& zw, const VectorXd& eta,
                                     const VectorXd& expected) const {
  const Eigen::Index k = zw.cols();
  const MatrixXd scaled = zw.array().colwise() * expected.array().sqrt();
  MatrixXd hess = scaled.transpose() * scaled;

  int event_blocks = 0;
  for (const auto& block : index_.blocks) event_blocks += block.events > 0;
  MatrixXd means(event_blocks, k);

  const MatrixXd rows = zw.transpose();
  VectorXd acc = VectorXd::Zero(k);
  LogSumExp denom;
  int r = 0;
  for (const auto& block : index_.blocks) {
    for (int pos = block.begin; pos < block.end; ++pos) {
      const int j = index_.order[pos];
      double w;
      const double factor = denom.add(eta[j], w);
      if (factor != 1.0) acc *= factor;
      acc.noalias() += w * rows.col(j);
    }
    if (block.events > 0) {
      means.row(r++) = (std::sqrt(static_cast<double>(block.events)) / denom.sum) * acc.transpose();
    }
  }
  hess.noalias() -= means.transpose() * means;
  hess /= static_cast<double>(n());
  if (!hess.allFinite()) throw Error(ErrorKind::NonFinite, "Hessian overflow");
  return hess;
}

double RiskSetKernel::quadratic_form(const VectorXd& u, const VectorXd& eta) const {
  VectorXd expected;
  expected_events(eta, expected);
  double total = -(expected.array() * u.array().square()).sum();
  LogSumExp denom;
  double acc = 0.0;
  for (const auto& block : index_.blocks) {
    for (int pos = block.begin; pos < block.end; ++pos) {
      const int j = index_.order[pos];
      double w;
      const double factor = denom.add(eta[j], w);
      acc = acc * factor + w * u[j];
    }
    if (block.events > 0) {
      const double mean = acc / denom.sum;
      total += block.events * mean * mean;
    }
  }
  return total / n();
}

double partial_loglik(const SurvivalDataset& data, const VectorXd& b) {
  if (b.size() != data.m()) throw Error(ErrorKind::DimensionMismatch, "coefficient length");
  if (!b.allFinite()) throw Error(ErrorKind::NonFinite, "coefficients");
  const RiskSetKernel kernel(data);
  return kernel.log_lik_sum(data.design() * b) / data.n();
}

VectorXd gradient(const SurvivalDataset& data, const VectorXd& b) {
  if (b.size() != data.m()) throw Error(ErrorKind::DimensionMismatch, "coefficient length");
  if (!b.allFinite()) throw Error(ErrorKind::NonFinite, "coefficients");
  const RiskSetKernel kernel(data);
  VectorXd expected;
  kernel.expected_events(data.design() * b, expected);
  const VectorXd residual = data.delta().cast<double>() - expected;
  return data.design().transpose() * residual / data.n();
}

double hessian_quadratic(const SurvivalDataset& data, const VectorXd& b, const VectorXd& v) {
  if (b.size() != data.m() || v.size() != data.m()) {
    throw Error(ErrorKind::DimensionMismatch, "coefficient length");
  }
  const RiskSetKernel kernel(data);
  return kernel.quadratic_form(data.design() * v, data.design() * b);
}

bool CoxLassoFit::all_converged() const {
  return std::all_of(converged.begin(), converged.end(), [](char c) { return c != 0; });
}

double lambda_max(const SurvivalDataset& data) {
  return gradient(data, VectorXd::Zero(data.m())).cwiseAbs().maxCoeff();
}

std::vector<double> lambda_grid(const SurvivalDataset& data, int points, std::optional<double> eps) {
  if (points < 1) throw Error(ErrorKind::InvalidArgument, "grid needs at least one point");
  const double top = lambda_max(data);
  if (!(top > 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda_max is zero");
  const double ratio = eps.value_or(data.n() > data.m() ? 1e-3 : 1e-2);
  std::vector<double> grid(points);
  for (int g = 0; g < points; ++g) {
    const double frac = points == 1 ? 0.0 : static_cast<double>(g) / (points - 1);
    grid[g] = top * std::pow(ratio, frac);
  }
  grid[0] = top;
  return grid;
}

namespace {

double l1(const VectorXd& b) { return b.cwiseAbs().sum(); }

double violation(const VectorXd& loss_grad, const VectorXd& b, double lambda) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    const double v = b[j] == 0.0 ? std::max(0.0, std::abs(loss_grad[j]) - lambda)
                                 : std::abs(loss_grad[j] + lambda * (b[j] > 0 ? 1.0 : -1.0));
    worst = std::max(worst, v);
  }
  return worst;
}

// Cyclic coordinate descent for
//   min_beta g'(beta - b) + 0.5 (beta - b)' H (beta - b) + lambda |beta|_1
// starting at beta = b, alternating full sweeps with sweeps over the nonzeros.
int coordinate_descent(const MatrixXd& hess, const VectorXd& g, VectorXd& beta, double lambda,
                       int max_cycles) {
  constexpr double kTol = 1e-24;
  VectorXd slope = g;
  const Eigen::Index k = beta.size();
  auto update = [&](Eigen::Index c) {
    const double h = hess(c, c);
    if (h <= 1e-14) return 0.0;
    const double old = beta[c];
    const double fresh = soft_threshold(h * old - slope[c], lambda) / h;
    if (fresh == old) return 0.0;
    const double step = fresh - old;
    beta[c] = fresh;
    slope.noalias() += hess.col(c) * step;
    return h * step * step;
  };

  int cycles = 0;
  while (cycles < max_cycles) {
    double change = 0.0;
    for (Eigen::Index c = 0; c < k; ++c) change = std::max(change, update(c));
    ++cycles;
    if (change < kTol) break;
    while (cycles < max_cycles) {
      double active_change = 0.0;
      for (Eigen::Index c = 0; c < k; ++c) {
        if (beta[c] != 0.0) active_change = std::max(active_change, update(c));
      }
      ++cycles;
      if (active_change < kTol) break;
    }
  }
  return cycles;
}

// Proximal Newton on the working set with a coordinate-descent inner solve and
// a backtracking line search on the penalized objective.
class PathSolver {
 public:
  PathSolver(const SurvivalDataset& data, const PathOptions& options)
      : z_(data.design()), delta_(data.delta().cast<double>()), kernel_(data), options_(options),
        n_(data.n()), b_(VectorXd::Zero(data.m())), eta_(VectorXd::Zero(data.n())) {
    refresh();
  }

  struct Outcome {
    int steps = 0;
    bool converged = false;
    double kkt = 0.0;
    std::vector<double> trace;
  };

  Outcome solve(double lambda, double previous_lambda) {
    Outcome out;
    const Eigen::Index m = b_.size();
    std::vector<char> in_set(m, 0);
    std::vector<int> working;
    auto include = [&](Eigen::Index j) {
      if (!in_set[j]) {
        in_set[j] = 1;
        working.push_back(static_cast<int>(j));
      }
    };
    const double screen = std::max(0.0, 2.0 * lambda - previous_lambda);
    for (Eigen::Index j = 0; j < m; ++j) {
      if (b_[j] != 0.0 || std::abs(grad_[j]) > screen) include(j);
    }

    int cycles = 0;
    double objective = current_objective(lambda);
    for (;;) {
      out.kkt = violation(grad_, b_, lambda);
      if (options_.record_objective) out.trace.push_back(objective);
      if (out.kkt <= options_.kkt_tol) break;
      if (out.steps >= options_.max_newton || cycles >= options_.max_iter) break;
      ++out.steps;

      for (Eigen::Index j = 0; j < m; ++j) {
        if (std::abs(grad_[j]) > lambda) include(j);
      }
      std::sort(working.begin(), working.end());

      const auto k = static_cast<Eigen::Index>(working.size());
      MatrixXd zw(z_.rows(), k);
      VectorXd g(k);
      VectorXd b_old(k);
      for (Eigen::Index c = 0; c < k; ++c) {
        zw.col(c) = z_.col(working[c]);
        g[c] = grad_[working[c]];
        b_old[c] = b_[working[c]];
      }
      const MatrixXd hess = kernel_.loss_hessian(zw, eta_, expected_);
      VectorXd beta = b_old;
      cycles += coordinate_descent(hess, g, beta, lambda, options_.max_iter - cycles);

      const VectorXd dir = beta - b_old;
      if (dir.cwiseAbs().maxCoeff() == 0.0) break;
      const VectorXd d_eta = zw * dir;
      const double rest_l1 = l1(b_) - l1(b_old);
      const double predicted = g.dot(dir) + lambda * (l1(beta) - l1(b_old));
      const double slack = 16.0 * std::numeric_limits<double>::epsilon() * (std::abs(objective) + 1.0);

      bool accepted = false;
      double t = 1.0;
      VectorXd eta_try;
      VectorXd b_try;
      double obj_try = 0.0;
      for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
        eta_try = eta_ + t * d_eta;
        b_try = b_old + t * dir;
        obj_try = -kernel_.log_lik_sum(eta_try) / n_ + lambda * (rest_l1 + l1(b_try));
        if (obj_try <= objective + 1e-4 * t * std::min(predicted, 0.0) + slack) {
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      const double decrease = objective - obj_try;

      for (Eigen::Index c = 0; c < k; ++c) b_[working[c]] = b_try[c];
      eta_ = std::move(eta_try);
      refresh();
      objective = current_objective(lambda);
      if (decrease <= slack) {
        // Progress has reached rounding level; accept if stationarity is certified.
        out.kkt = violation(grad_, b_, lambda);
        if (options_.record_objective) out.trace.push_back(objective);
        break;
      }
    }
    out.converged = out.kkt <= options_.kkt_certify;
    return out;
  }

  const VectorXd& coef() const { return b_; }

 private:
  void refresh() {
    const double ll = kernel_.expected_events(eta_, expected_);
    loglik_ = ll / n_;
    grad_ = -(z_.transpose() * (delta_ - expected_)) / n_;
  }

  double current_objective(double lambda) const { return -loglik_ + lambda * l1(b_); }

  const MatrixXd& z_;
  VectorXd delta_;
  RiskSetKernel kernel_;
  PathOptions options_;
  double n_;
  VectorXd b_;
  VectorXd eta_;
  VectorXd expected_;
  VectorXd grad_;
  double loglik_ = 0.0;
};

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty lambda grid");
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (!(grid[g] > 0.0) || !std::isfinite(grid[g])) {
      throw Error(ErrorKind::InvalidArgument, "lambda values must be positive");
    }
    if (g > 0 && !(grid[g] < grid[g - 1])) {
      throw Error(ErrorKind::InvalidArgument, "lambda grid must be strictly decreasing");
    }
  }
}

}  // namespace

double penalized_objective(const SurvivalDataset& data, const VectorXd& b, double lambda) {
  return -partial_loglik(data, b) + lambda * l1(b);
}

double kkt_violation(const SurvivalDataset& data, const VectorXd& b, double lambda) {
  return violation(-gradient(data, b), b, lambda);
}

CoxLassoFit fit_path(const SurvivalDataset& data, const std::vector<double>& grid,
                     const PathOptions& options) {
  check_grid(grid);
  CoxLassoFit fit;
  fit.lambda_grid = grid;
  const auto G = static_cast<Eigen::Index>(grid.size());
  fit.coefs.resize(G, data.m());
  fit.n_iter.resize(G);
  fit.converged.resize(G);
  fit.kkt_residual.resize(G);
  if (options.record_objective) fit.objective_trace.resize(G);

  PathSolver solver(data, options);
  for (Eigen::Index g = 0; g < G; ++g) {
    auto outcome = solver.solve(grid[g], g > 0 ? grid[g - 1] : grid[g]);
    fit.coefs.row(g) = solver.coef().transpose();
    fit.n_iter[g] = outcome.steps;
    fit.converged[g] = outcome.converged ? 1 : 0;
    fit.kkt_residual[g] = outcome.kkt;
    if (options.record_objective) fit.objective_trace[g] = std::move(outcome.trace);
  }
  return fit;
}

std::vector<int> stratified_folds(const VectorXi& delta, int folds, std::uint64_t seed) {
  const int n = static_cast<int>(delta.size());
  if (folds < 2 || folds > n) {
    throw Error(ErrorKind::InvalidArgument, "folds must lie in [2, n], got " + std::to_string(folds));
  }
  std::vector<int> events;
  std::vector<int> censored;
  for (int i = 0; i < n; ++i) (delta[i] ? events : censored).push_back(i);

  CounterRng rng(seed, {static_cast<std::uint64_t>(Stream::Folds)});
  auto shuffle = [&](std::vector<int>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng.next_u64() % i);
      std::swap(v[i - 1], v[j]);
    }
  };
  shuffle(events);
  shuffle(censored);

  std::vector<int> fold_of(n);
  int slot = 0;
  for (int i : events) fold_of[i] = slot++ % folds;
  for (int i : censored) fold_of[i] = slot++ % folds;
  return fold_of;
}

CoxLassoFit cross_validate(const SurvivalDataset& data, int folds, const std::vector<double>& grid,
                           std::uint64_t seed, const PathOptions& options) {
  return cross_validate(data, stratified_folds(data.delta(), folds, seed), grid, options);
}

CoxLassoFit cross_validate(const SurvivalDataset& data, const std::vector<int>& fold_of_row,
                           const std::vector<double>& grid, const PathOptions& options) {
  check_grid(grid);
  if (static_cast<int>(fold_of_row.size()) != data.n()) {
    throw Error(ErrorKind::DimensionMismatch, "fold labels must cover every row");
  }
  const int folds = *std::max_element(fold_of_row.begin(), fold_of_row.end()) + 1;
  if (folds < 2) throw Error(ErrorKind::InvalidArgument, "cross-validation needs at least two folds");

  std::vector<std::vector<int>> train(folds);
  std::vector<int> test_events(folds, 0);
  for (int i = 0; i < data.n(); ++i) {
    const int f = fold_of_row[i];
    if (f < 0) throw Error(ErrorKind::InvalidArgument, "negative fold label");
    test_events[f] += data.delta()[i];
    for (int k = 0; k < folds; ++k) {
      if (k != f) train[k].push_back(i);
    }
  }
  const int total_events = data.n_events();
  for (int k = 0; k < folds; ++k) {
    if (train[k].empty() || test_events[k] == total_events) {
      throw Error(ErrorKind::FoldWithoutEvents,
                  "training part of fold " + std::to_string(k + 1) + " has no events");
    }
  }

  const auto G = static_cast<Eigen::Index>(grid.size());
  MatrixXd contribution = MatrixXd::Zero(G, folds);
  const RiskSetKernel full_kernel(data);
  PathOptions fold_options = options;
  fold_options.record_objective = false;

  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < folds; ++k) {
    try {
      if (test_events[k] == 0) continue;
      const SurvivalDataset part = data.subset(train[k]);
      const CoxLassoFit fold_fit = fit_path(part, grid, fold_options);
      const RiskSetKernel part_kernel(part);
      for (Eigen::Index g = 0; g < G; ++g) {
        const VectorXd b = fold_fit.coef(static_cast<int>(g));
        const double full = full_kernel.log_lik_sum(data.design() * b);
        const double held = part_kernel.log_lik_sum(part.design() * b);
        contribution(g, k) = full - held;
      }
    } catch (...) {
#pragma omp critical(coxko_cv_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  CoxLassoFit fit = fit_path(data, grid, options);
  VectorXd deviance(G);
  for (Eigen::Index g = 0; g < G; ++g) {
    double sum = 0.0;
    for (int k = 0; k < folds; ++k) sum += contribution(g, k);
    deviance[g] = -2.0 * sum;
  }
  Eigen::Index best = 0;
  for (Eigen::Index g = 1; g < G; ++g) {
    if (deviance[g] < deviance[best]) best = g;
  }
  fit.cv_deviance = deviance;
  fit.chosen_lambda = static_cast<int>(best);
  fit.empty_test_folds =
      static_cast<int>(std::count(test_events.begin(), test_events.end(), 0));
  return fit;
}

MatrixXd standardize_columns(const MatrixXd& x) {
  MatrixXd out(x.rows(), x.cols());
  const double denom = static_cast<double>(std::max<Eigen::Index>(x.rows() - 1, 1));
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double mean = x.col(j).mean();
    const VectorXd centered = x.col(j).array() - mean;
    const double sd = std::sqrt(centered.squaredNorm() / denom);
    if (sd > 0.0) {
      out.col(j) = centered / sd;
    } else {
      out.col(j).setZero();
    }
  }
  return out;
}

}  // namespace coxko
