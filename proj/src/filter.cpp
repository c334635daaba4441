#include "coxko/filter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "coxko/error.hpp"

namespace coxko {

const char* to_string(ThresholdKind kind) {
  return kind == ThresholdKind::Knockoff ? "knockoff" : "knockoff_plus";
}

KnockoffStats lcd_statistics(const VectorXd& coef, int p) {
  if (p < 1 || coef.size() != 2 * p) {
    throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(2 * p) +
                                                  " coefficients, got " + std::to_string(coef.size()));
  }
  KnockoffStats stats;
  stats.w = coef.head(p).cwiseAbs() - coef.tail(p).cwiseAbs();
  return stats;
}

KnockoffStats lcd_statistics(const CoxLassoFit& fit, int at, int p, std::string source) {
  if (at < 0 || at >= fit.size()) throw Error(ErrorKind::InvalidArgument, "lambda index out of range");
  KnockoffStats stats = lcd_statistics(fit.coef(at), p);
  stats.lambda_used = fit.lambda_grid[at];
  stats.source = std::move(source);
  return stats;
}

double threshold_ratio(const VectorXd& w, double t, bool plus) {
  int below = 0;
  int above = 0;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    below += w[j] <= -t;
    above += w[j] >= t;
  }
  return (below + (plus ? 1.0 : 0.0)) / std::max(above, 1);
}

SelectionResult knockoff_threshold(const VectorXd& w, double q, bool plus) {
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorKind::InvalidQ, "q must lie in (0, 1)");
  SelectionResult result;
  result.q = q;
  result.kind = plus ? ThresholdKind::KnockoffPlus : ThresholdKind::Knockoff;

  std::vector<double> positive;
  std::vector<double> negative;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    if (w[j] > 0.0) positive.push_back(w[j]);
    if (w[j] < 0.0) negative.push_back(-w[j]);
  }
  std::sort(positive.begin(), positive.end());
  std::sort(negative.begin(), negative.end());
  std::vector<double> candidates(positive);
  candidates.insert(candidates.end(), negative.begin(), negative.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // Ascending sweep; pos_skip / neg_skip count the entries strictly below t.
  std::size_t pos_skip = 0;
  std::size_t neg_skip = 0;
  const double offset = plus ? 1.0 : 0.0;
  for (double t : candidates) {
    while (pos_skip < positive.size() && positive[pos_skip] < t) ++pos_skip;
    while (neg_skip < negative.size() && negative[neg_skip] < t) ++neg_skip;
    const auto above = static_cast<double>(positive.size() - pos_skip);
    const auto below = static_cast<double>(negative.size() - neg_skip);
    const double ratio = (below + offset) / std::max(above, 1.0);
    result.ratio_at_threshold = std::min(result.ratio_at_threshold, ratio);
    if (ratio <= q) {
      result.threshold = t;
      result.ratio_at_threshold = ratio;
      break;
    }
  }
  if (std::isfinite(result.threshold)) {
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      if (w[j] >= result.threshold) result.selected.push_back(static_cast<int>(j));
    }
  }
  return result;
}

bool certify_threshold(const VectorXd& w, const SelectionResult& result) {
  const bool plus = result.kind == ThresholdKind::KnockoffPlus;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    const double t = std::abs(w[j]);
    if (t == 0.0) continue;
    if (t < result.threshold && threshold_ratio(w, t, plus) <= result.q) return false;
  }
  if (std::isfinite(result.threshold)) {
    if (threshold_ratio(w, result.threshold, plus) > result.q) return false;
    bool is_candidate = false;
    for (Eigen::Index j = 0; j < w.size(); ++j) is_candidate |= std::abs(w[j]) == result.threshold;
    if (!is_candidate) return false;
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      const bool chosen = std::binary_search(result.selected.begin(), result.selected.end(),
                                             static_cast<int>(j));
      if (chosen != (w[j] >= result.threshold)) return false;
    }
  } else if (!result.selected.empty()) {
    return false;
  }
  return true;
}

TruthMetrics score(const std::vector<int>& selected, const std::vector<int>& truth, int p, double q,
                   bool require_power) {
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorKind::InvalidQ, "q must lie in (0, 1)");
  std::vector<char> relevant(p, 0);
  for (int j : truth) {
    if (j < 0 || j >= p) throw Error(ErrorKind::InvalidArgument, "truth index out of range");
    relevant[j] = 1;
  }
  if (truth.empty() && require_power) throw Error(ErrorKind::EmptyTruth, "power needs a nonempty S0");

  TruthMetrics metrics;
  std::vector<char> seen(p, 0);
  for (int j : selected) {
    if (j < 0 || j >= p) throw Error(ErrorKind::InvalidArgument, "selected index out of range");
    if (seen[j]) continue;
    seen[j] = 1;
    ++metrics.n_selected;
    metrics.n_true_positive += relevant[j];
  }
  int n_true = 0;
  for (char r : relevant) n_true += r;
  const int false_pos = metrics.n_selected - metrics.n_true_positive;
  metrics.fdp = static_cast<double>(false_pos) / std::max(metrics.n_selected, 1);
  metrics.tdp = n_true > 0 ? static_cast<double>(metrics.n_true_positive) / n_true : 0.0;
  metrics.mfdr_summand = false_pos / (metrics.n_selected + 1.0 / q);
  return metrics;
}

SurvivalDataset swap_columns(const SurvivalDataset& data, int a, int b) {
  MatrixXd design = data.design();
  design.col(a).swap(design.col(b));
  auto names = data.names();
  std::swap(names[a], names[b]);
  return data.with_design(std::move(design), std::move(names));
}

FlipSignReport flip_sign_check(const SurvivalDataset& data, int j, double lambda,
                               const PathOptions& options) {
  if (data.m() % 2 != 0) throw Error(ErrorKind::DimensionMismatch, "augmented design needs 2p columns");
  const int p = data.m() / 2;
  if (j < 0 || j >= p) throw Error(ErrorKind::InvalidArgument, "column index out of range");

  FlipSignReport report;
  report.j = j;
  report.lambda = lambda;
  const CoxLassoFit original = fit_path(data, {lambda}, options);
  const CoxLassoFit swapped = fit_path(swap_columns(data, j, j + p), {lambda}, options);
  if (!original.all_converged() || !swapped.all_converged()) {
    throw Error(ErrorKind::NotConverged, "flip-sign refit at lambda " + std::to_string(lambda));
  }
  report.original = lcd_statistics(original, 0, p, "original");
  report.swapped = lcd_statistics(swapped, 0, p, "swapped");
  for (int k = 0; k < p; ++k) {
    const double diff = std::abs(report.swapped.w[k] - report.original.w[k]);
    if (k == j) {
      report.sign_discrepancy = std::abs(report.swapped.w[k] + report.original.w[k]);
    } else {
      report.max_other_change = std::max(report.max_other_change, diff);
    }
  }
  return report;
}

}  // namespace coxko
