#include "coxko/survival.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coxko/error.hpp"

namespace coxko {

SurvivalDataset SurvivalDataset::create(VectorXd y, VectorXi delta, MatrixXd design,
                                        std::vector<std::string> names) {
  const auto n = y.size();
  if (delta.size() != n || design.rows() != n) {
    throw Error(ErrorKind::DimensionMismatch, "y, delta and design must have the same row count");
  }
  if (names.empty()) {
    names.reserve(design.cols());
    for (Eigen::Index j = 0; j < design.cols(); ++j) names.push_back("X" + std::to_string(j + 1));
  } else if (static_cast<Eigen::Index>(names.size()) != design.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "names must match the design column count");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(y[i] > 0.0) || !std::isfinite(y[i])) {
      throw Error(ErrorKind::NonPositiveTime, "observed time at row " + std::to_string(i + 1));
    }
    if (delta[i] != 0 && delta[i] != 1) {
      throw Error(ErrorKind::BadEventValue, "event indicator at row " + std::to_string(i + 1));
    }
  }
  if (!design.allFinite()) throw Error(ErrorKind::NonFinite, "design contains non-finite values");
  if (delta.sum() == 0) throw Error(ErrorKind::NoEvents, "all observations are censored");
  return SurvivalDataset(std::move(y), std::move(delta), std::move(design), std::move(names));
}

SurvivalDataset SurvivalDataset::subset(const std::vector<int>& rows) const {
  const auto k = static_cast<Eigen::Index>(rows.size());
  VectorXd y(k);
  VectorXi d(k);
  MatrixXd x(k, design_.cols());
  for (Eigen::Index r = 0; r < k; ++r) {
    y[r] = y_[rows[r]];
    d[r] = delta_[rows[r]];
    x.row(r) = design_.row(rows[r]);
  }
  return create(std::move(y), std::move(d), std::move(x), names_);
}

SurvivalDataset SurvivalDataset::with_design(MatrixXd design, std::vector<std::string> names) const {
  return create(y_, delta_, std::move(design), std::move(names));
}

RiskSetIndex RiskSetIndex::build(const VectorXd& y, const VectorXi& delta) {
  RiskSetIndex index;
  const int n = static_cast<int>(y.size());
  index.order.resize(n);
  std::iota(index.order.begin(), index.order.end(), 0);
  std::stable_sort(index.order.begin(), index.order.end(),
                   [&](int a, int b) { return y[a] > y[b]; });

  for (int pos = 0; pos < n;) {
    RiskSetIndex::Block block{pos, pos, 0};
    const double t = y[index.order[pos]];
    while (block.end < n && y[index.order[block.end]] == t) {
      block.events += delta[index.order[block.end]];
      ++block.end;
    }
    index.blocks.push_back(block);
    pos = block.end;
  }
  for (int i = 0; i < n; ++i) {
    if (delta[i] == 1) index.event_positions.push_back(i);
  }
  return index;
}

}  // namespace coxko
