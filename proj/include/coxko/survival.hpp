#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace coxko {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::VectorXi;

/// Right-censored survival data (observed times, event indicators, covariates).
///
/// Immutable once constructed; `create` validates that every time is positive,
/// every indicator is 0 or 1 and at least one event is present. Tied event
/// times are allowed and handled by Breslow's convention downstream.
class SurvivalDataset {
 public:
  static SurvivalDataset create(VectorXd y, VectorXi delta, MatrixXd design,
                                std::vector<std::string> names = {});

  const VectorXd& y() const { return y_; }
  const VectorXi& delta() const { return delta_; }
  const MatrixXd& design() const { return design_; }
  const std::vector<std::string>& names() const { return names_; }

  int n() const { return static_cast<int>(y_.size()); }
  int m() const { return static_cast<int>(design_.cols()); }
  int n_events() const { return delta_.sum(); }
  double censoring_rate() const { return 1.0 - static_cast<double>(n_events()) / n(); }

  /// Rows listed in `rows`, in that order.
  SurvivalDataset subset(const std::vector<int>& rows) const;

  /// Same rows with a different covariate matrix.
  SurvivalDataset with_design(MatrixXd design, std::vector<std::string> names = {}) const;

 private:
  SurvivalDataset(VectorXd y, VectorXi delta, MatrixXd design, std::vector<std::string> names)
      : y_(std::move(y)), delta_(std::move(delta)), design_(std::move(design)),
        names_(std::move(names)) {}

  VectorXd y_;
  VectorXi delta_;
  MatrixXd design_;
  std::vector<std::string> names_;
};

/// Sorted view of the risk sets {j : y_j >= t}.
///
/// `order` lists observations by decreasing time. Observations sharing a time
/// form one block; every event in a block uses the same risk-set denominator.
struct RiskSetIndex {
  struct Block {
    int begin;   // position in `order`
    int end;     // one past the last position
    int events;  // number of events with this time
  };

  std::vector<int> order;
  std::vector<Block> blocks;
  std::vector<int> event_positions;

  static RiskSetIndex build(const VectorXd& y, const VectorXi& delta);
};

}  // namespace coxko
