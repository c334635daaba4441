#pragma once

// End-to-end selection on one dataset: the CoxLasso baseline (cross-validated
// Lasso on the original covariates) and the knockoff filter (knockoffs ->
// cross-validated Lasso on [X, X~] -> LCD statistics -> thresholds).

#include <cstdint>
#include <string>
#include <vector>

#include "coxko/coxnet.hpp"
#include "coxko/filter.hpp"
#include "coxko/knockoffs.hpp"

namespace coxko {

struct PipelineOptions {
  int folds = 10;
  double q = 0.2;
  std::uint64_t seed = 0;
  int grid_points = 100;
  bool zero_s = false;  // debug: knockoffs identical to the originals
  PathOptions path;
};

struct LassoSelection {
  std::vector<int> selected;
  double lambda = 0.0;
  int lambda_index = 0;
  bool converged = true;
  int empty_test_folds = 0;
};

struct KnockoffSelection {
  KnockoffStats stats;
  SelectionResult knockoff;
  SelectionResult knockoff_plus;
  double lambda = 0.0;
  int lambda_index = 0;
  bool converged = true;
  double shrinkage = 0.0;
  double s_value = 0.0;
  int empty_test_folds = 0;
};

/// Seeds for the independent random pieces of one pipeline run.
std::uint64_t fold_seed(std::uint64_t seed);
std::uint64_t knockoff_seed(std::uint64_t seed);

/// Knockoff copy of the covariates in `x` (standardized scale).
AugmentedDesign make_knockoffs(const MatrixXd& x, std::uint64_t seed, bool zero_s = false);

/// `data` carries the raw covariates; columns are standardized before fitting.
LassoSelection select_coxlasso(const SurvivalDataset& data, const PipelineOptions& options);

KnockoffSelection select_coxknockoff(const SurvivalDataset& data, const PipelineOptions& options);

/// Names for an augmented design: originals followed by `<name>__ko`.
std::vector<std::string> augmented_names(const std::vector<std::string>& names);

}  // namespace coxko
