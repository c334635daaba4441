#pragma once

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coxko/coxnet.hpp"

namespace coxko {

/// Lasso coefficient differences W_j = |b_j| - |b_{j+p}|.
struct KnockoffStats {
  VectorXd w;
  double lambda_used = 0.0;
  std::string source;
};

enum class ThresholdKind { Knockoff, KnockoffPlus };

const char* to_string(ThresholdKind kind);

inline constexpr double kNoThreshold = std::numeric_limits<double>::infinity();

struct SelectionResult {
  double q = 0.2;
  ThresholdKind kind = ThresholdKind::KnockoffPlus;
  double threshold = kNoThreshold;
  std::vector<int> selected;  // 0-based, ascending
  // Defining ratio at the threshold; at +inf, the smallest ratio over the
  // candidates (+inf when there are none).
  double ratio_at_threshold = kNoThreshold;

  bool empty() const { return selected.empty(); }
};

struct TruthMetrics {
  double fdp = 0.0;
  double tdp = 0.0;
  int n_selected = 0;
  int n_true_positive = 0;
  double mfdr_summand = 0.0;  // false / (selected + 1/q)
};

KnockoffStats lcd_statistics(const CoxLassoFit& fit, int at, int p, std::string source = {});
KnockoffStats lcd_statistics(const VectorXd& coef, int p);

/// (#{W_j <= -t} + plus) / max(#{W_j >= t}, 1)
double threshold_ratio(const VectorXd& w, double t, bool plus);

/// Knockoff (plus = false) or knockoff+ threshold at level q, with selection.
SelectionResult knockoff_threshold(const VectorXd& w, double q, bool plus);

/// True when `result` is the smallest candidate satisfying the ratio bound,
/// checked by evaluating the ratio at every nonzero |W_j|.
bool certify_threshold(const VectorXd& w, const SelectionResult& result);

/// Scores a selection against the true support (0-based indices in [0, p)).
/// Throws EmptyTruth when power is requested and `truth` is empty.
TruthMetrics score(const std::vector<int>& selected, const std::vector<int>& truth, int p, double q,
                   bool require_power = true);

struct FlipSignReport {
  int j = 0;
  double lambda = 0.0;
  KnockoffStats original;
  KnockoffStats swapped;
  double max_other_change = 0.0;  // max_{k != j} |W'_k - W_k|
  double sign_discrepancy = 0.0;  // |W'_j + W_j|
};

/// Refits at a fixed lambda with columns j and j + p exchanged and compares
/// the statistics. `data` must hold an augmented design with 2p columns.
FlipSignReport flip_sign_check(const SurvivalDataset& data, int j, double lambda,
                               const PathOptions& options = {});

/// Copy of `data` with columns a and b exchanged (names included).
SurvivalDataset swap_columns(const SurvivalDataset& data, int a, int b);

}  // namespace coxko
