#pragma once

// Direct double-loop evaluations of the Cox partial likelihood and its
// derivatives. O(n^2) and single-threaded; they follow the textbook formulas
// term by term and serve as oracles for the streaming kernels in coxnet.

#include "coxko/survival.hpp"

namespace coxko::reference {

double partial_loglik(const SurvivalDataset& data, const VectorXd& b);

VectorXd gradient(const SurvivalDataset& data, const VectorXd& b);

/// Dense m x m Hessian of partial_loglik.
MatrixXd hessian(const SurvivalDataset& data, const VectorXd& b);

}  // namespace coxko::reference
