#include "coxko/pipeline.hpp"

#include "coxko/rng.hpp"

namespace coxko {

std::uint64_t fold_seed(std::uint64_t seed) {
  return derive_key({seed, static_cast<std::uint64_t>(Stream::Folds)});
}

std::uint64_t knockoff_seed(std::uint64_t seed) {
  return derive_key({seed, static_cast<std::uint64_t>(Stream::Knockoffs)});
}

AugmentedDesign make_knockoffs(const MatrixXd& x, std::uint64_t seed, bool zero_s) {
  const MomentModel moments = fit_moments(x);
  const VectorXd s = zero_s ? VectorXd::Zero(moments.p()) : equicorrelated_s(moments);
  return sample_knockoffs(build_sampler(moments, s), x, seed);
}

std::vector<std::string> augmented_names(const std::vector<std::string>& names) {
  std::vector<std::string> out(names);
  for (const auto& name : names) out.push_back(name + "__ko");
  return out;
}

namespace {

CoxLassoFit cv_fit(const SurvivalDataset& standardized, const PipelineOptions& options) {
  const auto grid = lambda_grid(standardized, options.grid_points);
  const auto folds = stratified_folds(standardized.delta(), options.folds, fold_seed(options.seed));
  return cross_validate(standardized, folds, grid, options.path);
}

}  // namespace

LassoSelection select_coxlasso(const SurvivalDataset& data, const PipelineOptions& options) {
  const SurvivalDataset standardized =
      data.with_design(standardize_columns(data.design()), data.names());
  const CoxLassoFit fit = cv_fit(standardized, options);

  LassoSelection out;
  out.lambda_index = fit.chosen_lambda;
  out.lambda = fit.chosen_value();
  out.converged = fit.converged[fit.chosen_lambda] != 0;
  out.empty_test_folds = fit.empty_test_folds;
  for (int j = 0; j < fit.m(); ++j) {
    if (fit.coefs(fit.chosen_lambda, j) != 0.0) out.selected.push_back(j);
  }
  return out;
}

KnockoffSelection select_coxknockoff(const SurvivalDataset& data, const PipelineOptions& options) {
  const MatrixXd& x = data.design();
  const MomentModel moments = fit_moments(x);
  const VectorXd s = options.zero_s ? VectorXd::Zero(moments.p()) : equicorrelated_s(moments);
  const AugmentedDesign aug =
      sample_knockoffs(build_sampler(moments, s), x, knockoff_seed(options.seed));

  const SurvivalDataset standardized =
      data.with_design(standardize_columns(aug.z), augmented_names(data.names()));
  const CoxLassoFit fit = cv_fit(standardized, options);

  KnockoffSelection out;
  out.lambda_index = fit.chosen_lambda;
  out.lambda = fit.chosen_value();
  out.converged = fit.converged[fit.chosen_lambda] != 0;
  out.empty_test_folds = fit.empty_test_folds;
  out.shrinkage = moments.shrinkage;
  out.s_value = s.size() > 0 ? s[0] : 0.0;
  out.stats = lcd_statistics(fit, fit.chosen_lambda, aug.p, "cv");
  out.knockoff = knockoff_threshold(out.stats.w, options.q, false);
  out.knockoff_plus = knockoff_threshold(out.stats.w, options.q, true);
  return out;
}

}  // namespace coxko
