#pragma once

// Monte-Carlo harness: synthetic censored survival data, seeded replications of
// CoxLasso / CoxKnockoff / CoxKnockoff+, and aggregated FDR and power tables.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coxko/pipeline.hpp"

namespace coxko {

enum class BetaCase { Null, Case1, Case2, Case3 };
enum class CovDist { GaussianAR, ScaledT };
enum class Baseline { Constant, Linear };
enum class Censoring { IndependentExponential, CovariateDependent };

struct Scenario {
  std::string name = "scenario";
  int n = 500;
  int p = 50;
  BetaCase beta_case = BetaCase::Case2;
  CovDist cov_dist = CovDist::GaussianAR;
  double rho = 0.5;
  double nu = 3.0;
  Baseline baseline = Baseline::Constant;
  Censoring censoring = Censoring::IndependentExponential;
  double target_rate = 0.2;
  double q = 0.2;
  int replications = 100;
  std::uint64_t seed = 1;
  int folds = 10;

  /// Coefficients: 5 on 1..10 (case1), 2 on 1..10 (case2), 2 on 1..20 (case3), 0 (null).
  VectorXd beta() const;
  /// Censoring coefficients: 2 on the first two covariates when covariate dependent.
  VectorXd gamma() const;
  /// 0-based indices of the nonzero coefficients.
  std::vector<int> support() const;
  void validate() const;
};

const char* to_string(BetaCase value);
const char* to_string(CovDist value);
const char* to_string(Baseline value);
const char* to_string(Censoring value);

/// Draws covariate rows 0..rows-1 restricted to the first `cols` coordinates.
/// Leading coordinates do not depend on `cols` because the factor is lower triangular.
class CovariateGenerator {
 public:
  explicit CovariateGenerator(const Scenario& scenario);
  MatrixXd draw(int rows, int cols, std::uint64_t stream_key) const;

 private:
  CovDist dist_;
  double nu_;
  MatrixXd chol_;
};

MatrixXd gen_covariates(const Scenario& scenario, int rep_index);

/// Latent event times for hazard h0(t) exp(beta'x); row i uses stream (key, i).
VectorXd gen_survival(const MatrixXd& x, const VectorXd& beta, Baseline baseline,
                      std::uint64_t stream_key);

struct CalibrationResult {
  double parameter = 0.0;  // exponential rate (independent) or mean multiplier c
  double achieved_rate = 0.0;
  int evaluations = 0;
};

inline constexpr int kCalibrationDraws = 100000;

/// Bisection on the censoring parameter against a Monte-Carlo estimate of the
/// censoring probability from fresh draws; deterministic given the seed.
CalibrationResult calibrate_censoring(const Scenario& scenario, int draws = kCalibrationDraws);

/// Censoring times for the scenario's censoring model at a calibrated parameter.
VectorXd gen_censoring(const Scenario& scenario, const MatrixXd& x, double parameter,
                       std::uint64_t stream_key);

/// One replication's observed data (covariates, times, indicators).
SurvivalDataset gen_dataset(const Scenario& scenario, int rep_index, double censoring_parameter);

enum class Method { CoxLasso = 0, CoxKnockoff = 1, CoxKnockoffPlus = 2 };
inline constexpr int kMethodCount = 3;
const char* to_string(Method method);

struct MethodOutcome {
  double fdp = 0.0;
  double tdp = 0.0;
  double mfdr_summand = 0.0;
  int n_selected = 0;
};

struct ReplicationRecord {
  int rep = 0;
  bool excluded = false;
  std::string reason;
  std::array<MethodOutcome, kMethodCount> methods{};
  double censoring_rate = 0.0;
  double runtime_seconds = 0.0;
};

struct MethodSummary {
  double fdr = 0.0;
  double power = 0.0;
  double mfdr = 0.0;
  double mean_selected = 0.0;
};

struct ScenarioReport {
  Scenario scenario;
  CalibrationResult calibration;
  std::vector<ReplicationRecord> per_rep;
  std::array<MethodSummary, kMethodCount> summary{};
  int excluded = 0;
  double achieved_censoring = 0.0;

  int used() const { return static_cast<int>(per_rep.size()) - excluded; }
};

/// Maximum share of failed replications tolerated before the scenario errors.
inline constexpr double kMaxFailureShare = 0.05;

ReplicationRecord run_replication(const Scenario& scenario, int rep_index, double censoring_parameter,
                                  const PathOptions& path = {});

/// Replications run concurrently; the report is identical for any thread count.
ScenarioReport run_scenario(const Scenario& scenario, const PathOptions& path = {});

/// Means over the non-excluded replications.
void summarize(ScenarioReport& report);

struct ReportRow {
  std::string scenario;
  std::string distribution;
  int n = 0;
  int p = 0;
  double censoring_target = 0.0;
  double censoring_achieved = 0.0;
  std::string method;
  double fdr = 0.0;
  double power = 0.0;
  double mfdr = 0.0;
  double mean_selected = 0.0;
  int replications = 0;
  int excluded = 0;
  std::string status;  // "ok" or "insufficient"
};

struct ReportTable {
  std::vector<ReportRow> rows;

  std::string csv() const;
  std::string text() const;
};

ReportTable aggregate_report(const std::vector<ScenarioReport>& reports);

/// Parses the output of ReportTable::csv.
std::vector<ReportRow> parse_report_csv(const std::string& text);

// Scenario files: flat key=value lines, '#' comments.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string scenario_to_text(const Scenario& scenario);

/// Built-in scenario presets by name (e.g. "study1_case2_desk").
bool has_preset(const std::string& name);
Scenario preset_scenario(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace coxko
