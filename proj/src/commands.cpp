#include "coxko/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "coxko/csv_io.hpp"
#include "coxko/error.hpp"
#include "coxko/pipeline.hpp"

namespace coxko {

namespace {

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path);
}

std::vector<std::string> names_of(const std::vector<int>& idx, const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (int j : idx) out.push_back(names.at(j));
  return out;
}

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

void RunConfig::validate() const {
  if (q && !(*q > 0.0 && *q < 1.0)) throw Error(ErrorKind::InvalidQ, "q must lie in (0, 1)");
  if (folds && *folds < 2) throw Error(ErrorKind::InvalidArgument, "folds must be at least 2");
  if (replications && *replications < 1) throw Error(ErrorKind::InvalidArgument, "replications must be positive");
  if ((command == Command::Select || command == Command::Knockoffs) && input_path.empty()) {
    throw Error(ErrorKind::InvalidArgument, "--input is required");
  }
  if (command == Command::Simulate && scenario.empty()) {
    throw Error(ErrorKind::InvalidArgument, "--scenario is required");
  }
  if (command == Command::Knockoffs && format != OutputFormat::Csv) {
    throw Error(ErrorKind::InvalidArgument, "knockoffs writes CSV only");
  }
}

std::string SelectionReport::csv() const {
  std::ostringstream out;
  std::vector<std::vector<std::string>> rows;
  for (const auto& m : methods) {
    std::string joined;
    for (const auto& name : m.selected) joined += (joined.empty() ? "" : ";") + name;
    const bool knockoff = m.method != "CoxLasso";
    rows.push_back({m.method, format_double(q), std::to_string(seed), std::to_string(folds),
                    format_double(m.lambda), knockoff ? format_double(m.threshold) : "",
                    std::to_string(m.selected.size()), joined, format_double(censoring_rate)});
  }
  write_csv(out, {"method", "q", "seed", "folds", "lambda", "threshold", "n_selected", "selected", "censoring_rate"},
            rows);
  return out.str();
}

std::string SelectionReport::json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["input"] = input;
  j["n"] = n;
  j["p"] = p;
  j["censoring_rate"] = censoring_rate;
  j["q"] = q;
  j["folds"] = folds;
  j["seed"] = seed;
  j["knockoff_shrinkage"] = shrinkage;
  j["knockoff_s"] = s_value;
  j["methods"] = nlohmann::ordered_json::array();
  for (const auto& m : methods) {
    nlohmann::ordered_json entry;
    entry["method"] = m.method;
    entry["lambda"] = m.lambda;
    if (m.method != "CoxLasso") entry["threshold"] = number_or_null(m.threshold);
    entry["selected"] = m.selected;
    j["methods"].push_back(entry);
  }
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

SelectionReport cmd_select(const RunConfig& config, std::ostream* log) {
  config.validate();
  const LoadedDataset loaded = load_csv(config.input_path);
  const SurvivalDataset& data = loaded.data;
  if (log) {
    *log << "loaded " << data.n() << " rows, " << data.m() << " covariates, censoring rate "
         << format_double(data.censoring_rate()) << '\n';
  }

  PipelineOptions options;
  options.q = config.q.value_or(0.2);
  options.folds = config.folds.value_or(10);
  options.seed = config.seed.value_or(0);
  options.zero_s = config.debug_zero_s;
  if (options.folds > data.n()) {
    throw Error(ErrorKind::InvalidArgument, "more folds than rows");
  }

  SelectionReport report;
  report.input = config.input_path;
  report.n = data.n();
  report.p = data.m();
  report.censoring_rate = data.censoring_rate();
  report.q = options.q;
  report.folds = options.folds;
  report.seed = options.seed;
  if (data.n() < 200 && options.folds > 5) {
    report.warnings.push_back("fewer than 200 rows: 5 folds are recommended");
  }

  const LassoSelection lasso = select_coxlasso(data, options);
  const KnockoffSelection ko = select_coxknockoff(data, options);
  report.shrinkage = ko.shrinkage;
  report.s_value = ko.s_value;

  report.methods.push_back({"CoxLasso", names_of(lasso.selected, data.names()), lasso.lambda, 0.0});
  if (config.threshold != ThresholdChoice::Plus) {
    report.methods.push_back(
        {"CoxKnockoff", names_of(ko.knockoff.selected, data.names()), ko.lambda, ko.knockoff.threshold});
  }
  if (config.threshold != ThresholdChoice::Knockoff) {
    report.methods.push_back({"CoxKnockoff+", names_of(ko.knockoff_plus.selected, data.names()), ko.lambda,
                              ko.knockoff_plus.threshold});
  }

  if (!lasso.converged) report.warnings.push_back("CoxLasso solver did not converge at the chosen lambda");
  if (!ko.converged) report.warnings.push_back("knockoff solver did not converge at the chosen lambda");
  if (lasso.empty_test_folds + ko.empty_test_folds > 0) {
    report.warnings.push_back(std::to_string(lasso.empty_test_folds + ko.empty_test_folds) +
                              " test folds without events were skipped");
  }
  if (ko.shrinkage > 0.0) {
    report.warnings.push_back("covariance shrunk toward identity by " + format_double(ko.shrinkage));
  }
  if (log) {
    for (const auto& w : report.warnings) *log << "warning: " << w << '\n';
  }

  write_output(config.output_path, config.format == OutputFormat::Json ? report.json() : report.csv());
  return report;
}

Scenario resolve_scenario(const std::string& name_or_path) {
  if (has_preset(name_or_path)) return preset_scenario(name_or_path);
  return load_scenario(name_or_path);
}

std::string scenario_report_json(const ScenarioReport& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["scenario"] = report.scenario.name;
  j["seed"] = report.scenario.seed;
  j["censoring_parameter"] = report.calibration.parameter;
  j["calibrated_rate"] = report.calibration.achieved_rate;
  j["achieved_censoring"] = report.achieved_censoring;
  j["replications"] = report.per_rep.size();
  j["excluded"] = report.excluded;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : aggregate_report({report}).rows) {
    nlohmann::ordered_json row;
    row["distribution"] = r.distribution;
    row["n"] = r.n;
    row["p"] = r.p;
    row["censoring_target"] = r.censoring_target;
    row["method"] = r.method;
    row["fdr"] = r.fdr;
    row["power"] = r.power;
    row["mfdr"] = r.mfdr;
    row["mean_selected"] = r.mean_selected;
    row["status"] = r.status;
    j["rows"].push_back(row);
  }
  j["exclusions"] = nlohmann::ordered_json::array();
  for (const auto& rec : report.per_rep) {
    if (rec.excluded) j["exclusions"].push_back({{"rep", rec.rep}, {"reason", rec.reason}});
  }
  return j.dump(2) + "\n";
}

ScenarioReport cmd_simulate(const RunConfig& config, std::ostream* log) {
  config.validate();
  Scenario scenario = resolve_scenario(config.scenario);
  if (config.q) scenario.q = *config.q;
  if (config.folds) scenario.folds = *config.folds;
  if (config.seed) scenario.seed = *config.seed;
  if (config.replications) scenario.replications = *config.replications;
  scenario.validate();

  ScenarioReport report = run_scenario(scenario);
  if (log) {
    *log << "censoring parameter " << format_double(report.calibration.parameter) << " (calibrated rate "
         << format_double(report.calibration.achieved_rate) << ")\n";
    *log << aggregate_report({report}).text();
  }
  write_output(config.output_path, config.format == OutputFormat::Json ? scenario_report_json(report)
                                                                        : aggregate_report({report}).csv());
  return report;
}

void cmd_knockoffs(const RunConfig& config, std::ostream* log) {
  config.validate();
  const LoadedDataset loaded = load_csv(config.input_path);
  const SurvivalDataset& data = loaded.data;
  if (log) {
    *log << "loaded " << data.n() << " rows, " << data.m() << " covariates, censoring rate "
         << format_double(data.censoring_rate()) << '\n';
  }
  const AugmentedDesign aug =
      make_knockoffs(data.design(), knockoff_seed(config.seed.value_or(0)), config.debug_zero_s);

  std::vector<std::string> header = {"time", "event"};
  for (const auto& name : augmented_names(data.names())) header.push_back(name);
  std::vector<std::vector<std::string>> rows(data.n());
  for (int i = 0; i < data.n(); ++i) {
    auto& row = rows[i];
    row.reserve(header.size());
    row.push_back(loaded.time_text[i]);
    row.push_back(loaded.event_text[i]);
    for (Eigen::Index c = 0; c < aug.z.cols(); ++c) row.push_back(format_double(aug.z(i, c)));
  }
  std::ostringstream out;
  write_csv(out, header, rows);
  write_output(config.output_path, out.str());
}

}  // namespace coxko
