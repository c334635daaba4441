// coxko: knockoff variable selection for censored survival data.
//
//   coxko select    --input data.csv [--q 0.2] [--folds 5] [--seed 0] [--threshold both] [--format json]
//   coxko simulate  --scenario study1_case2_desk [--out report.csv]
//   coxko knockoffs --input data.csv --seed 3 --out augmented.csv

#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "coxko/commands.hpp"
#include "coxko/error.hpp"

namespace {

void add_common(CLI::App* sub, coxko::RunConfig& cfg) {
  sub->add_option("--seed", cfg.seed, "Top-level random seed");
  sub->add_option("--out", cfg.output_path, "Output file (default: standard output)");
}

}  // namespace

int main(int argc, char** argv) {
  coxko::RunConfig cfg;
  CLI::App app{"Knockoff variable selection for Cox models"};
  app.require_subcommand(1);

  const std::map<std::string, coxko::ThresholdChoice> thresholds = {
      {"knockoff", coxko::ThresholdChoice::Knockoff},
      {"plus", coxko::ThresholdChoice::Plus},
      {"both", coxko::ThresholdChoice::Both}};
  const std::map<std::string, coxko::OutputFormat> formats = {{"csv", coxko::OutputFormat::Csv},
                                                              {"json", coxko::OutputFormat::Json}};

  auto* select = app.add_subcommand("select", "Run CoxLasso and the knockoff filter on a CSV dataset");
  select->add_option("--input", cfg.input_path, "CSV with time, event and numeric covariates")->required();
  select->add_option("--q", cfg.q, "Target FDR level in (0, 1)");
  select->add_option("--folds", cfg.folds, "Cross-validation folds (5 recommended below 200 rows)");
  select->add_option("--threshold", cfg.threshold, "knockoff, plus or both")
      ->transform(CLI::CheckedTransformer(thresholds, CLI::ignore_case));
  select->add_option("--format", cfg.format, "csv or json")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  select->add_flag("--debug-zero-s", cfg.debug_zero_s, "Use s = 0 (knockoffs copy the originals)");
  add_common(select, cfg);

  auto* simulate = app.add_subcommand("simulate", "Run a simulation scenario");
  simulate->add_option("--scenario", cfg.scenario, "Scenario file or preset name")->required();
  simulate->add_option("--q", cfg.q, "Override the scenario's q");
  simulate->add_option("--folds", cfg.folds, "Override the scenario's folds");
  simulate->add_option("--replications", cfg.replications, "Override the scenario's replications");
  simulate->add_option("--format", cfg.format, "csv or json")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  add_common(simulate, cfg);

  auto* knockoffs = app.add_subcommand("knockoffs", "Write the augmented design [X, X~]");
  knockoffs->add_option("--input", cfg.input_path, "CSV with time, event and numeric covariates")->required();
  knockoffs->add_flag("--debug-zero-s", cfg.debug_zero_s, "Use s = 0 (knockoffs copy the originals)");
  add_common(knockoffs, cfg);

  app.add_subcommand("presets", "List built-in scenario presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("presets")) {
      for (const auto& name : coxko::preset_names()) std::cout << name << '\n';
      return 0;
    }
    if (select->parsed()) {
      cfg.command = coxko::Command::Select;
      coxko::cmd_select(cfg, &std::cerr);
    } else if (simulate->parsed()) {
      cfg.command = coxko::Command::Simulate;
      coxko::cmd_simulate(cfg, &std::cerr);
    } else {
      cfg.command = coxko::Command::Knockoffs;
      coxko::cmd_knockoffs(cfg, &std::cerr);
    }
  } catch (const coxko::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return coxko::exit_code_for(e.category());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
