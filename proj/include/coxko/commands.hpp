#pragma once

// The three command-line actions, independent of argument parsing.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "coxko/simbench.hpp"

namespace coxko {

enum class Command { Select, Simulate, Knockoffs };
enum class ThresholdChoice { Knockoff, Plus, Both };
enum class OutputFormat { Csv, Json };

struct RunConfig {
  Command command = Command::Select;
  std::string input_path;
  std::string scenario;  // file path or preset name
  // Unset values fall back to 0.2 / 10 / 0 for `select`, and to the scenario's own values for `simulate`.
  std::optional<double> q;
  std::optional<int> folds;
  std::optional<std::uint64_t> seed;
  std::optional<int> replications;  // simulate only
  ThresholdChoice threshold = ThresholdChoice::Both;
  std::string output_path;          // empty: standard output
  OutputFormat format = OutputFormat::Csv;
  bool debug_zero_s = false;

  void validate() const;
};

struct MethodSelection {
  std::string method;
  std::vector<std::string> selected;
  double lambda = 0.0;
  double threshold = 0.0;  // knockoff methods only; +inf when nothing qualifies
};

struct SelectionReport {
  std::string input;
  int n = 0;
  int p = 0;
  double censoring_rate = 0.0;
  double q = 0.2;
  int folds = 10;
  std::uint64_t seed = 0;
  double shrinkage = 0.0;
  double s_value = 0.0;
  std::vector<MethodSelection> methods;
  std::vector<std::string> warnings;

  std::string csv() const;
  std::string json() const;
};

inline constexpr int kSchemaVersion = 1;

/// Diagnostics (row counts, warnings) go to `log` when given.
SelectionReport cmd_select(const RunConfig& config, std::ostream* log = nullptr);

/// Returns the scenario report and writes it in the configured format.
ScenarioReport cmd_simulate(const RunConfig& config, std::ostream* log = nullptr);

/// Writes time, event, the standardized covariates and their `__ko` copies.
void cmd_knockoffs(const RunConfig& config, std::ostream* log = nullptr);

/// Resolves `--scenario` as a preset name first, then as a file.
Scenario resolve_scenario(const std::string& name_or_path);

std::string scenario_report_json(const ScenarioReport& report);

}  // namespace coxko
