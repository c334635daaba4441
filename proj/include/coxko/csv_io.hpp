#pragma once

// Comma-separated survival tables: header row, `time` and `event` columns,
// every other column a numeric covariate.

#include <iosfwd>
#include <string>
#include <vector>

#include "coxko/survival.hpp"

namespace coxko {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_of_row;  // 1-based line in the source
};

/// Splits into cells; double-quoted cells may contain commas. Blank lines are skipped.
CsvTable parse_csv(std::istream& in, const std::string& source = "<input>");
CsvTable read_csv(const std::string& path);

struct LoadedDataset {
  SurvivalDataset data;
  // The response columns exactly as written, so they can be passed through.
  std::vector<std::string> time_text;
  std::vector<std::string> event_text;
};

LoadedDataset load_csv(const std::string& path);
LoadedDataset load_csv_table(const CsvTable& table, const std::string& source = "<input>");

std::string format_double(double v);  // %.17g

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace coxko
