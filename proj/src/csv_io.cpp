#include "coxko/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "coxko/error.hpp"

namespace coxko {

namespace {

std::vector<std::string> split_line(const std::string& line, const std::string& where) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  if (quoted) throw Error(ErrorKind::NonNumericCell, where + ": unterminated quote");
  cells.push_back(std::move(cell));
  return cells;
}

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

bool parse_number(const std::string& text, double& out) {
  const std::string s = strip(text);
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

CsvTable parse_csv(std::istream& in, const std::string& source) {
  CsvTable table;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (strip(line).empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    auto cells = split_line(line, where);
    for (auto& c : cells) c = strip(c);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw Error(ErrorKind::DimensionMismatch, where + ": expected " + std::to_string(table.header.size()) +
                                                    " fields, found " + std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
    table.line_of_row.push_back(line_no);
  }
  if (!have_header) throw Error(ErrorKind::MissingColumn, source + ": empty file");
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return parse_csv(in, path);
}

LoadedDataset load_csv_table(const CsvTable& table, const std::string& source) {
  int time_col = -1;
  int event_col = -1;
  std::vector<int> covariates;
  std::vector<std::string> names;
  for (int c = 0; c < static_cast<int>(table.header.size()); ++c) {
    const std::string& h = table.header[c];
    if (h == "time") {
      time_col = c;
    } else if (h == "event") {
      event_col = c;
    } else {
      covariates.push_back(c);
      names.push_back(h);
    }
  }
  if (time_col < 0) throw Error(ErrorKind::MissingColumn, source + ": no 'time' column");
  if (event_col < 0) throw Error(ErrorKind::MissingColumn, source + ": no 'event' column");
  if (covariates.empty()) throw Error(ErrorKind::MissingColumn, source + ": no covariate columns");

  const int n = static_cast<int>(table.rows.size());
  if (n == 0) throw Error(ErrorKind::TooFewRows, source + ": no data rows");
  VectorXd y(n);
  VectorXi delta(n);
  MatrixXd x(n, static_cast<Eigen::Index>(covariates.size()));
  std::vector<std::string> time_text;
  std::vector<std::string> event_text;
  for (int i = 0; i < n; ++i) {
    const auto& row = table.rows[i];
    const std::string where = source + ":" + std::to_string(table.line_of_row[i]) + " (row " +
                              std::to_string(i + 1) + ")";
    double t = 0.0;
    if (!parse_number(row[time_col], t)) {
      throw Error(ErrorKind::NonNumericCell, where + ", column 'time': '" + row[time_col] + "'");
    }
    if (!(t > 0.0)) throw Error(ErrorKind::NonPositiveTime, where + ": time " + row[time_col] + " is not positive");
    double e = 0.0;
    if (!parse_number(row[event_col], e) || (e != 0.0 && e != 1.0)) {
      throw Error(ErrorKind::BadEventValue, where + ": event '" + row[event_col] + "' is not 0 or 1");
    }
    y[i] = t;
    delta[i] = e == 1.0 ? 1 : 0;
    for (std::size_t k = 0; k < covariates.size(); ++k) {
      const std::string& cell = row[covariates[k]];
      double v = 0.0;
      if (!parse_number(cell, v)) {
        throw Error(ErrorKind::NonNumericCell,
                    where + ", column '" + names[k] + "': '" + cell + "' is not numeric (encode categories first)");
      }
      x(i, static_cast<Eigen::Index>(k)) = v;
    }
    time_text.push_back(row[time_col]);
    event_text.push_back(row[event_col]);
  }
  return {SurvivalDataset::create(std::move(y), std::move(delta), std::move(x), std::move(names)),
          std::move(time_text), std::move(event_text)};
}

LoadedDataset load_csv(const std::string& path) { return load_csv_table(read_csv(path), path); }

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) out << ',';
      const std::string& cell = cells[c];
      if (cell.find_first_of(",\"\n") == std::string::npos) {
        out << cell;
      } else {
        out << '"';
        for (char ch : cell) out << (ch == '"' ? "\"\"" : std::string(1, ch));
        out << '"';
      }
    }
    out << '\n';
  };
  emit(header);
  for (const auto& r : rows) emit(r);
}

}  // namespace coxko
