#include "hrlmppi/csv.hpp"

#include <cstdio>
#include <sstream>

namespace hrlmppi {

std::string fmt_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : os_(path), n_cols_(header.size()) {
  if (!os_) throw ConfigError("cannot open for writing: " + path);
  write_row(header);
}

void CsvWriter::write_row(const std::vector<std::string>& cells) {
  if (cells.size() != n_cols_) throw DimensionError("csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) os_ << ',';
    os_ << cells[i];
  }
  os_ << '\n';
  os_.flush();  // partial output survives an abort
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const {
  const int c = column(name);
  if (c < 0) throw ConfigError("missing csv column: " + name);
  std::vector<double> out;
  for (const auto& row : rows) {
    if (c >= static_cast<int>(row.size()) || row[c].empty()) continue;
    out.push_back(std::stod(row[c]));
  }
  return out;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open csv: " + path);
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else if (!cells.empty()) {
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

}  // namespace hrlmppi
