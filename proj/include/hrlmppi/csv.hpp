#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "hrlmppi/common.hpp"

namespace hrlmppi {

// Floats are serialized with 9 significant digits everywhere.
std::string fmt_g9(double v);

class CsvWriter {
 public:
  CsvWriter() = default;
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void write_row(const std::vector<std::string>& cells);
  bool is_open() const { return os_.is_open(); }

 private:
  std::ofstream os_;
  std::size_t n_cols_ = 0;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 if absent
  // Numeric column values, skipping blank cells.
  std::vector<double> numeric_column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

}  // namespace hrlmppi
