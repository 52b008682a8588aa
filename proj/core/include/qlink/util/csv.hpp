#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace qlink {

/// Numeric CSV writer. Values are printed in shortest round-trip form so the
/// same numbers always give the same bytes.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  /// Row whose leading cells are text labels.
  void row(const std::vector<std::string>& labels, const std::vector<double>& values);

 private:
  std::ofstream out_;
  std::size_t ncols_;
};

std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t column(const std::string& name) const;
};

/// Reads a numeric CSV with one header line; '#' lines are skipped.
CsvTable read_csv(const std::string& path);

}  // namespace qlink
