#include "qlink/util/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "qlink/error.hpp"

namespace qlink {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), ncols_(header.size()) {
  if (!out_) throw Error("cannot open " + path + " for writing");
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) { row({}, values); }

void CsvWriter::row(const std::vector<std::string>& labels, const std::vector<double>& values) {
  if (labels.size() + values.size() != ncols_) throw DimensionMismatch("csv: row width does not match header");
  bool first = true;
  for (const auto& l : labels) {
    out_ << (first ? "" : ",") << l;
    first = false;
  }
  for (double v : values) {
    out_ << (first ? "" : ",") << format_double(v);
    first = false;
  }
  out_ << '\n';
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ConfigError("csv: missing column '" + name + "'");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  CsvTable t;
  std::string line;
  int lineno = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t\r");
      const auto e = cell.find_last_not_of(" \t\r");
      out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    return out;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto cells = split(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(t.header.size()) + " columns");
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      double v = 0.0;
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (res.ec != std::errc() || res.ptr != c.data() + c.size()) {
        throw ConfigError(path + ":" + std::to_string(lineno) + ": not a number: '" + c + "'");
      }
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw ConfigError(path + ": empty csv");
  return t;
}

}  // namespace qlink
