#ifndef LLAB_CSV_HPP
#define LLAB_CSV_HPP

// CSV writing with a fixed header row and 17-significant-digit floats, so
// that reruns of the same experiment produce byte-identical bodies.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "llab/errors.hpp"

namespace llab {

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw Error("IoError", "cannot open " + path + " for writing");
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out_ << ',';
      out_ << header[i];
    }
    out_ << '\n';
    columns_ = header.size();
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_)
      throw Error("IoError", "row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
    ++rows_;
  }

  void row_numeric(const std::vector<double>& cells) {
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double v : cells) s.push_back(format_g17(v));
    row(s);
  }

  std::size_t rows() const { return rows_; }

 private:
  std::ofstream out_;
  std::size_t columns_ = 0;
  std::size_t rows_ = 0;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  }
};

// Reads our own numeric CSV format back (header + double cells).
inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("IoError", "cannot open " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error("IoError", "empty csv " + path);
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t next = line.find(',', pos);
    table.header.push_back(line.substr(pos, next == std::string::npos
                                                ? std::string::npos
                                                : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t p = 0;
    while (p <= line.size()) {
      const std::size_t next = line.find(',', p);
      const std::string cell = line.substr(
          p, next == std::string::npos ? std::string::npos : next - p);
      row.push_back(std::stod(cell));
      if (next == std::string::npos) break;
      p = next + 1;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace llab

#endif  // LLAB_CSV_HPP
