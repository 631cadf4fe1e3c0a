#include "rentropy/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace rentropy {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

bool parse_double(const std::string& field, double& out) {
  const char* s = field.c_str();
  char* end = nullptr;
  out = std::strtod(s, &end);
  if (end == s) return false;
  while (*end == ' ' || *end == '\t') ++end;
  return *end == '\0';
}

}  // namespace

SampleSet load_samples(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split_fields(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (!parse_double(fields[i], row[i])) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;  // header row
        continue;
      }
      throw std::runtime_error("non-numeric field in CSV data row: " + line);
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("ragged CSV: rows disagree on column count");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("CSV contains no data rows");

  SampleSet data;
  data.x.resize(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      data.x(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return data;
}

SampleSet load_samples_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CSV file: " + path);
  return load_samples(in);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix_csv(std::ostream& out, const RowMat& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

}  // namespace rentropy
