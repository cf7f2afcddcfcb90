#include "ddspce/sample_matrix.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ddspce/errors.hpp"

namespace ddspce {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

Eigen::Index SampleMatrix::column(const std::string& name) const {
  auto it = std::find(column_names.begin(), column_names.end(), name);
  if (it == column_names.end())
    throw DimensionMismatchError("no column named '" + name + "'");
  return static_cast<Eigen::Index>(it - column_names.begin());
}

void SampleMatrix::validate() const {
  if (values.rows() < 1 || values.cols() < 1)
    throw EmptyDataError("sample matrix must have at least one row and column");
  if (static_cast<Eigen::Index>(column_names.size()) != values.cols())
    throw DimensionMismatchError("column name count does not match matrix width");
  if (!values.allFinite())
    throw ParseError("sample matrix contains a non-finite entry", 0, 0);
}

SampleMatrix parse_samples_csv(const std::string& text) {
  std::stringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw EmptyDataError("empty file: no header row");
  std::vector<std::string> names;
  for (auto& f : split_line(line)) names.push_back(trim(f));
  if (names.empty() || (names.size() == 1 && names[0].empty()))
    throw EmptyDataError("header row names no columns");
  const size_t ncol = names.size();

  std::vector<double> body;
  int nrow = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto fields = split_line(line);
    ++nrow;
    if (fields.size() != ncol)
      throw ParseError("row has " + std::to_string(fields.size()) +
                           " fields, expected " + std::to_string(ncol),
                       nrow, static_cast<int>(fields.size()));
    for (size_t c = 0; c < ncol; ++c) {
      const std::string cell = trim(fields[c]);
      double v = 0.0;
      auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || p != cell.data() + cell.size() || !std::isfinite(v))
        throw ParseError("cannot parse cell '" + cell + "'", nrow,
                         static_cast<int>(c) + 1);
      body.push_back(v);
    }
  }
  if (nrow == 0) throw EmptyDataError("file has a header but no data rows");

  SampleMatrix s;
  s.column_names = std::move(names);
  s.values.resize(nrow, static_cast<Eigen::Index>(ncol));
  for (int r = 0; r < nrow; ++r)
    for (size_t c = 0; c < ncol; ++c)
      s.values(r, static_cast<Eigen::Index>(c)) = body[r * ncol + c];
  return s;
}

SampleMatrix load_samples(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFileError("cannot open sample file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_samples_csv(buf.str());
}

void save_samples(const SampleMatrix& samples, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingFileError("cannot write sample file: " + path);
  for (size_t c = 0; c < samples.column_names.size(); ++c) {
    if (c) out << ',';
    out << samples.column_names[c];
  }
  out << '\n';
  char buf[64];
  for (Eigen::Index r = 0; r < samples.rows(); ++r) {
    for (Eigen::Index c = 0; c < samples.cols(); ++c) {
      if (c) out << ',';
      std::snprintf(buf, sizeof buf, "%.17g", samples.values(r, c));
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace ddspce
