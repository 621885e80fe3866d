#include "dcggm/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dcggm::csv {

std::string format_double(double v) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view field, const std::filesystem::path& path, std::size_t line_no) {
  field = trim(field);
  // strtod accepts everything to_chars/printf emit, including "inf"/"nan".
  std::string tmp(field);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) {
    throw Error(ErrorKind::Schema, path.string() + ":" + std::to_string(line_no) + ": bad number '" + tmp + "'");
  }
  return v;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  return out;
}

}  // namespace

Eigen::MatrixXd read_numeric(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    for (const auto& f : split(line)) row.push_back(parse_double(f, path, line_no));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::Schema, path.string() + ":" + std::to_string(line_no) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Index>(rows.size());
  const Index m = rows.empty() ? 0 : static_cast<Index>(rows.front().size());
  Eigen::MatrixXd out(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) out(i, j) = rows[i][j];
  return out;
}

void write_numeric(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  auto out = open_out(path);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

SymMatrix read_matrix(const std::filesystem::path& path) {
  const Eigen::MatrixXd m = read_numeric(path);
  if (m.rows() == 0) throw Error(ErrorKind::Schema, path.string() + ": empty matrix");
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::Schema, path.string() + ": matrix is not square");
  }
  for (Index j = 0; j < m.rows(); ++j)
    for (Index k = 0; k < j; ++k)
      if (std::abs(m(j, k) - m(k, j)) > 1e-12 * (1.0 + std::abs(m(j, k)))) {
        throw Error(ErrorKind::Schema, path.string() + ": matrix is not symmetric");
      }
  return SymMatrix(m);
}

void write_matrix(const std::filesystem::path& path, const SymMatrix& m) { write_numeric(path, m.dense()); }

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw Error(ErrorKind::Schema, "missing column '" + std::string(name) + "'");
}

Table read_table(const std::filesystem::path& path) {
  auto in = open_in(path);
  Table t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split(trim(line));
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw Error(ErrorKind::Schema, path.string() + ":" + std::to_string(line_no) + ": field count");
    }
    t.rows.push_back(std::move(fields));
  }
  return t;
}

void write_table(const std::filesystem::path& path, const Table& table) {
  auto out = open_out(path);
  auto emit = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << fields[i];
    }
    out << '\n';
  };
  emit(table.header);
  for (const auto& r : table.rows) emit(r);
}

}  // namespace dcggm::csv
