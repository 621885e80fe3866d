#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dcggm/matrix.hpp"

namespace dcggm::csv {

/// "%.17g": enough digits for an exact double round trip.
std::string format_double(double v);

/// Numeric table without header. Rows must be equally long.
Eigen::MatrixXd read_numeric(const std::filesystem::path& path);
void write_numeric(const std::filesystem::path& path, const Eigen::MatrixXd& m);

SymMatrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const SymMatrix& m);

/// Header-keyed text table (results, curves).
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
};

Table read_table(const std::filesystem::path& path);
void write_table(const std::filesystem::path& path, const Table& table);

std::vector<std::string> split(std::string_view line, char sep = ',');

}  // namespace dcggm::csv
