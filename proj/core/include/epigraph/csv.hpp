#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <string>
#include <vector>

namespace epigraph::csv {

struct Table {
    std::vector<std::string> comments;             // leading '#' lines, stripped of '#'
    std::vector<std::vector<std::string>> rows;    // data rows, split on ','
};

/// Reads a whole CSV file. '#' lines are collected as comments, blank lines skipped.
Table read_table(const std::filesystem::path& path);

/// Parses one cell as double; error messages carry file:row:column (1-based).
double parse_double(const std::string& cell, const std::filesystem::path& file,
                    std::size_t row, std::size_t col);
long long parse_int(const std::string& cell, const std::filesystem::path& file,
                    std::size_t row, std::size_t col);

/// Shortest decimal representation that round-trips the exact double.
std::string format_double(double value);

/// Reads an n x m numeric matrix (all rows must have equal length).
Eigen::MatrixXd read_matrix(const std::filesystem::path& path);

/// Writes a matrix, one row per line; optional leading comment lines get a '#'.
void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                  const std::vector<std::string>& comments = {});

} // namespace epigraph::csv
