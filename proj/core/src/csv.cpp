#include "epigraph/csv.hpp"
#include "epigraph/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

namespace epigraph::csv {

namespace {

std::string location(const std::filesystem::path& file, std::size_t row, std::size_t col) {
    return file.filename().string() + ":" + std::to_string(row) + ":" + std::to_string(col);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace

Table read_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open file: " + path.string());
    }
    Table table;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            table.comments.push_back(line.substr(1));
            continue;
        }
        table.rows.push_back(split_line(line));
    }
    return table;
}

double parse_double(const std::string& cell, const std::filesystem::path& file,
                    std::size_t row, std::size_t col) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = first + cell.size();
    while (first != last && *first == ' ') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ValidationError(location(file, row, col) + ": expected a number, got \"" + cell + "\"");
    }
    if (!std::isfinite(value)) {
        throw ValidationError(location(file, row, col) + ": non-finite value \"" + cell + "\"");
    }
    return value;
}

long long parse_int(const std::string& cell, const std::filesystem::path& file,
                    std::size_t row, std::size_t col) {
    long long value = 0;
    const char* first = cell.data();
    const char* last = first + cell.size();
    while (first != last && *first == ' ') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ValidationError(location(file, row, col) + ": expected an integer, got \"" + cell + "\"");
    }
    return value;
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

Eigen::MatrixXd read_matrix(const std::filesystem::path& path) {
    Table table = read_table(path);
    if (table.rows.empty()) {
        throw ValidationError(path.filename().string() + ": empty matrix file");
    }
    const std::size_t rows = table.rows.size();
    const std::size_t cols = table.rows.front().size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (table.rows[r].size() != cols) {
            throw ValidationError(path.filename().string() + ":" + std::to_string(r + 1) +
                                  ": expected " + std::to_string(cols) + " columns, got " +
                                  std::to_string(table.rows[r].size()));
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                parse_double(table.rows[r][c], path, r + 1, c + 1);
        }
    }
    return m;
}

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                  const std::vector<std::string>& comments) {
    std::ofstream out(path);
    if (!out) {
        throw ValidationError("cannot write file: " + path.string());
    }
    for (const auto& c : comments) out << '#' << c << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0) out << ',';
            out << format_double(m(r, c));
        }
        out << '\n';
    }
}

} // namespace epigraph::csv
