#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace volspill {

/// Plain comma-separated table: one header row, homogeneous data rows.
/// Cells are kept as trimmed strings; empty cells are allowed and mean
/// "missing" to downstream consumers.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_cols() const { return header.size(); }
    int column_index(const std::string& name) const;  // -1 when absent
};

/// Reads a CSV file. Throws std::runtime_error on a missing file, an empty
/// file, or a row whose cell count differs from the header.
CsvTable read_csv(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

/// Shortest decimal form with the requested number of significant digits.
std::string format_number(double value, int significant_digits = 6);

/// Round-trip exact form (17 significant digits).
std::string format_number_full(double value);

}  // namespace volspill
