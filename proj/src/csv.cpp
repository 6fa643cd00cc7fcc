#include "volspill/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace volspill {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

}  // namespace

int CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());

    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            table.header = split_line(line);
            if (table.header.empty())
                throw std::runtime_error(path.string() + ": empty header row");
            continue;
        }
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (cells.size() != table.header.size())
            throw std::runtime_error(path.string() + ": row " + std::to_string(line_no) +
                                     " has " + std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(table.header.size()));
        table.rows.push_back(std::move(cells));
    }
    if (line_no == 0) throw std::runtime_error(path.string() + ": empty file");
    return table;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << contents;
}

std::string format_number(double value, int significant_digits) {
    if (value == 0.0) value = 0.0;  // never print "-0"
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, value);
    return buf;
}

std::string format_number_full(double value) { return format_number(value, 17); }

}  // namespace volspill
