#pragma once

#include <string>
#include <vector>

#include "equifair/errors.hpp"

namespace equifair {

// RFC-4180 table: header row required, quoted fields with doubled quotes,
// LF or CRLF line endings.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column_index(const std::string& name) const;
    std::vector<std::string> column(const std::string& name) const;
    std::vector<double> numeric_column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv_file(const std::string& path);

std::string format_csv_field(const std::string& field);
std::string format_double(double v);  // round-trip precision, deterministic

void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace equifair
