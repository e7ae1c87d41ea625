#pragma once

#include <span>
#include <string>
#include <vector>

namespace conex {

/// Shortest round-trippable decimal form (17 significant digits).
std::string format_g17(double x);

/// RFC-4180 CSV: comma separated, CRLF line endings, header row first,
/// numeric cells formatted with format_g17.
void write_csv(const std::string& path, std::span<const std::string> header,
               const std::vector<std::vector<double>>& rows);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace conex
