#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace chiral {

/// Numeric table with a header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// 17 significant digits, '.' decimal separator, locale independent.
std::string format_double(double value);

/// RFC 4180 style with '\n' line ends and a newline after the final row.
/// Header fields containing commas or quotes are quoted.
void write_csv(const CsvTable& table, const std::filesystem::path& path);

}  // namespace chiral
