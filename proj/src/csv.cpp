#include "chiral/csv.hpp"

#include "chiral/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace chiral {

namespace {

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
  return std::string(buffer, result.ptr);
}

void write_csv(const CsvTable& table, const std::filesystem::path& path) {
  if (table.header.empty() || table.rows.empty()) {
    throw Error(ErrorCode::InvalidArgument, "refusing to write empty table " + path.string());
  }
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) {
      throw Error(ErrorCode::DimensionMismatch, "row width differs from header in " + path.string());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");

  std::string line;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) line += ',';
    line += quote(table.header[i]);
  }
  out << line << '\n';
  for (const auto& row : table.rows) {
    line.clear();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += ',';
      line += format_double(row[i]);
    }
    out << line << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

}  // namespace chiral
