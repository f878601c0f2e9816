#pragma once

#include <string>
#include <vector>

namespace lpnse::io {

/// 17 significant digits, so every double survives a text round trip.
/// Non-finite values print as nan, inf and -inf.
std::string format_double(double v);

/// Strict parse of a whole field; IoError on trailing garbage.
double parse_double(const std::string& text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a named column; IoError when absent.
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
  const std::string& text(std::size_t row, const std::string& name) const;
};

std::string csv_line(const std::vector<std::string>& fields);
std::string write_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);
/// Plain comma separation without quoting; every row must match the header width.
CsvTable parse_csv(const std::string& text);

}  // namespace lpnse::io
