#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace grn::csv {

/// One parsed line: cells plus the 1-based line number it came from.
struct Row {
  std::size_t line = 0;
  std::vector<std::string> cells;
};

/// Splits `text` into rows on LF (a trailing CR is dropped) and cells on
/// `delim`. Blank lines are skipped. No quoting.
std::vector<Row> parse(std::string_view text, char delim = ',');

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

/// Strict decimal parse of the whole cell; throws DataError naming `where`.
double parse_number(std::string_view cell, const std::string& where);

/// Shortest text that parses back to exactly `x`.
std::string format_number(double x);

/// Fixed-point text with `decimals` digits.
std::string format_fixed(double x, int decimals);

}  // namespace grn::csv
