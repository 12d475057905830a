#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace swelab::csv {

/// Shortest round-trip decimal form of v (printf %.17g pruned), locale-free.
/// Used everywhere a file byte-for-byte reproducibility contract applies.
std::string format_double(double v);

/// Fixed-precision form, e.g. format_double_fixed(1.5, 3) -> "1.500".
std::string format_double_fixed(double v, int precision);

std::vector<std::string> split_line(const std::string& line, char sep = ',');

/// Parses a floating-point field; throws swelab::Error with context on failure.
double parse_double(const std::string& field, const std::string& context);

/// Reads all non-empty lines (handles trailing \r from CRLF files).
std::vector<std::string> read_lines(std::istream& in);

}  // namespace swelab::csv
