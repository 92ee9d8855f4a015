#pragma once
// Small text-format helpers shared by the file writers.

#include <string>
#include <string_view>
#include <vector>

namespace trajtopo {

/// Shortest-round-trip style decimal (17 significant digits), always with a
/// decimal point or exponent; infinities print as `inf` / `-inf`.
std::string format_real(double value);

/// Parses a real, accepting `inf`, `+inf`, `-inf`. Throws Error on garbage.
double parse_real(std::string_view token);

/// Splits on runs of whitespace.
std::vector<std::string> split_ws(std::string_view line);

/// Splits on a single delimiter, keeping empty fields.
std::vector<std::string> split(std::string_view line, char delim);

}  // namespace trajtopo
