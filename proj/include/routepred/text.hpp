#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace routepred::text {

/// `%.17g`: 17 significant digits, so parse_double gives back the
/// identical double.
std::string format_g17(double v);

/// Fixed-point form used by human-facing output (tables, SVG coordinates).
std::string format_fixed(double v, int decimals);

/// Whole-string parses. Return false on empty input, trailing characters
/// or overflow.
bool parse_double(std::string_view s, double& out);
bool parse_size(std::string_view s, std::size_t& out);

std::vector<std::string_view> split(std::string_view s, char sep);

}  // namespace routepred::text
