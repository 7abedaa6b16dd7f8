#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sfb {

/// Shortest decimal form that round-trips the exact double (std::to_chars).
std::string format_double(double v);

/// Strict double parse: no locale, no thousands separators, the whole
/// field must be consumed. Throws ParseError otherwise.
double parse_double_strict(std::string_view field, std::size_t row_for_error);

/// Split one CSV line on commas. No quoting: the formats used here never
/// embed commas in fields.
std::vector<std::string_view> split_csv_line(std::string_view line);

} // namespace sfb
