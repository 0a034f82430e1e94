#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ifpp {

/// `%.17g` formatting, independent of the C locale.
std::string format_double(double value);

/// Fixed 6-decimal formatting for console summaries.
std::string format_fixed6(double value);

/// Parses the whole of `text` (surrounding blanks allowed) as a double.
std::optional<double> parse_double(std::string_view text);

/// Splits on `sep` without trimming.
std::vector<std::string_view> split(std::string_view text, char sep);

std::string_view trim(std::string_view text);

}  // namespace ifpp
