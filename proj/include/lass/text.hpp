#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lass {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

/// Whole-string parse; accepts "inf", "-inf", "+inf". Throws std::invalid_argument.
double parse_number(std::string_view text);

std::vector<std::string_view> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

}  // namespace lass
