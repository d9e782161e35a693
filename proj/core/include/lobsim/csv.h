#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lobsim {

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

double parse_double(std::string_view text);
long long parse_int(std::string_view text);

std::vector<std::string_view> split_csv(std::string_view line, char sep = ',');

}  // namespace lobsim
