#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace helmspec {

// 17 significant digits, '.' decimal; round-trips binary64.
std::string format_double(double v);

// Whole-string parse; throws ConfigError on trailing garbage.
double parse_double(std::string_view text);
long parse_int(std::string_view text);
std::vector<double> parse_double_list(std::string_view text);

}  // namespace helmspec
