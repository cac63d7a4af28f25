#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace iht {

// Real numbers in output files: 9 significant digits, "C" locale, so that
// files are byte-identical between runs.
std::string format_real(double x);

// Values joined with ';' (one CSV cell).
std::string format_real_list(const std::vector<double>& xs);

// Strict parse of a full string as a double.
double parse_real(std::string_view text);
std::vector<double> parse_real_list(std::string_view text);

// Splits one CSV line on commas (no quoting; none of our cells contain commas).
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace iht
