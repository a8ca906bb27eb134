#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace lack::csv {

// Shortest decimal form that parses back to the same double.
std::string number(double value);

std::vector<std::string> split(std::string_view line);
std::string join(const std::vector<std::string>& fields);

double to_double(std::string_view text);
unsigned long long to_uint(std::string_view text);

// Reads the next non-empty line; false at end of input.
bool next_line(std::istream& in, std::string& line);

}  // namespace lack::csv
