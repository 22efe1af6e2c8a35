#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace thetasub::csv
{
//! Shortest representation that round-trips to the same double.
std::string format_double(double x);

//! Split on commas and trim surrounding whitespace from each field.
std::vector<std::string_view> split_fields(std::string_view line);

//! Parse a whole field as a double; false on trailing junk or empty input.
bool parse_double(std::string_view field, double& out);

std::string_view trim(std::string_view s);

}  // namespace thetasub::csv
