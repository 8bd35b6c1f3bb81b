#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace circseq::csv {

/// Round-trippable text form of a double (17 significant digits).
std::string format(double value);

std::vector<std::string> split(std::string_view line, char sep = ',');

/// Parses a full-string double; throws ArgumentError with context otherwise.
double parse_double(std::string_view text, std::string_view context);

std::string join(const std::vector<double>& values, char sep);

}  // namespace circseq::csv
