#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace gsamp {

// Shortest decimal representation that round-trips to the same double.
// All file formats use this so that identical runs produce identical bytes.
std::string format_double(double x);

// Parses a double; throws invalid_parameter on trailing garbage or overflow.
double parse_double(std::string_view s);

std::string format_complex(std::complex<double> z);  // "re im" pair

// Splits on unquoted whitespace.
std::vector<std::string> split_tokens(std::string_view line);

}  // namespace gsamp
