#include "gsamp/text_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <system_error>

#include "gsamp/errors.hpp"

namespace gsamp {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double out = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    // from_chars rejects "inf"/"nan" spellings only in some modes; we do not
    // accept them anywhere in our formats anyway.
    throw invalid_parameter("not a finite decimal number: '" + std::string(s) + "'");
  }
  if (!std::isfinite(out)) {
    throw invalid_parameter("non-finite value: '" + std::string(s) + "'");
  }
  return out;
}

std::string format_complex(std::complex<double> z) {
  return format_double(z.real()) + " " + format_double(z.imag());
}

std::vector<std::string> split_tokens(std::string_view line) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace gsamp
