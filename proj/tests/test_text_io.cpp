#include <doctest.h>

#include <cmath>
#include <random>

#include "gsamp/errors.hpp"
#include "gsamp/text_io.hpp"

using namespace gsamp;

TEST_SUITE("text_io") {

TEST_CASE("format/parse round-trips exactly") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::ldexp(mant(rng), expo(rng));
    CHECK(parse_double(format_double(x)) == x);
  }
  CHECK(parse_double(format_double(0.0)) == 0.0);
  CHECK(parse_double("1e-320") == 1e-320);  // subnormal
}

TEST_CASE("parse rejects junk and non-finite spellings") {
  CHECK_THROWS_AS(parse_double("1.2.3"), invalid_parameter);
  CHECK_THROWS_AS(parse_double(""), invalid_parameter);
  CHECK_THROWS_AS(parse_double("12x"), invalid_parameter);
  CHECK_THROWS_AS(parse_double("1e999"), invalid_parameter);
}

TEST_CASE("split_tokens") {
  const auto t = split_tokens("  a \t bb  1.5\n");
  REQUIRE(t.size() == 3);
  CHECK(t[0] == "a");
  CHECK(t[1] == "bb");
  CHECK(t[2] == "1.5");
  CHECK(split_tokens("   ").empty());
}

}  // TEST_SUITE
