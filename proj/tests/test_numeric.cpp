#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "salami/numeric.hpp"

using namespace salami;

TEST_CASE("rational round trips") {
  CHECK(rat_to_string(Rat(1, 3)) == "1/3");
  CHECK(rat_to_string(Rat(-4, 2)) == "-2");
  CHECK(rat_from_string("1/3") == Rat(1, 3));
  CHECK(rat_from_string("-7/21") == Rat(-1, 3));
  CHECK(rat_from_string("42") == Rat(42));
  CHECK(rat_from_string("-0.125") == Rat(-1, 8));
  CHECK(rat_from_string("2.5") == Rat(5, 2));
  CHECK_THROWS_AS(rat_from_string("1/0"), Error);
  CHECK_THROWS_AS(rat_from_string("abc"), Error);
}

TEST_CASE("exact double conversion") {
  CHECK(rat_from_double(0.5) == Rat(1, 2));
  CHECK(rat_from_double(-0.75) == Rat(-3, 4));
  CHECK(rat_from_double(3.0) == Rat(3));
  CHECK(rat_from_double(0.0) == Rat(0));
  double v = 0.1;  // not a binary rational; conversion must reproduce the double exactly
  CHECK(to_double(rat_from_double(v)) == v);
}

TEST_CASE("continued fraction snap") {
  CHECK(rat_approximate(0.5, 100) == Rat(1, 2));
  CHECK(rat_approximate(1.0 / 3.0, 1000) == Rat(1, 3));
  CHECK(rat_approximate(-2.0 / 7.0 + 1e-13, 50) == Rat(-2, 7));
  CHECK(rat_approximate(3.0, 10) == Rat(3));
  // value that is already representable under the bound passes through
  CHECK(rat_approximate(0.25, 4) == Rat(1, 4));
}
