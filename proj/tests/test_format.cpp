#include <doctest.h>

#include <cmath>
#include <limits>

#include "selfsim/errors.hpp"
#include "selfsim/format.hpp"
#include "support.hpp"

using namespace selfsim;

TEST_SUITE("format") {
  TEST_CASE("shortest round-trips random doubles bit-exactly") {
    for (int i = 0; i < 2000; ++i) {
      const double x = testing::uniform(-1.0, 1.0) * std::pow(10.0, testing::uniform(-300.0, 300.0));
      CHECK(parse_double(shortest(x)) == x);
    }
  }

  TEST_CASE("shortest uses the shortest spelling") {
    CHECK(shortest(0.1) == "0.1");
    CHECK(shortest(7.0) == "7");
    CHECK(shortest(-2.5e-12) == "-2.5e-12");
  }

  TEST_CASE("non-finite tokens") {
    CHECK(shortest(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(shortest(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(shortest(std::nan("")) == "nan");
    CHECK(std::isinf(parse_double("inf")));
    CHECK(std::isnan(parse_double("nan")));
  }

  TEST_CASE("parse_double rejects garbage") {
    CHECK_THROWS_AS(parse_double(""), InvalidArgument);
    CHECK_THROWS_AS(parse_double("1.5x"), InvalidArgument);
    CHECK_THROWS_AS(parse_double("abc"), InvalidArgument);
    CHECK(parse_double("  2.5 ") == 2.5);
  }
}
