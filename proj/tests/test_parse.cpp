#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"
#include "wave3/errors.hpp"
#include "wave3/parse.hpp"

using namespace wave3;

namespace {
RatExpr V(Field f, int k = 0) { return RatExpr::var(JetVar{f, static_cast<uint16_t>(k)}); }
}  // namespace

TEST_CASE("grammar basics") {
  using enum Field;
  CHECK(parse_expr("p11*m11 - (1/2)*p10'")
            .equals(V(p11) * V(m11) - RatExpr(Rational(1, 2)) * V(p10, 1)));
  CHECK(parse_expr("d(m01,4)/m11^2").equals(V(m01, 4) / V(m11).pow(2)));
  CHECK(parse_expr("p10''''") == parse_expr("d(p10,4)"));
  CHECK(parse_expr("m11^-2").equals(RatExpr(1) / V(m11).pow(2)));
  CHECK(parse_expr("3/2^2").equals(RatExpr(Rational(9, 4))));  // rational binds first
  CHECK(parse_expr("6/3/m11").equals(RatExpr(2) / V(m11)));
  CHECK(parse_expr("nu11*p11' + gamma11*p10*p01")
            .equals(RatExpr::param("nu11") * V(p11, 1) +
                    RatExpr::param("gamma11") * V(p10) * V(p01)));
  CHECK(parse_expr("2*-3").equals(RatExpr(-6)));
  CHECK(parse_expr("(p10 + m10)^2").equals((V(p10) + V(m10)) * (V(p10) + V(m10))));
}

TEST_CASE("syntax errors carry position") {
  auto expect_err = [](const char* text, Errc code) {
    try {
      parse_expr(text);
      FAIL_CHECK(text);
    } catch (const Error& e) {
      CHECK(e.code() == code);
    }
  };
  expect_err("p10 +", Errc::syntax_error);
  expect_err("p10 ** m10", Errc::syntax_error);
  expect_err("(p10", Errc::syntax_error);
  expect_err("nu'", Errc::syntax_error);
  expect_err("d(foo,2)", Errc::unknown_identifier);
  expect_err("p10 $ m10", Errc::syntax_error);
  expect_err("-p10", Errc::syntax_error);  // grammar has no unary minus on non-numbers
  expect_err("d(p10,99)", Errc::jet_order_overflow);
  try {
    parse_expr("p10 +\n  *");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("2:3") != std::string::npos);
  }
}

TEST_CASE("format emits canonical grammar-safe text") {
  using enum Field;
  CHECK(format_expr(V(p10, 1) * RatExpr(2)) == "2*p10'");
  CHECK(format_expr(-(V(m01, 1))) == "-1*m01'");
  CHECK(format_expr(V(m01, 4) / V(m11).pow(2)) == "d(m01,4)/m11^2");
  CHECK(format_expr(RatExpr(Rational(-5, 3)) * V(p10) * V(m11)) == "-5/3*p10*m11");
  CHECK(format_expr(RatExpr()) == "0");
  CHECK(format_expr(RatExpr::param("b") * V(p10) - V(m10)) == "b*p10 - m10");
}

TEST_CASE("property: parse(format(e)) == e") {
  testgen::Rng rng(314159);
  for (int round = 0; round < 200; ++round) {
    RatExpr e = testgen::random_ratexpr(rng, true);
    std::string text = format_expr(e);
    CAPTURE(text);
    RatExpr back = parse_expr(text);
    CHECK(back == e);  // canonical representation survives the round trip
  }
}
