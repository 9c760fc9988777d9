#include <catch2/catch_amalgamated.hpp>

#include <algmix/ring.hpp>

#include "generators.hpp"

using namespace algmix;

namespace {
const Domain F2 = Domain::prime_field(2);

LaurentPoly P(const char* text, std::size_t d = 2, Domain dom = F2) { return parse_laurent(text, d, dom); }
}  // namespace

TEST_CASE("add over F2", "[ring]") {
  CHECK(P("1 + u1") + P("u1 + u2") == P("1 + u2"));
  CHECK(P("1 + u1 + u2") + LaurentPoly(2, F2) == P("1 + u1 + u2"));
  CHECK((P("1 + u1 + u2") + P("1 + u1 + u2")).is_zero());
}

TEST_CASE("mul", "[ring]") {
  const Domain Q = Domain::rationals();
  CHECK(P("u1^1/2", 1, Q) * P("u1^1/2", 1, Q) == P("u1", 1, Q));
  CHECK(P("1 + u1 + u2") * P("1 + u1 + u2") == P("1 + u1^2 + u2^2"));
  auto f = P("3*u1^-2*u2 - 7 + u2^5", 2, Domain::integers());
  CHECK(f * LaurentPoly::one(2, Domain::integers()) == f);
}

TEST_CASE("mismatched operands are rejected", "[ring]") {
  CHECK_THROWS_AS(P("u1") + P("u1", 3), DomainError);
  CHECK_THROWS_AS(P("u1") * P("u1", 2, Domain::prime_field(3)), DomainError);
}

TEST_CASE("frobenius_pow", "[ring]") {
  auto f = P("1 + u1 + u2");
  CHECK(frobenius_pow(f, 1) == P("1 + u1^2 + u2^2"));
  CHECK(frobenius_pow(f, 1) == f * f);
  CHECK(frobenius_pow(f, 0) == f);
  CHECK(frobenius_pow(f, 3) == P("1 + u1^8 + u2^8"));
  CHECK_THROWS_AS(frobenius_pow(P("1 + u1", 1, Domain::integers()), 1), DomainError);
}

TEST_CASE("dilate", "[ring]") {
  const Domain Q = Domain::rationals();
  CHECK(dilate(P("1 + u1 + u2"), 4) == P("1 + u1^4 + u2^4"));
  CHECK(dilate(P("1 + u1 + u2"), 1) == P("1 + u1 + u2"));
  CHECK(dilate(P("u1", 1, Q), make_rational(1, 2)) == P("u1^1/2", 1, Q));
  CHECK_THROWS_AS(dilate(P("u1"), 0), DomainError);
}

TEST_CASE("text form", "[ring]") {
  const Domain Q = Domain::rationals();
  auto f = P("-3/4*u1^1/2*u2^-2 + 5 + u2", 2, Q);
  CHECK(to_string(f) == "5 + u2 - 3/4*u1^1/2*u2^-2");
  CHECK(parse_laurent(to_string(f), 2, Q) == f);
  CHECK(P("u1^(-1/3) * 2 * u1", 1, Q) == P("2*u1^2/3", 1, Q));
  CHECK(to_string(LaurentPoly(2, Q)) == "0");
  CHECK_THROWS_AS(P("u3", 2), ParseError);
  CHECK_THROWS_AS(P("u1^", 2), ParseError);
  CHECK_THROWS_AS(P("u1^1/0", 2), ParseError);
  CHECK_THROWS_AS(P("1 + + u1", 2), ParseError);
  CHECK_THROWS_AS(P("", 2), ParseError);
  CHECK_THROWS_AS(P("1/2*u1", 1, Domain::integers()), DomainError);
  try {
    P("1 + u1^x", 2);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 7);
  }
}

TEST_CASE("ring laws on random inputs", "[ring][property]") {
  testgen::Rng rng(0x5eed);
  for (Domain dom : {Domain::integers(), Domain::rationals(), Domain::prime_field(2), Domain::prime_field(5)}) {
    for (int trial = 0; trial < 60; ++trial) {
      std::size_t d = 1 + rng.below(3);
      auto f = testgen::random_laurent(rng, d, dom, 8, true);
      auto g = testgen::random_laurent(rng, d, dom, 8, true);
      auto h = testgen::random_laurent(rng, d, dom, 8, true);
      CHECK(f + g == g + f);
      CHECK(f * g == g * f);
      CHECK((f + g) + h == f + (g + h));
      CHECK((f * g) * h == f * (g * h));
      CHECK(f * (g + h) == f * g + f * h);
      Rational n = rng.nonzero_rational(4);
      CHECK(dilate(f * g, n) == dilate(f, n) * dilate(g, n));
      for (const auto& poly : {f + g, f * g, dilate(h, n), f - f})
        for (const auto& [e, c] : poly) CHECK(c != 0);
      CHECK(parse_laurent(to_string(f), d, dom) == f);
    }
  }
}

TEST_CASE("frobenius_pow equals iterated squaring", "[ring][property]") {
  testgen::Rng rng(77);
  for (std::uint64_t p : {2u, 3u, 5u}) {
    Domain dom = Domain::prime_field(p);
    for (int trial = 0; trial < 20; ++trial) {
      auto f = testgen::random_laurent(rng, 2, dom, 5, false);
      LaurentPoly iterated = f;
      for (unsigned k = 0; k <= 4; ++k) {
        CHECK(frobenius_pow(f, k) == iterated);
        iterated = power(iterated, p);
      }
    }
  }
}
