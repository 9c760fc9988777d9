#include <catch2/catch_amalgamated.hpp>

#include <algmix/numfield.hpp>

#include "generators.hpp"

using namespace algmix;

namespace {
std::vector<Rational> Q(std::initializer_list<long> v) {
  std::vector<Rational> out;
  for (long x : v) out.emplace_back(x);
  return out;
}
FieldElement E(std::initializer_list<Rational> v) { return {std::vector<Rational>(v)}; }
}  // namespace

TEST_CASE("field_mul", "[numfield]") {
  NumberField sqrt2(Q({-2, 0, 1}));
  auto x = sqrt2.generator();
  CHECK(field_mul(sqrt2, x, x) == sqrt2.from_rational(2));
  auto a = E({make_rational(3, 7), Rational(-5)});
  CHECK(field_mul(sqrt2, a, sqrt2.one()) == a);

  NumberField cbrt2(Q({-2, 0, 0, 1}));
  auto y = cbrt2.generator();
  CHECK(field_mul(cbrt2, y, field_mul(cbrt2, y, y)) == cbrt2.from_rational(2));
  CHECK_THROWS_AS(field_mul(sqrt2, sqrt2.one(), cbrt2.one()), DomainError);
}

TEST_CASE("field_inv", "[numfield]") {
  NumberField sqrt2(Q({-2, 0, 1}));
  auto x = sqrt2.generator();
  CHECK(field_inv(sqrt2, x) == E({Rational(0), make_rational(1, 2)}));
  CHECK(field_inv(sqrt2, sqrt2.one()) == sqrt2.one());
  auto one_plus_x = E({Rational(1), Rational(1)});
  CHECK(field_inv(sqrt2, one_plus_x) == E({Rational(-1), Rational(1)}));
  CHECK(field_mul(sqrt2, one_plus_x, field_inv(sqrt2, one_plus_x)) == sqrt2.one());
  CHECK_THROWS_AS(field_inv(sqrt2, sqrt2.zero()), DomainError);
}

TEST_CASE("presentation checks", "[numfield]") {
  CHECK_THROWS_AS(NumberField(Q({-2, 0, 2})), DomainError);   // not monic
  CHECK_THROWS_AS(NumberField(Q({-4, 0, 1})), DomainError);   // x^2-4 has root 2
  CHECK_THROWS_AS(NumberField(Q({0, 0, 1})), DomainError);    // root 0
  CHECK_THROWS_AS(NumberField(Q({5})), DomainError);          // degree 0
  CHECK_NOTHROW(NumberField(Q({-2, 1})));
  // (x^2+1)(x^2+2) has no rational root but is reducible: detected on inversion.
  NumberField reducible(Q({2, 0, 3, 0, 1}));
  CHECK_THROWS_AS(field_inv(reducible, E({Rational(1), Rational(0), Rational(1), Rational(0)})), DomainError);
}

TEST_CASE("evaluate", "[numfield]") {
  const Domain Z = Domain::integers();
  NumberField two(Q({-2, 1}));
  CHECK(evaluate(two, {two.generator()}, parse_laurent("u1 - 2", 1, Z)).is_zero());
  NumberField sqrt2(Q({-2, 0, 1}));
  CHECK(evaluate(sqrt2, {sqrt2.generator()}, parse_laurent("u1^2 - 2", 1, Z)).is_zero());
  auto rat = NumberField::rationals();
  CHECK(evaluate(rat, {rat.from_rational(2), rat.from_rational(3)}, parse_laurent("u1*u2 - 6", 2, Z)).is_zero());
  CHECK(evaluate(rat, {rat.from_rational(2)}, parse_laurent("u1^-3", 1, Z)) == rat.from_rational(make_rational(1, 8)));
  CHECK_THROWS_AS(evaluate(rat, {rat.zero()}, parse_laurent("u1", 1, Z)), DomainError);
  CHECK_THROWS_AS(evaluate(rat, {rat.one()}, parse_laurent("u1^1/2", 1, Domain::rationals())), DomainError);
}

namespace {
FieldElement random_element(testgen::Rng& rng, const NumberField& K) {
  FieldElement a = K.zero();
  for (auto& c : a.coeffs)
    if (rng.coin()) c = rng.nonzero_rational(7);
  return a;
}
}  // namespace

TEST_CASE("inverse and homomorphism properties", "[numfield][property]") {
  testgen::Rng rng(2024);
  std::vector<NumberField> fields{NumberField(Q({-2, 0, 1})), NumberField(Q({-2, 0, 0, 1})),
                                  NumberField(Q({1, 1, 1})), NumberField(Q({-2, 0, 0, 0, 0, 0, 1}))};
  for (const auto& K : fields) {
    int tested = 0;
    while (tested < 100) {
      auto a = random_element(rng, K);
      if (a.is_zero()) continue;
      CHECK(field_mul(K, a, field_inv(K, a)) == K.one());
      ++tested;
    }
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<FieldElement> assignment;
      for (int i = 0; i < 2; ++i) {
        FieldElement a = K.zero();
        while (a.is_zero()) a = random_element(rng, K);
        assignment.push_back(a);
      }
      auto f = testgen::random_laurent(rng, 2, Domain::rationals(), 4, false, -2, 2);
      auto g = testgen::random_laurent(rng, 2, Domain::rationals(), 4, false, -2, 2);
      CHECK(evaluate(K, assignment, f * g) == field_mul(K, evaluate(K, assignment, f), evaluate(K, assignment, g)));
      long n = rng.range(-3, 3);
      if (n == 0) n = 2;
      std::vector<FieldElement> powered;
      for (const auto& a : assignment) powered.push_back(field_pow(K, a, n));
      CHECK(evaluate(K, assignment, dilate(f, n)) == evaluate(K, powered, f));
    }
  }
}
