#include <catch2/catch_amalgamated.hpp>

#include <algmix/systems.hpp>

#include "generators.hpp"

using namespace algmix;

namespace {
const Domain F2 = Domain::prime_field(2);
LaurentPoly P(const char* text, std::size_t d = 2, Domain dom = F2) { return parse_laurent(text, d, dom); }

AlgebraicSystem ledrappier() {
  return AlgebraicSystem(GroupDescriptor::free_abelian(2), CharPModule{IdealPresentation(2, 2, {P("1 + u1 + u2")})});
}

AlgebraicSystem times_two() {
  auto K = NumberField::rationals();
  return AlgebraicSystem(GroupDescriptor::free_abelian(1), EvaluationModule{K, {K.from_rational(2)}, 1});
}

AlgebraicSystem rational_dual(std::size_t nprimes = 168) {
  return AlgebraicSystem(GroupDescriptor::positive_rationals(first_primes(nprimes)), RationalDualModule{});
}

CharacterTuple ones(const AlgebraicSystem& S, std::vector<GroupElement> shape) {
  CharacterTuple T;
  for (auto& g : shape) T.pairs.push_back({std::move(g), S.one()});
  return T;
}
}  // namespace

TEST_CASE("group descriptors", "[systems]") {
  auto Q = GroupDescriptor::positive_rationals({2, 3, 5});
  CHECK(Q.from_rational(make_rational(12, 5)) == GroupElement{2, 1, -1});
  CHECK(Q.to_rational(GroupElement{2, 1, -1}) == make_rational(12, 5));
  CHECK(Q.norm(GroupElement{2, 1, -1}) == 12);
  CHECK_THROWS_AS(Q.from_rational(7), DomainError);
  CHECK_THROWS_AS(GroupDescriptor::positive_rationals({2, 4}), DomainError);
  CHECK_THROWS_AS(GroupDescriptor::free_abelian(2).validate(GroupElement(std::vector<Rational>{make_rational(1, 2), 0})),
                  DomainError);
  CHECK_NOTHROW(GroupDescriptor::rational_vector(2).validate(GroupElement(std::vector<Rational>{make_rational(1, 2), 0})));
  CHECK(GroupDescriptor::free_abelian(2).norm(GroupElement{3, -5}) == 5);
}

TEST_CASE("system invariants", "[systems]") {
  auto K = NumberField::rationals();
  CHECK_THROWS_AS(AlgebraicSystem(GroupDescriptor::free_abelian(1), EvaluationModule{K, {K.zero()}, 1}), DomainError);
  CHECK_THROWS_AS(AlgebraicSystem(GroupDescriptor::free_abelian(2), RationalDualModule{}), DomainError);
  CHECK_THROWS_AS(AlgebraicSystem(GroupDescriptor::free_abelian(3), CharPModule{IdealPresentation(2, 2, {P("1 + u1 + u2")})}),
                  DomainError);
}

TEST_CASE("character_correlation examples", "[systems]") {
  auto L = ledrappier();
  CHECK(character_correlation(L, ones(L, {{0, 0}, {4, 0}, {0, 4}})));
  CHECK(character_correlation(L, ones(L, {{0, 0}, {1, 0}, {0, 1}})));
  CHECK_FALSE(character_correlation(L, ones(L, {{0, 0}, {3, 0}, {0, 3}})));
  CHECK_FALSE(character_correlation(L, ones(L, {{0, 0}, {1, 0}})));

  auto R = rational_dual();
  for (long n = 2; n <= 50; ++n) {
    CharacterTuple T;
    T.pairs.push_back({R.group().from_rational(1), Rational(1)});
    T.pairs.push_back({R.group().from_rational(n), Rational(-1)});
    T.pairs.push_back({R.group().from_rational(n - 1), Rational(1)});
    CHECK(character_correlation(R, T));
    CHECK(shifts_distinct(T) == (n >= 3));
  }

  auto X = times_two();
  auto one = X.one();
  CHECK_FALSE(character_correlation(X, CharacterTuple{{{GroupElement{0}, one}, {GroupElement{1}, one}}}));
  auto minus_two = ModuleElement(X.evaluation().field.from_rational(-2));
  CHECK(character_correlation(X, CharacterTuple{{{GroupElement{0}, minus_two}, {GroupElement{1}, one}}}));
}

TEST_CASE("zero coefficients are rejected", "[systems]") {
  auto L = ledrappier();
  CHECK_THROWS_AS(character_correlation(L, CharacterTuple{{{GroupElement{0, 0}, P("1 + u1 + u2")}, {GroupElement{1, 0}, P("1")}}}),
                  InvalidTuple);
  auto R = rational_dual(3);
  CHECK_THROWS_AS(character_correlation(R, CharacterTuple{{{GroupElement{0, 0, 0}, Rational(0)}}}), InvalidTuple);
}

TEST_CASE("rational exponents go through the level", "[systems]") {
  AlgebraicSystem S(GroupDescriptor::rational_vector(2), CharPModule{IdealPresentation(2, 2, {P("1 + u1 + u2")})});
  GroupElement half_x(std::vector<Rational>{make_rational(1, 2), 0});
  GroupElement half_y(std::vector<Rational>{0, make_rational(1, 2)});
  // 1 + u1^{1/2} + u2^{1/2} squares to the generator but is not in I R_{Q^2}
  CHECK_FALSE(character_correlation(S, ones(S, {GroupElement{0, 0}, half_x, half_y})));
  CHECK(character_correlation(S, ones(S, {GroupElement{0, 0}, GroupElement{2, 0}, GroupElement{0, 2}})));
  CHECK(S.is_zero(P("u1^1/3 + u1^4/3 + u1^1/3*u2", 2, F2)));

  auto K = NumberField(std::vector<Rational>{-2, 0, 1});
  AlgebraicSystem E(GroupDescriptor::rational_vector(1), EvaluationModule{K, {K.generator()}, 2});
  // sqrt(2)^2 = 2: u^{1} - 2 u^{0} = 0
  CHECK(E.sum_vanishes({{GroupElement{1}, E.one()}, {GroupElement{0}, ModuleElement(K.from_rational(-2))}}));
  CHECK_THROWS_AS(E.unit_power(GroupElement(std::vector<Rational>{make_rational(1, 4)})), DomainError);
}

TEST_CASE("find_nonmixing_element", "[systems]") {
  AlgebraicSystem cyc(GroupDescriptor::free_abelian(1), CharPModule{IdealPresentation(1, 2, {P("u1^3 - 1", 1, Domain::integers())})});
  CHECK(find_nonmixing_element(cyc, SearchBox::cube(1, 0, 8)) == GroupElement{3});
  CHECK_FALSE(find_nonmixing_element(times_two(), SearchBox::cube(1, -10, 10)).has_value());
  CHECK_FALSE(find_nonmixing_element(rational_dual(3), SearchBox::cube(3, -2, 2)).has_value());
  CHECK_FALSE(find_nonmixing_element(ledrappier(), SearchBox::cube(2, -3, 3)).has_value());
  // u1^5 = 1 on the whole quotient; gamma = 1 would need the residue 1+u1+...+u1^4
  AlgebraicSystem split(GroupDescriptor::free_abelian(1), CharPModule{IdealPresentation(1, 2, {P("1 + u1^5", 1)})});
  CHECK(find_nonmixing_element(split, SearchBox::cube(1, 1, 6)) == GroupElement{5});
  auto K = NumberField(std::vector<Rational>{1, 1, 1});  // primitive cube root of unity
  AlgebraicSystem root(GroupDescriptor::free_abelian(1), EvaluationModule{K, {K.generator()}, 1});
  CHECK(find_nonmixing_element(root, SearchBox::cube(1, 1, 6)) == GroupElement{3});
}

TEST_CASE("level_embed", "[systems]") {
  auto r = level_embed({GroupElement(std::vector<Rational>{make_rational(1, 2), 0}),
                        GroupElement(std::vector<Rational>{0, make_rational(1, 3)})});
  CHECK(r.level == 6);
  CHECK(r.shape == std::vector<GroupElement>{{3, 0}, {0, 2}});
  auto same = level_embed({{1, 2}, {-3, 0}});
  CHECK(same.level == 1);
  CHECK(same.shape == std::vector<GroupElement>{{1, 2}, {-3, 0}});
  auto one_d = level_embed({GroupElement(std::vector<Rational>{make_rational(1, 4)}),
                            GroupElement(std::vector<Rational>{make_rational(1, 6)})});
  CHECK(one_d.level == 12);
  CHECK(one_d.shape == std::vector<GroupElement>{{3}, {2}});
  CHECK_THROWS_AS(level_embed({}), DomainError);
}

TEST_CASE("level_embed round trip", "[systems][property]") {
  testgen::Rng rng(4711);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t d = 1 + rng.below(3), r = 1 + rng.below(4);
    std::vector<GroupElement> shape;
    for (std::size_t s = 0; s < r; ++s) {
      GroupElement g(d);
      for (std::size_t i = 0; i < d; ++i) g[i] = rng.coin() ? Rational(rng.range(-5, 5)) : rng.nonzero_rational(9);
      shape.push_back(g);
    }
    auto emb = level_embed(shape);
    Integer expect = 1;
    for (const auto& g : shape)
      for (const auto& c : g) expect = lcm(expect, Integer(c.get_den()));
    CHECK(emb.level == expect);
    for (std::size_t s = 0; s < r; ++s) {
      CHECK(emb.shape[s].is_integral());
      CHECK(emb.shape[s].scaled(Rational(1, 1) / Rational(emb.level)) == shape[s]);
    }
  }
}

TEST_CASE("translation invariance and frobenius", "[systems][property]") {
  testgen::Rng rng(8080);
  auto L = ledrappier();
  const auto& I = L.ideal();
  int positives = 0;
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t r = 2 + rng.below(3);
    CharacterTuple T;
    std::set<GroupElement> used;
    // bias towards vanishing sums: start from a multiple of the generator
    bool planted = rng.coin();
    if (planted) {
      auto f = testgen::random_laurent(rng, 2, F2, 2, false, -1, 1) * P("1 + u1 + u2");
      for (const auto& [e, c] : f)
        if (used.insert(e).second) T.pairs.push_back({e, L.one()});
    }
    while (T.pairs.size() < r) {
      GroupElement g{rng.range(-3, 3), rng.range(-3, 3)};
      LaurentPoly a = testgen::random_laurent(rng, 2, F2, 3, false, 0, 1);
      if (I.contains(a) || !used.insert(g).second) continue;
      T.pairs.push_back({g, a});
    }
    bool bit = character_correlation(L, T);
    positives += bit;
    GroupElement delta{rng.range(-20, 20), rng.range(-20, 20)};
    CharacterTuple shifted = T;
    for (auto& c : shifted.pairs) c.shift = c.shift + delta;
    CHECK(character_correlation(L, shifted) == bit);

    // sum u^{2 gamma_s} a_s^2 is the square of sum u^{gamma_s} a_s
    CharacterTuple frob = T;
    for (auto& c : frob.pairs) {
      c.shift = c.shift.scaled(2);
      c.coefficient = frobenius_pow(std::get<LaurentPoly>(c.coefficient), 1);
    }
    CHECK(character_correlation(L, frob) == bit);
  }
  CHECK(positives > 0);
}

TEST_CASE("split_action", "[systems]") {
  auto primes = first_primes(6);  // 2,3,5,7,11,13
  AlgebraicSystem S(GroupDescriptor::positive_rationals(primes),
                    CharPModule{IdealPresentation(6, 2, {P("1 + u2 + u3", 6)})});
  auto split = split_action(S);
  CHECK(split.inner_vars() == std::vector<std::size_t>{1, 2});
  CHECK(split.shift_primes() == std::vector<std::uint64_t>{2, 7, 11, 13});
  CHECK(split.inner().group().kind() == GroupKind::FreeAbelian);
  CHECK(split.inner().ideal().generators() == std::vector{P("1 + u1 + u2")});

  AlgebraicSystem one_var(GroupDescriptor::positive_rationals({2, 3, 5}),
                          CharPModule{IdealPresentation(3, 2, {P("1 + u1 + u1^2", 3)})});
  CHECK(split_action(one_var).inner().group().rank() == 1);
  CHECK_THROWS_AS(split_action(S, std::vector<std::size_t>{1}), DomainError);
  CHECK_THROWS_AS(split_action(ledrappier()), DomainError);

  // shifts 1, 3, 5 with unit coefficients: inner correlation 1
  auto g = [&](long q) { return S.group().from_rational(q); };
  CharacterTuple T{{{g(1), S.one()}, {g(3), S.one()}, {g(5), S.one()}}};
  CHECK(character_correlation(S, T));
  CHECK(split.factored_correlation(T));
  // moving one entry to another Gamma'' fiber breaks it
  CharacterTuple U{{{g(1), S.one()}, {g(3), S.one()}, {g(10), S.one()}}};
  CHECK_FALSE(character_correlation(S, U));
  CHECK_FALSE(split.factored_correlation(U));
  // coefficient u1 (the prime 2) puts an entry back in the shared fiber
  CharacterTuple V{{{g(1), S.one()}, {g(3), S.one()}, {S.group().from_rational(make_rational(5, 2)), P("u1", 6)}}};
  CHECK(character_correlation(S, V));
  CHECK(split.factored_correlation(V));
}

TEST_CASE("split_action agrees with direct correlation", "[systems][property]") {
  AlgebraicSystem S(GroupDescriptor::positive_rationals({2, 3, 5}),
                    CharPModule{IdealPresentation(3, 2, {P("1 + u2 + u3", 3)})});
  auto split = split_action(S);
  SearchBox box = SearchBox::cube(3, -1, 1);
  auto pts = box.points();
  std::vector<LaurentPoly> coeffs{P("1", 3), P("u1", 3), P("1 + u1", 3), P("u2 + u1*u3", 3), P("u1^-1 + u2", 3)};
  std::size_t checked = 0, ones_seen = 0;
  testgen::Rng rng(12);
  for (int trial = 0; trial < 1500; ++trial) {
    std::size_t r = 2 + rng.below(3);
    CharacterTuple T;
    std::set<GroupElement> used;
    while (T.pairs.size() < r) {
      const auto& q = pts[rng.below(pts.size())];
      if (!used.insert(q).second) continue;
      T.pairs.push_back({q, coeffs[rng.below(coeffs.size())]});
    }
    bool direct = character_correlation(S, T);
    ones_seen += direct;
    CHECK(split.factored_correlation(T) == direct);
    ++checked;
  }
  CHECK(checked == 1500);
  CHECK(ones_seen > 0);
}
