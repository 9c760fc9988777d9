#include <catch2/catch_amalgamated.hpp>

#include <algmix/mixing.hpp>

#include "generators.hpp"

using namespace algmix;

namespace {
const Domain F2 = Domain::prime_field(2);
LaurentPoly P(const char* text, std::size_t d = 2, Domain dom = F2) { return parse_laurent(text, d, dom); }

AlgebraicSystem charp(std::size_t d, std::uint64_t p, std::vector<const char*> gens) {
  std::vector<LaurentPoly> g;
  for (auto t : gens) g.push_back(parse_laurent(t, d, Domain::prime_field(p)));
  return AlgebraicSystem(GroupDescriptor::free_abelian(d), CharPModule{IdealPresentation(d, p, g)});
}

AlgebraicSystem ledrappier() { return charp(2, 2, {"1 + u1 + u2"}); }

AlgebraicSystem x2x3() {
  auto K = NumberField::rationals();
  return AlgebraicSystem(GroupDescriptor::free_abelian(2), EvaluationModule{K, {K.from_rational(2), K.from_rational(3)}, 1});
}

AlgebraicSystem rational_dual(std::size_t n = 168) {
  return AlgebraicSystem(GroupDescriptor::positive_rationals(first_primes(n)), RationalDualModule{});
}

ShapeSearchOptions search(SearchBox box, SearchBox window, std::vector<long> D) {
  ShapeSearchOptions o;
  o.box = std::move(box);
  o.window = std::move(window);
  o.dilations = std::move(D);
  return o;
}
}  // namespace

TEST_CASE("frobenius_certificate", "[mixing]") {
  auto L = ledrappier();
  auto C = frobenius_certificate(L, P("1 + u1 + u2"), 6);
  CHECK(C.order == 3);
  CHECK(C.shape == std::vector<GroupElement>{{0, 0}, {0, 1}, {1, 0}});
  CHECK(C.proof_grade());
  REQUIRE(C.transcript.size() == 7);
  for (unsigned k = 0; k <= 6; ++k) {
    CHECK(C.transcript[k].bit);
    CHECK(C.transcript[k].parameter == Rational(1L << k));
  }
  for (const auto& a : C.coefficients) CHECK(std::get<LaurentPoly>(a) == P("1"));
  auto rep = verify_certificate(L, C);
  CHECK(rep.pass);
  CHECK(rep.moves_apart);

  auto line = charp(1, 2, {"1 + u1"});
  auto C2 = frobenius_certificate(line, P("1 + u1", 1), 4);
  CHECK(C2.order == 2);
  CHECK(verify_certificate(line, C2).pass);

  CHECK_THROWS_AS(frobenius_certificate(L, P("1 + u1"), 3), DomainError);
  CHECK_THROWS_AS(frobenius_certificate(L, P("0"), 3), DomainError);
}

TEST_CASE("verify detects tampering", "[mixing]") {
  auto L = ledrappier();
  auto C = frobenius_certificate(L, P("1 + u1 + u2"), 6);
  auto bad = C;
  bad.coefficients[1] = P("u1");
  auto rep = verify_certificate(L, bad);
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.first_bad.has_value());
  CHECK(*rep.first_bad == 0);

  auto wrong_family = C;
  wrong_family.transcript[3].instance[1] = GroupElement{0, 7};
  CHECK_FALSE(verify_certificate(L, wrong_family).pass);

  auto zero_coeff = C;
  zero_coeff.coefficients[0] = P("1 + u1 + u2");
  CHECK_FALSE(verify_certificate(L, zero_coeff).pass);
}

TEST_CASE("moves_apart", "[mixing]") {
  auto G = GroupDescriptor::free_abelian(2);
  std::vector<TranscriptEntry> tr;
  for (long n : {1, 2, 4}) tr.push_back({Rational(n), {{0, 0}, {n, 0}, {0, n}}, true});
  CHECK(moves_apart(G, tr));
  tr.push_back({Rational(1), {{0, 0}, {1, 0}, {0, 1}}, true});
  CHECK_FALSE(moves_apart(G, tr));
  CHECK_FALSE(moves_apart(G, {tr.front()}));
}

TEST_CASE("canonical shapes", "[mixing]") {
  auto pairs = canonical_shapes(SearchBox::cube(2, 0, 4), 2);
  CHECK(pairs.size() == 40);
  // oracle: canonicalize every pair of box points
  std::set<std::vector<GroupElement>> oracle;
  auto pts = SearchBox::cube(2, 0, 4).points();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      std::vector<GroupElement> s{pts[i], pts[j]};
      std::sort(s.begin(), s.end());
      oracle.insert({s[0] - s[0], s[1] - s[0]});
    }
  CHECK(std::set<std::vector<GroupElement>>(pairs.begin(), pairs.end()) == oracle);

  std::set<std::vector<GroupElement>> triples_oracle;
  auto small = SearchBox{{0, -1}, {2, 1}}.points();
  for (std::size_t i = 0; i < small.size(); ++i)
    for (std::size_t j = i + 1; j < small.size(); ++j)
      for (std::size_t k = j + 1; k < small.size(); ++k) {
        std::vector<GroupElement> s{small[i], small[j], small[k]};
        std::sort(s.begin(), s.end());
        GroupElement o = s[0];
        for (auto& g : s) g = g - o;
        triples_oracle.insert(s);
      }
  auto triples = canonical_shapes(SearchBox{{0, -1}, {2, 1}}, 3);
  CHECK(triples.size() == triples_oracle.size());
  CHECK(std::set<std::vector<GroupElement>>(triples.begin(), triples.end()) == triples_oracle);
}

TEST_CASE("shape_search on the Ledrappier system", "[mixing]") {
  auto L = ledrappier();
  auto found = shape_search(L, 3, search(SearchBox::cube(2, 0, 1), SearchBox::cube(2, 0, 0), {1, 2, 4}));
  REQUIRE(found.certificates.size() == 1);
  const auto& C = found.certificates.front();
  CHECK(C.shape == std::vector<GroupElement>{{0, 0}, {0, 1}, {1, 0}});
  for (const auto& a : C.coefficients) CHECK(std::get<LaurentPoly>(a) == P("1"));
  CHECK_FALSE(C.proof_grade());
  CHECK(verify_certificate(L, C).pass);

  auto empty = shape_search(L, 2, search(SearchBox::cube(2, 0, 4), SearchBox::cube(2, 0, 3), {1, 2, 4}));
  CHECK(empty.certificates.empty());
  CHECK(empty.shapes == 40);
  CHECK(empty.exhaustive());

  // a single dilation always admits solutions: the joint condition matters
  auto single = shape_search(L, 2, search(SearchBox::cube(2, 0, 1), SearchBox::cube(2, 0, 1), {1}));
  CHECK_FALSE(single.certificates.empty());
  for (const auto& c : single.certificates) CHECK(c.transcript.front().bit);

  CHECK_THROWS_AS(shape_search(charp(2, 2, {"1 + u1 + u2", "u1 + u2"}), 2,
                               search(SearchBox::cube(2, 0, 1), SearchBox::cube(2, 0, 0), {1})),
                  DomainError);
  CHECK_THROWS_AS(shape_search(L, 1, search(SearchBox::cube(2, 0, 1), SearchBox::cube(2, 0, 0), {1})), DomainError);
  auto tiny = search(SearchBox::cube(2, 0, 4), SearchBox::cube(2, 0, 0), {1, 2});
  tiny.budget = 10;
  CHECK_THROWS_AS(shape_search(L, 2, tiny), BudgetExceeded);
}

TEST_CASE("frobenius certificates are rediscovered by shape_search", "[mixing][property]") {
  testgen::Rng rng(31337);
  int checked = 0;
  while (checked < 6) {
    // random F2 trinomial / quadrinomial with support in [0,2]^2 containing the origin
    LaurentPoly f(2, F2);
    f.add_term(GroupElement{0, 0}, 1);
    std::size_t want = 3 + rng.below(2);
    while (f.size() < want) f.add_term(GroupElement{rng.range(0, 2), rng.range(0, 2)}, 1);
    if (f.size() != want) continue;
    AlgebraicSystem S(GroupDescriptor::free_abelian(2), CharPModule{IdealPresentation(2, 2, {f})});
    if (S.ideal().constant_in_ideal()) continue;
    auto C = frobenius_certificate(S, f, 3);
    REQUIRE(verify_certificate(S, C).pass);
    auto res = shape_search(S, C.order, search(SearchBox::cube(2, 0, 2), SearchBox::cube(2, 0, 0), {1, 2, 4}));
    // the support need not contain the origin after cancellation over F2
    auto canon = C.shape;
    const GroupElement origin = canon.front();
    for (auto& g : canon) g = g - origin;
    bool seen = false;
    for (const auto& c : res.certificates) seen |= c.shape == canon;
    CHECK(seen);
    ++checked;
  }
}

TEST_CASE("shape_search over F3", "[mixing]") {
  auto S = charp(2, 3, {"1 + u1 + u2"});
  auto res = shape_search(S, 3, search(SearchBox::cube(2, 0, 1), SearchBox::cube(2, 0, 0), {1, 3, 9}));
  REQUIRE_FALSE(res.certificates.empty());
  for (const auto& c : res.certificates) CHECK(verify_certificate(S, c).pass);
}

TEST_CASE("evaluation analogue finds nothing for 2 and 3", "[mixing]") {
  auto S = x2x3();
  auto res2 = shape_search(S, 2, search(SearchBox::cube(2, -3, 3), SearchBox::cube(2, 0, 0), {1, 2, 3}));
  CHECK(res2.certificates.empty());
  CHECK(res2.shapes > 0);
  auto res3 = shape_search(S, 3, search(SearchBox::cube(2, -1, 1), SearchBox::cube(2, 0, 0), {1, 2, 3, 4}));
  CHECK(res3.certificates.empty());
  // a single dilation is always solvable in a field
  auto one = shape_search(S, 2, search(SearchBox::cube(2, 0, 1), SearchBox::cube(2, 0, 0), {1}));
  CHECK_FALSE(one.certificates.empty());

  // x^2 = 1 in Q makes (0) and (2) collide under u -> -1
  auto K = NumberField::rationals();
  AlgebraicSystem neg(GroupDescriptor::free_abelian(1), EvaluationModule{K, {K.from_rational(-1)}, 1});
  auto res = shape_search(neg, 2, search(SearchBox::cube(1, 0, 2), SearchBox::cube(1, 0, 0), {1, 2, 3}));
  REQUIRE_FALSE(res.certificates.empty());
  CHECK(res.certificates.front().shape == std::vector<GroupElement>{{0}, {2}});
}

TEST_CASE("vanishing_subsums", "[mixing]") {
  CHECK(vanishing_subsums(std::vector<Rational>{1, -1, 2, -2}) == std::vector<std::vector<std::size_t>>{{0, 1}, {2, 3}});
  CHECK(vanishing_subsums(std::vector<Rational>{1, 2, 3}).empty());
  auto L = ledrappier();
  CHECK(vanishing_subsums(L, {P("1"), P("u1"), P("1 + u1")}) == std::vector<std::vector<std::size_t>>{{0, 1, 2}});
  CHECK(vanishing_subsums(L, {P("1"), P("u1"), P("u2")}) == std::vector<std::vector<std::size_t>>{{0, 1, 2}});
  CHECK_THROWS_AS(vanishing_subsums(std::vector<Rational>{1}), DomainError);
  CHECK_THROWS_AS(vanishing_subsums(std::vector<Rational>(21, Rational(1))), DomainError);
}

TEST_CASE("vanishing_subsums agrees with brute force", "[mixing][property]") {
  testgen::Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 2 + rng.below(7);
    std::vector<Rational> t;
    for (std::size_t i = 0; i < n; ++i) t.emplace_back(rng.range(-3, 3));
    auto got = vanishing_subsums(t);
    std::vector<std::vector<std::size_t>> oracle;
    std::vector<std::uint32_t> zero_masks;
    for (std::uint32_t m = 1; m < (1u << n); ++m) {
      Rational s = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (m >> i & 1) s += t[i];
      if (s == 0) zero_masks.push_back(m);
    }
    for (auto m : zero_masks) {
      bool minimal = true;
      for (auto o : zero_masks)
        if (o != m && (o & m) == o) minimal = false;
      if (!minimal) continue;
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < n; ++i)
        if (m >> i & 1) idx.push_back(i);
      oracle.push_back(idx);
    }
    std::sort(oracle.begin(), oracle.end());
    auto sorted = got;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == oracle);
  }
}

TEST_CASE("reduce_witness", "[mixing]") {
  auto line = charp(1, 2, {"1 + u1"});
  auto C = frobenius_certificate(line, P("1 + u1 + u1^10 + u1^11", 1), 4);
  REQUIRE(C.order == 4);
  REQUIRE(verify_certificate(line, C).pass);
  auto R = reduce_witness(line, C);
  CHECK(R.order == 2);
  CHECK(R.order < C.order);
  for (const auto& e : R.transcript) CHECK(e.bit);
  CHECK(verify_certificate(line, R).pass);

  auto L = ledrappier();
  auto irreducible = frobenius_certificate(L, P("1 + u1 + u2"), 6);
  CHECK_THROWS_WITH(reduce_witness(L, irreducible), Catch::Matchers::ContainsSubstring("irreducible"));
  CHECK_THROWS_AS(reduce_witness(line, frobenius_certificate(line, P("1 + u1", 1), 2)), DomainError);
}

TEST_CASE("ess_bound_exponent", "[mixing]") {
  CHECK(ess_bound_exponent(1, 0) == 216);
  CHECK(ess_bound_exponent(2, 1) == 5971968);
  CHECK(ess_bound_exponent(1, 1) == 432);
  CHECK(ess_bound_exponent(3, 2) == pow(Integer(18), 9) * 3);
}

namespace {
UnitEquationProblem over_q(std::vector<long> coeffs, std::vector<long> gens, unsigned box) {
  auto K = NumberField::rationals();
  UnitEquationProblem P{K, {}, {}, box};
  for (long a : coeffs) P.coefficients.push_back(K.from_rational(a));
  for (long g : gens) P.generators.push_back(K.from_rational(g));
  return P;
}

// independent oracle: every exponent tuple, outermost loop over the last unknown
std::set<std::vector<Rational>> naive_solutions(const std::vector<Rational>& a, const std::vector<long>& gens, long B) {
  std::set<Rational> G;
  std::vector<long> e(gens.size(), -B);
  while (true) {
    Rational x = 1;
    for (std::size_t j = 0; j < gens.size(); ++j) x *= pow(Rational(gens[j]), e[j]);
    G.insert(x);
    std::size_t j = 0;
    while (j < e.size() && e[j] == B) e[j++] = -B;
    if (j == e.size()) break;
    ++e[j];
  }
  std::vector<Rational> values(G.rbegin(), G.rend());
  const std::size_t n = a.size();
  std::set<std::vector<Rational>> out;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) x[n - 1 - i] = values[idx[i]];
    Rational s = 0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * x[i];
    if (s == 1) {
      bool degenerate = false;
      for (std::uint32_t m = 1; m + 1 < (1u << n) && !degenerate; ++m) {
        Rational sub = 0;
        for (std::size_t i = 0; i < n; ++i)
          if (m >> i & 1) sub += a[i] * x[i];
        degenerate = sub == 0;
      }
      if (!degenerate) out.insert(x);
    }
    std::size_t i = 0;
    while (i < n && ++idx[i] == values.size()) idx[i++] = 0;
    if (i == n) break;
  }
  return out;
}
}  // namespace

TEST_CASE("enumerate_unit_solutions", "[mixing]") {
  auto plus = enumerate_unit_solutions(over_q({1, 1}, {2}, 5));
  REQUIRE(plus.solutions.size() == 1);
  CHECK(plus.solutions[0].values[0].coeffs[0] == make_rational(1, 2));
  CHECK(plus.solutions[0].values[1].coeffs[0] == make_rational(1, 2));
  CHECK(plus.bound_exponent == 5971968);
  CHECK(plus.bound_holds);

  auto minus = enumerate_unit_solutions(over_q({1, -1}, {2}, 5));
  REQUIRE(minus.solutions.size() == 1);
  CHECK(minus.solutions[0].values[0].coeffs[0] == 2);
  CHECK(minus.solutions[0].values[1].coeffs[0] == 1);

  CHECK(enumerate_unit_solutions(over_q({1, 1}, {}, 5)).solutions.empty());
  CHECK(enumerate_unit_solutions(over_q({2}, {}, 5)).solutions.empty());
  CHECK(enumerate_unit_solutions(over_q({2}, {2}, 3)).solutions.size() == 1);
  CHECK_THROWS_AS(enumerate_unit_solutions(over_q({1, 0}, {2}, 2)), DomainError);
  CHECK_THROWS_AS(enumerate_unit_solutions(over_q({1, 1, 1}, {2, 3}, 20), 1000), BudgetExceeded);

  // in Q(sqrt 2): x + y = 1 with x, y in <1 + sqrt 2, -1>
  NumberField K(std::vector<Rational>{-2, 0, 1});
  UnitEquationProblem P{K, {K.one(), K.one()}, {FieldElement{{1, 1}}, K.from_rational(-1)}, 4};
  auto res = enumerate_unit_solutions(P);
  for (const auto& s : res.solutions) CHECK(field_add(K, s.values[0], s.values[1]) == K.one());
}

TEST_CASE("unit solutions match a naive enumeration", "[mixing][property]") {
  struct Case {
    std::vector<long> a, g;
    unsigned B;
  };
  for (const auto& c : std::vector<Case>{{{1, 1}, {2}, 5},
                                         {{1, -1}, {2}, 5},
                                         {{1, 1}, {2, 3}, 3},
                                         {{1, -1}, {2, 3}, 3},
                                         {{3, -2}, {2, 3}, 2},
                                         {{1, 1, 1}, {2}, 3},
                                         {{1, 1, -1}, {2, 3}, 1},
                                         {{2, -1, -1}, {2, 5}, 1}}) {
    auto got = enumerate_unit_solutions(over_q(c.a, c.g, c.B));
    std::set<std::vector<Rational>> mine;
    for (const auto& s : got.solutions) {
      std::vector<Rational> x;
      for (const auto& v : s.values) x.push_back(v.coeffs[0]);
      mine.insert(x);
    }
    std::vector<Rational> a(c.a.begin(), c.a.end());
    CHECK(mine == naive_solutions(a, c.g, c.B));
    CHECK(mine.size() == got.solutions.size());
    CHECK(got.bound_holds);
  }
}

TEST_CASE("rational dual affine family", "[mixing]") {
  auto v = solve_affine_family({1, 0, -1}, {0, 1, 1});
  CHECK(v == std::vector<Rational>{1, -1, 1});
  auto R = rational_dual();
  auto C = affine_family_certificate(R, {1, 0, -1}, {0, 1, 1}, 3, 1000);
  CHECK(C.order == 3);
  CHECK(C.transcript.size() == 998);
  for (const auto& e : C.transcript) CHECK(e.bit);
  auto rep = verify_certificate(R, C);
  CHECK(rep.pass);
  CHECK(rep.moves_apart);
  CHECK_THROWS_AS(solve_affine_family({1, 2}, {0, 1}), DomainError);
}

TEST_CASE("rational dual order-2 scan", "[mixing]") {
  auto R = rational_dual(6);
  auto scan = rational_dual_pair_scan(R, 4, 6, 200);
  CHECK_FALSE(scan.certificate_possible());
  CHECK(scan.crosscheck_mismatches == 0);
  CHECK(scan.crosschecked > 0);

  // brute-force oracle over the same region with character_correlation
  std::vector<Rational> coeffs, shifts;
  for (long p = 1; p <= 4; ++p)
    for (long q = 1; q <= 4; ++q)
      if (std::gcd(p, q) == 1) {
        coeffs.push_back(make_rational(p, q));
        coeffs.push_back(-make_rational(p, q));
      }
  for (long p = 1; p <= 6; ++p)
    for (long q = 1; q <= 6; ++q)
      if (std::gcd(p, q) == 1) shifts.push_back(make_rational(p, q));
  std::size_t vanishing = 0, max_ratios = 0;
  std::vector<GroupElement> g;
  for (const auto& s : shifts) g.push_back(R.group().from_rational(s));
  for (const auto& a1 : coeffs)
    for (const auto& a2 : coeffs) {
      std::set<Rational> ratios;
      for (std::size_t i = 0; i < shifts.size(); ++i)
        for (std::size_t j = 0; j < shifts.size(); ++j) {
          if (i == j) continue;
          if (character_correlation(R, CharacterTuple{{{g[i], a1}, {g[j], a2}}})) {
            ++vanishing;
            ratios.insert(shifts[j] / shifts[i]);
          }
        }
      max_ratios = std::max(max_ratios, ratios.size());
    }
  CHECK(scan.vanishing_tuples == vanishing);
  CHECK(scan.max_ratios_per_pair == max_ratios);
  CHECK(scan.coefficient_pairs == coeffs.size() * coeffs.size());
}

TEST_CASE("lifted certificates", "[mixing]") {
  auto primes = first_primes(5);
  AlgebraicSystem S(GroupDescriptor::positive_rationals(primes),
                    CharPModule{IdealPresentation(5, 2, {P("1 + u2 + u3", 5)})});
  auto split = split_action(S);
  auto inner = frobenius_certificate(split.inner(), P("1 + u1 + u2"), 6);
  auto lifted = lift_certificate(S, split, inner);
  CHECK(lifted.order == 3);
  CHECK(lifted.proof_grade());
  CHECK(lifted.shape[1] == S.group().from_rational(5));
  CHECK(verify_certificate(S, lifted).pass);
}

TEST_CASE("mixing_order_report", "[mixing]") {
 SECTION("charp") {
  ReportOptions opt;
  opt.rmax = 4;
  auto rep = mixing_order_report(ledrappier(), opt);
  REQUIRE(rep.least_order.has_value());
  CHECK(*rep.least_order == 3);
  CHECK(rep.proof_grade());
  REQUIRE(rep.orders.size() == 2);
  CHECK(rep.orders[0].status == "clean");
  CHECK(rep.orders[1].method == "frobenius");
  CHECK_FALSE(rep.nonmixing_element.has_value());
 }
 SECTION("evaluation") {
  ReportOptions eo;
  eo.rmax = 3;
  eo.box = SearchBox::cube(2, -2, 2);
  auto erep = mixing_order_report(x2x3(), eo);
  CHECK_FALSE(erep.least_order.has_value());
  CHECK(erep.orders.size() == 2);
  for (const auto& o : erep.orders) CHECK(o.status == "clean");
 }
 SECTION("dual") {
  ReportOptions ro;
  ro.rmax = 3;
  ro.dual_family_last = 60;
  auto rrep = mixing_order_report(rational_dual(), ro);
  REQUIRE(rrep.least_order.has_value());
  CHECK(*rrep.least_order == 3);
  CHECK(rrep.orders[0].status == "clean");
  CHECK_FALSE(rrep.proof_grade());
 }
 SECTION("cyclic") {
  auto cyc = charp(1, 2, {"u1^3 + 1"});
  auto crep = mixing_order_report(cyc, ReportOptions{});
  CHECK(crep.nonmixing_element.has_value());
  CHECK(*crep.least_order == 2);  // 1 + u^3 is an order-2 Frobenius family
 }
}
