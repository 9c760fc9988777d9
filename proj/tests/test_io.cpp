#include <catch2/catch_amalgamated.hpp>

#include <algmix/io.hpp>

using namespace algmix;

namespace {
const char* kLedrappier = R"({
  "schema": "algmix.system/1",
  "name": "ledrappier",
  "group": {"kind": "free_abelian", "d": 2},
  "module": {"kind": "char_p", "characteristic": 2, "generators": ["1 + u1 + u2"]}
})";

const char* kSubstitution = R"({
  "schema": "algmix.system/1",
  "name": "ledrappier via substitution",
  "notes": "u2 = 1 + u1 in the quotient",
  "group": {"kind": "free_abelian", "d": 2},
  "module": {"kind": "char_p", "characteristic": 2, "generators": ["u2 + u1 + 1"],
             "engine": "substitution", "substitution": {"u2": "1 + u1"}}
})";

const char* kSqrt2 = R"({
  "schema": "algmix.system/1",
  "name": "sqrt2 at level 2",
  "group": {"kind": "rational_vector", "d": 1},
  "module": {"kind": "evaluation", "modulus": ["-2", "0", "1"], "assignment": [["0", "1"]], "level": 2}
})";

const char* kX2x3 = R"({
  "schema": "algmix.system/1",
  "name": "x2x3",
  "group": {"kind": "free_abelian", "d": 2},
  "module": {"kind": "evaluation", "modulus": ["0", "1"], "assignment": ["2", "3"]}
})";

const char* kDual = R"({
  "schema": "algmix.system/1",
  "group": {"kind": "positive_rationals", "primes": [2, 3, 5, 7]},
  "module": {"kind": "rational_dual"}
})";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

InputError input_error(const std::string& text) {
  try {
    parse_system(text, "t.json");
  } catch (const InputError& e) {
    return e;
  }
  FAIL("no InputError for " << text);
  return InputError("", 0, 0, "");
}
}  // namespace

TEST_CASE("presentation parse-print-parse", "[io]") {
  for (const char* text : {kLedrappier, kSubstitution, kSqrt2, kX2x3, kDual}) {
    auto a = parse_system(text);
    auto printed = print_system(a);
    auto b = parse_system(printed);
    CHECK(print_system(b) == printed);
    CHECK(system_hash(a.system) == system_hash(b.system));
    CHECK(a.name == b.name);
    CHECK(a.notes == b.notes);
    CHECK(a.system.group() == b.system.group());
    CHECK(a.system.module_kind_name() == b.system.module_kind_name());
  }
  auto s = parse_system(kSubstitution);
  REQUIRE(s.system.ideal().hint());
  CHECK(s.system.ideal().preferred_engine() == MembershipEngine::Substitution);
  CHECK(s.system.ideal().hint_consistent());
  auto r = parse_system(kSqrt2);
  CHECK(r.system.evaluation().level == 2);
  CHECK(r.system.evaluation().field.degree() == 2);
}

TEST_CASE("system hash", "[io]") {
  auto a = parse_system(kLedrappier);
  auto h = system_hash(a.system);
  CHECK(h.size() == 64);
  // metadata and formatting do not matter, the ideal does
  CHECK(system_hash(parse_system(replace(kLedrappier, "\"ledrappier\"", "\"other\"")).system) == h);
  CHECK(system_hash(parse_system(replace(kLedrappier, "1 + u1 + u2", "u2+u1 +1")).system) == h);
  CHECK(system_hash(parse_system(replace(kLedrappier, "1 + u1 + u2", "1 + u1 + u2^2")).system) != h);
  CHECK(system_hash(parse_system(replace(kLedrappier, "\"characteristic\": 2", "\"characteristic\": 3")).system) != h);
  CHECK(system_hash(parse_system(kSubstitution).system) == h);
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("presentation errors", "[io]") {
  // malformed exponent: the column points into the generator string
  auto e = input_error(replace(kLedrappier, "1 + u1 + u2", "1 + u1^ + u2"));
  CHECK(e.line() == 5);
  CHECK(e.column() > 60);
  CHECK(std::string(e.what()).rfind("t.json:5:", 0) == 0);

  auto syntax = input_error(replace(kLedrappier, "\"d\": 2}", "\"d\": 2"));
  CHECK(syntax.line() == 6);  // reported where the parser notices the missing brace

  CHECK_THROWS_AS(parse_system(replace(kLedrappier, "algmix.system/1", "algmix.system/2")), InputError);
  CHECK_THROWS_AS(parse_system(replace(kLedrappier, "1 + u1 + u2", "1 + u3")), InputError);
  CHECK_THROWS_AS(parse_system(replace(kLedrappier, "1 + u1 + u2", "1 + u1^(1/2)")), InputError);
  CHECK_THROWS_AS(parse_system(replace(kLedrappier, "\"characteristic\": 2", "\"characteristic\": 4")), InputError);
  CHECK_THROWS_AS(parse_system(replace(kLedrappier, "\"d\": 2", "\"d\": 2, \"extra\": 1")), InputError);
  CHECK_THROWS_AS(parse_system(replace(kLedrappier, "free_abelian", "lattice")), InputError);
  CHECK_THROWS_AS(parse_system(replace(kSqrt2, "\"-2\", \"0\", \"1\"", "\"-4\", \"0\", \"1\"")), InputError);
  CHECK_THROWS_AS(parse_system(replace(kX2x3, "\"2\", \"3\"", "\"2\", \"0\"")), InputError);
  CHECK_THROWS_AS(parse_system(replace(kX2x3, "free_abelian", "positive_rationals")), InputError);
  CHECK_THROWS_AS(parse_system(replace(kDual, "[2, 3, 5, 7]", "[2, 3, 4]")), InputError);
  CHECK_THROWS_AS(parse_system(replace(kSubstitution, "\"u2\": \"1 + u1\"", "\"u7\": \"1 + u1\"")), InputError);
  CHECK_THROWS_AS(load_system("/nonexistent/file.json"), InputError);
}

TEST_CASE("certificate round trip", "[io]") {
  auto L = parse_system(kLedrappier).system;
  auto C = frobenius_certificate(L, parse_laurent("1 + u1 + u2", 2, Domain::prime_field(2)), 6);
  auto text = print_certificate(L, C);
  CHECK(text == print_certificate(L, C));
  auto back = parse_certificate(L, text);
  CHECK(print_certificate(L, back) == text);
  CHECK(verify_certificate(L, back).pass);
  CHECK(back.proof_grade());
  CHECK(back.transcript.size() == 7);

  // one flipped coefficient fails at the first dilation
  auto j = Json::parse(text);
  j["coefficients"][1] = "u1";
  auto bad = parse_certificate(L, j.dump());
  auto rep = verify_certificate(L, bad);
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.first_bad.has_value());
  CHECK(*rep.first_bad == 0);

  auto other = parse_system(replace(kLedrappier, "1 + u1 + u2", "1 + u1 + u2^2")).system;
  CHECK_THROWS_AS(parse_certificate(other, text), HashMismatch);

  j = Json::parse(text);
  j["grade"] = "evidence";
  CHECK_THROWS_AS(parse_certificate(L, j.dump()), InputError);
  CHECK_THROWS_AS(parse_certificate(L, "{\"schema\": 1"), InputError);
}

TEST_CASE("certificate round trip for other modules", "[io]") {
  auto D = parse_system(kDual).system;
  auto C = affine_family_certificate(D, {1, 0, -1}, {0, 1, 1}, 3, 10);  // n, n-1 stay 7-smooth
  auto text = print_certificate(D, C);
  auto j = Json::parse(text);
  CHECK(j["shape"][0] == "1");
  CHECK(j["grade"] == "evidence");
  auto back = parse_certificate(D, text);
  CHECK(print_certificate(D, back) == text);
  CHECK(verify_certificate(D, back).pass);

  auto K = NumberField::rationals();
  AlgebraicSystem neg(GroupDescriptor::free_abelian(1), EvaluationModule{K, {K.from_rational(-1)}, 1});
  ShapeSearchOptions o;
  o.box = SearchBox::cube(1, 0, 2);
  o.window = SearchBox::cube(1, 0, 0);
  o.dilations = {1, 2, 3};
  auto res = shape_search(neg, 2, o);
  REQUIRE_FALSE(res.certificates.empty());
  auto ntext = print_certificate(neg, res.certificates.front());
  CHECK(print_certificate(neg, parse_certificate(neg, ntext)) == ntext);
  CHECK(verify_certificate(neg, parse_certificate(neg, ntext)).pass);
}

TEST_CASE("report records", "[io]") {
  auto L = parse_system(kLedrappier).system;
  ReportOptions opt;
  opt.rmax = 3;
  auto a = mixing_report_json(L, mixing_order_report(L, opt)).dump();
  auto b = mixing_report_json(L, mixing_order_report(L, opt)).dump();
  CHECK(a == b);
  auto j = Json::parse(a);
  CHECK(j["least_order"] == 3);
  CHECK(j["orders"][0]["status"] == "clean");
  CHECK(j["certificate"]["grade"] == "proof");

  Estimate e;
  e.value = 0.25;
  e.samples = 10;
  e.seed = 7;
  e.window = SearchBox::cube(2, 0, 3);
  e.exact = make_rational(1, 4);
  auto ej = estimate_json(e);
  CHECK(ej["exact"] == "1/4");
  CHECK(ej["seed"] == 7);
  CHECK(ej["generator"] == "splitmix64-counter");
}
