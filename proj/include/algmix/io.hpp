#pragma once

// JSON formats: system presentations (schema algmix.system/1), certificates
// (algmix.certificate/1) and the report records printed by the CLI. Every
// rational is written as a "p/q" string.

#include <algmix/mixing.hpp>
#include <algmix/simulate.hpp>

#include <json.hpp>
#include <openssl/evp.h>

#include <fstream>
#include <sstream>
#include <string>

namespace algmix {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSystemSchema = "algmix.system/1";
inline constexpr const char* kCertificateSchema = "algmix.certificate/1";

/// Bad input file: carries a 1-based line and column when known.
class InputError : public std::runtime_error {
public:
  InputError(const std::string& source, std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error(source + (line ? ":" + std::to_string(line) + ":" + std::to_string(column) : std::string()) +
                           ": " + what),
        line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_, column_;
};

class HashMismatch : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Semantic errors point at the first occurrence of the offending string
// literal; `inner` is an offset inside the literal.
class Locator {
public:
  Locator(std::string source, std::string_view text) : source_(std::move(source)), text_(text) {}

  [[noreturn]] void fail(const std::string& what, const std::string& literal = {}, std::size_t inner = 0) const {
    if (!literal.empty()) {
      auto quoted = Json(literal).dump();
      auto pos = text_.find(quoted);
      if (pos != std::string_view::npos) {
        auto [l, c] = line_column(text_, pos + 1 + inner);
        throw InputError(source_, l, c, what);
      }
    }
    throw InputError(source_, 0, 0, what);
  }

  const std::string& source() const { return source_; }

private:
  std::string source_;
  std::string_view text_;
};

inline const Json& field(const Json& obj, const char* key, const Locator& loc, const std::string& where) {
  if (!obj.is_object()) loc.fail(where + " must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) loc.fail(where + " lacks \"" + key + "\"");
  return *it;
}

inline void only_keys(const Json& obj, std::initializer_list<const char*> keys, const Locator& loc, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (auto k : keys) known = known || it.key() == k;
    if (!known) loc.fail("unknown key \"" + it.key() + "\" in " + where, it.key());
  }
}

inline std::string text_of(const Json& j, const Locator& loc, const std::string& where) {
  if (!j.is_string()) loc.fail(where + " must be a string");
  return j.get<std::string>();
}

inline std::uint64_t count_of(const Json& j, const Locator& loc, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) loc.fail(where + " must be a non-negative integer");
  return j.get<std::uint64_t>();
}

inline Rational rational_of(const Json& j, const Locator& loc, const std::string& where) {
  auto s = text_of(j, loc, where);
  try {
    return parse_rational(s);
  } catch (const ParseError& e) {
    loc.fail(where + ": " + e.what(), s, e.offset());
  } catch (const DomainError& e) {
    loc.fail(where + ": " + e.what(), s);
  }
}

inline LaurentPoly poly_of(const Json& j, std::size_t d, const Domain& dom, const Locator& loc, const std::string& where) {
  auto s = text_of(j, loc, where);
  try {
    return parse_laurent(s, d, dom);
  } catch (const ParseError& e) {
    loc.fail(where + ": " + e.what(), s, e.offset());
  } catch (const DomainError& e) {
    loc.fail(where + ": " + e.what(), s);
  }
}

inline std::size_t variable_index(const std::string& key, std::size_t d, const Locator& loc) {
  if (key.size() < 2 || key[0] != 'u') loc.fail("substitution keys are variables u1..u" + std::to_string(d), key);
  std::size_t v = 0;
  for (std::size_t i = 1; i < key.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(key[i]))) loc.fail("bad variable name", key, i);
    v = v * 10 + static_cast<std::size_t>(key[i] - '0');
    if (v > d) break;
  }
  if (v < 1 || v > d) loc.fail("variable " + key + " outside u1..u" + std::to_string(d), key);
  return v - 1;
}

inline Json rational_json(const Rational& q) { return to_string(q); }

inline Json field_element_json(const FieldElement& a) {
  if (a.coeffs.size() == 1) return rational_json(a.coeffs[0]);
  Json arr = Json::array();
  for (const auto& c : a.coeffs) arr.push_back(rational_json(c));
  return arr;
}

inline FieldElement field_element_of(const Json& j, const NumberField& K, const Locator& loc, const std::string& where) {
  if (j.is_string()) return K.from_rational(rational_of(j, loc, where));
  if (!j.is_array()) loc.fail(where + " must be a rational string or a coordinate list");
  upoly::Dense c;
  for (std::size_t i = 0; i < j.size(); ++i) c.push_back(rational_of(j[i], loc, where + "[" + std::to_string(i) + "]"));
  if (c.size() > K.degree()) loc.fail(where + " has more coordinates than the field degree");
  return K.reduce(std::move(c));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// system presentations

struct SystemFile {
  std::string name;
  std::string notes;
  AlgebraicSystem system;
};

inline Json group_json(const GroupDescriptor& G) {
  Json g;
  switch (G.kind()) {
    case GroupKind::FreeAbelian:
      g["kind"] = "free_abelian";
      g["d"] = G.rank();
      break;
    case GroupKind::RationalVector:
      g["kind"] = "rational_vector";
      g["d"] = G.rank();
      break;
    case GroupKind::PositiveRationals:
      g["kind"] = "positive_rationals";
      g["primes"] = G.primes();
      break;
  }
  return g;
}

inline Json module_json(const AlgebraicSystem& S) {
  Json m;
  if (S.is_char_p()) {
    const auto& I = S.ideal();
    m["kind"] = "char_p";
    m["characteristic"] = I.characteristic();
    Json gens = Json::array();
    for (const auto& g : I.generators()) gens.push_back(to_string(g));
    m["generators"] = gens;
    m["engine"] = I.hint() ? "substitution" : "groebner";
    if (I.hint()) {
      Json sub = Json::object();
      for (const auto& [v, g] : *I.hint()) sub["u" + std::to_string(v + 1)] = to_string(g);
      m["substitution"] = sub;
    }
  } else if (S.is_evaluation()) {
    const auto& E = S.evaluation();
    m["kind"] = "evaluation";
    Json mod = Json::array();
    for (const auto& c : E.field.modulus()) mod.push_back(detail::rational_json(c));
    m["modulus"] = mod;
    Json a = Json::array();
    for (const auto& x : E.assignment) a.push_back(detail::field_element_json(x));
    m["assignment"] = a;
    m["level"] = to_string(E.level);
  } else {
    m["kind"] = "rational_dual";
  }
  return m;
}

inline Json system_json(const SystemFile& F) {
  Json j;
  j["schema"] = kSystemSchema;
  j["name"] = F.name;
  if (!F.notes.empty()) j["notes"] = F.notes;
  j["group"] = group_json(F.system.group());
  j["module"] = module_json(F.system);
  return j;
}

inline std::string print_system(const SystemFile& F) { return system_json(F).dump(2) + "\n"; }

inline std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr)) throw std::runtime_error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

/// Digest of the mathematical content only: name, notes and the membership
/// engine may change without invalidating certificates.
inline std::string system_hash(const AlgebraicSystem& S) {
  Json j;
  j["group"] = group_json(S.group());
  j["module"] = module_json(S);
  j["module"].erase("engine");
  j["module"].erase("substitution");
  return sha256_hex(j.dump());
}

inline SystemFile parse_system(std::string_view text, const std::string& source = "<input>") {
  detail::Locator loc(source, text);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [l, c] = detail::line_column(text, e.byte ? e.byte - 1 : 0);
    std::string msg = e.what();
    auto colon = msg.find("syntax error");
    throw InputError(source, l, c, colon == std::string::npos ? msg : msg.substr(colon));
  }
  if (!j.is_object()) loc.fail("top level must be an object");
  detail::only_keys(j, {"schema", "name", "notes", "group", "module"}, loc, "system");
  auto schema = detail::text_of(detail::field(j, "schema", loc, "system"), loc, "schema");
  if (schema != kSystemSchema) loc.fail("unsupported schema \"" + schema + "\" (expected " + kSystemSchema + ")", schema);
  std::string name = j.contains("name") ? detail::text_of(j["name"], loc, "name") : "";
  std::string notes = j.contains("notes") ? detail::text_of(j["notes"], loc, "notes") : "";

  const Json& gj = detail::field(j, "group", loc, "system");
  const Json& mj = detail::field(j, "module", loc, "system");
  auto gkind = detail::text_of(detail::field(gj, "kind", loc, "group"), loc, "group kind");
  auto guard = [&](auto&& make) {
    try {
      return make();
    } catch (const DomainError& e) {
      loc.fail(e.what());
    }
  };
  GroupDescriptor G = guard([&] {
    if (gkind == "free_abelian" || gkind == "rational_vector") {
      detail::only_keys(gj, {"kind", "d"}, loc, "group");
      auto d = detail::count_of(detail::field(gj, "d", loc, "group"), loc, "group d");
      if (d == 0) loc.fail("group rank must be positive");
      return gkind == "free_abelian" ? GroupDescriptor::free_abelian(d) : GroupDescriptor::rational_vector(d);
    }
    if (gkind == "positive_rationals") {
      detail::only_keys(gj, {"kind", "primes"}, loc, "group");
      const Json& pj = detail::field(gj, "primes", loc, "group");
      if (!pj.is_array() || pj.empty()) loc.fail("group primes must be a nonempty list");
      std::vector<std::uint64_t> primes;
      for (const auto& p : pj) primes.push_back(detail::count_of(p, loc, "prime"));
      return GroupDescriptor::positive_rationals(std::move(primes));
    }
    loc.fail("unknown group kind \"" + gkind + "\"", gkind);
  });
  const std::size_t d = G.rank();

  auto mkind = detail::text_of(detail::field(mj, "kind", loc, "module"), loc, "module kind");
  ModuleSpec spec = guard([&]() -> ModuleSpec {
    if (mkind == "char_p") {
      detail::only_keys(mj, {"kind", "characteristic", "generators", "engine", "substitution"}, loc, "module");
      auto p = detail::count_of(detail::field(mj, "characteristic", loc, "module"), loc, "characteristic");
      if (p < 2 || !is_prime(p)) loc.fail("characteristic must be a prime, got " + std::to_string(p));
      Domain dom = Domain::prime_field(p);
      const Json& gl = detail::field(mj, "generators", loc, "module");
      if (!gl.is_array()) loc.fail("generators must be a list");
      std::vector<LaurentPoly> gens;
      for (std::size_t i = 0; i < gl.size(); ++i) {
        auto f = detail::poly_of(gl[i], d, dom, loc, "generator " + std::to_string(i + 1));
        if (!f.has_integral_exponents()) loc.fail("generator exponents must be integers", gl[i].get<std::string>());
        gens.push_back(std::move(f));
      }
      std::string engine = mj.contains("engine") ? detail::text_of(mj["engine"], loc, "engine") : "";
      if (!engine.empty() && engine != "groebner" && engine != "substitution")
        loc.fail("engine must be \"groebner\" or \"substitution\"", engine);
      std::optional<SubstitutionHint> hint;
      if (mj.contains("substitution")) {
        if (engine == "groebner") loc.fail("a substitution is given but the engine is \"groebner\"");
        const Json& sj = mj["substitution"];
        if (!sj.is_object()) loc.fail("substitution must map variables to polynomials");
        hint.emplace();
        for (auto it = sj.begin(); it != sj.end(); ++it)
          (*hint)[detail::variable_index(it.key(), d, loc)] = detail::poly_of(it.value(), d, dom, loc, "substitution " + it.key());
      } else if (engine == "substitution") {
        loc.fail("engine \"substitution\" needs a substitution map");
      }
      return CharPModule{IdealPresentation(d, p, std::move(gens), std::move(hint))};
    }
    if (mkind == "evaluation") {
      detail::only_keys(mj, {"kind", "modulus", "assignment", "level"}, loc, "module");
      const Json& ml = detail::field(mj, "modulus", loc, "module");
      if (!ml.is_array()) loc.fail("modulus must be a coefficient list, lowest degree first");
      std::vector<Rational> mod;
      for (std::size_t i = 0; i < ml.size(); ++i) mod.push_back(detail::rational_of(ml[i], loc, "modulus"));
      NumberField K(std::move(mod));
      const Json& al = detail::field(mj, "assignment", loc, "module");
      if (!al.is_array()) loc.fail("assignment must be a list");
      std::vector<FieldElement> a;
      for (std::size_t i = 0; i < al.size(); ++i)
        a.push_back(detail::field_element_of(al[i], K, loc, "assignment " + std::to_string(i + 1)));
      Integer level = 1;
      if (mj.contains("level")) {
        Rational L = mj["level"].is_string() ? detail::rational_of(mj["level"], loc, "level")
                                             : Rational(static_cast<long>(detail::count_of(mj["level"], loc, "level")));
        if (!is_integral(L) || L < 1) loc.fail("level must be a positive integer");
        level = L.get_num();
      }
      return EvaluationModule{std::move(K), std::move(a), level};
    }
    if (mkind == "rational_dual") {
      detail::only_keys(mj, {"kind"}, loc, "module");
      return RationalDualModule{};
    }
    loc.fail("unknown module kind \"" + mkind + "\"", mkind);
  });
  return guard([&] { return SystemFile{name, notes, AlgebraicSystem(std::move(G), std::move(spec))}; });
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path, 0, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline SystemFile load_system(const std::string& path) { return parse_system(read_file(path), path); }

// ---------------------------------------------------------------------------
// certificates

inline Json group_element_json(const GroupDescriptor& G, const GroupElement& g) {
  if (G.kind() == GroupKind::PositiveRationals) return detail::rational_json(G.to_rational(g));
  Json arr = Json::array();
  for (const auto& q : g) arr.push_back(detail::rational_json(q));
  return arr;
}

inline GroupElement group_element_of(const GroupDescriptor& G, const Json& j, const detail::Locator& loc) {
  try {
    if (G.kind() == GroupKind::PositiveRationals) {
      Rational q = detail::rational_of(j, loc, "group element");
      if (q <= 0) loc.fail("elements of Q^x_{>0} are positive", j.get<std::string>());
      return G.from_rational(q);
    }
    if (!j.is_array()) loc.fail("group element must be a list of rationals");
    std::vector<Rational> e;
    for (const auto& x : j) e.push_back(detail::rational_of(x, loc, "group element"));
    GroupElement g(std::move(e));
    G.validate(g);
    return g;
  } catch (const DomainError& e) {
    loc.fail(e.what());
  }
}

inline Json module_element_json(const ModuleElement& a) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, LaurentPoly>) return to_string(x);
        else if constexpr (std::is_same_v<T, FieldElement>) return detail::field_element_json(x);
        else return detail::rational_json(x);
      },
      a);
}

inline ModuleElement module_element_of(const AlgebraicSystem& S, const Json& j, const detail::Locator& loc) {
  if (S.is_char_p()) return detail::poly_of(j, S.group().rank(), S.ideal().domain(), loc, "coefficient");
  if (S.is_evaluation()) return detail::field_element_of(j, S.evaluation().field, loc, "coefficient");
  return detail::rational_of(j, loc, "coefficient");
}

inline Json certificate_json(const AlgebraicSystem& S, const NonMixingCertificate& C) {
  const auto& G = S.group();
  Json j;
  j["schema"] = kCertificateSchema;
  j["system_hash"] = C.system_hash.empty() ? system_hash(S) : C.system_hash;
  j["order"] = C.order;
  j["grade"] = C.grade();
  Json shape = Json::array();
  for (const auto& g : C.shape) shape.push_back(group_element_json(G, g));
  j["shape"] = shape;
  Json coeffs = Json::array();
  for (const auto& a : C.coefficients) coeffs.push_back(module_element_json(a));
  j["coefficients"] = coeffs;
  Json fam;
  if (C.family.kind == FamilyKind::PrimePower) {
    fam["kind"] = "prime_power";
    fam["p"] = C.family.p;
    fam["kmax"] = C.family.kmax;
  } else {
    fam["kind"] = "explicit_list";
  }
  j["family"] = fam;
  Json tr = Json::array();
  for (const auto& e : C.transcript) {
    Json inst = Json::array();
    for (const auto& g : e.instance) inst.push_back(group_element_json(G, g));
    tr.push_back(Json{{"parameter", detail::rational_json(e.parameter)}, {"instance", inst}, {"bit", e.bit ? 1 : 0}});
  }
  j["transcript"] = tr;
  return j;
}

inline std::string print_certificate(const AlgebraicSystem& S, const NonMixingCertificate& C) {
  return certificate_json(S, C).dump(2) + "\n";
}

/// Parses a certificate for `S`; throws HashMismatch when it was issued for a
/// different presentation.
inline NonMixingCertificate parse_certificate(const AlgebraicSystem& S, std::string_view text,
                                              const std::string& source = "<certificate>") {
  detail::Locator loc(source, text);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [l, c] = detail::line_column(text, e.byte ? e.byte - 1 : 0);
    throw InputError(source, l, c, "malformed JSON");
  }
  if (!j.is_object()) loc.fail("top level must be an object");
  detail::only_keys(j, {"schema", "system_hash", "order", "grade", "shape", "coefficients", "family", "transcript"}, loc,
                    "certificate");
  auto schema = detail::text_of(detail::field(j, "schema", loc, "certificate"), loc, "schema");
  if (schema != kCertificateSchema) loc.fail("unsupported schema \"" + schema + "\"", schema);
  NonMixingCertificate C;
  C.system_hash = detail::text_of(detail::field(j, "system_hash", loc, "certificate"), loc, "system_hash");
  auto expect = system_hash(S);
  if (C.system_hash != expect)
    throw HashMismatch("certificate was issued for system " + C.system_hash + ", this presentation hashes to " + expect);
  C.order = detail::count_of(detail::field(j, "order", loc, "certificate"), loc, "order");
  const auto& G = S.group();
  for (const auto& g : detail::field(j, "shape", loc, "certificate")) C.shape.push_back(group_element_of(G, g, loc));
  for (const auto& a : detail::field(j, "coefficients", loc, "certificate")) C.coefficients.push_back(module_element_of(S, a, loc));
  const Json& fam = detail::field(j, "family", loc, "certificate");
  auto fk = detail::text_of(detail::field(fam, "kind", loc, "family"), loc, "family kind");
  if (fk == "prime_power") {
    C.family.kind = FamilyKind::PrimePower;
    C.family.p = detail::count_of(detail::field(fam, "p", loc, "family"), loc, "family p");
    C.family.kmax = static_cast<unsigned>(detail::count_of(detail::field(fam, "kmax", loc, "family"), loc, "family kmax"));
  } else if (fk == "explicit_list") {
    C.family.kind = FamilyKind::ExplicitList;
  } else {
    loc.fail("unknown family kind \"" + fk + "\"", fk);
  }
  for (const auto& e : detail::field(j, "transcript", loc, "certificate")) {
    TranscriptEntry t;
    t.parameter = detail::rational_of(detail::field(e, "parameter", loc, "transcript entry"), loc, "parameter");
    for (const auto& g : detail::field(e, "instance", loc, "transcript entry")) t.instance.push_back(group_element_of(G, g, loc));
    t.bit = detail::count_of(detail::field(e, "bit", loc, "transcript entry"), loc, "bit") != 0;
    C.transcript.push_back(std::move(t));
  }
  auto grade = detail::text_of(detail::field(j, "grade", loc, "certificate"), loc, "grade");
  if (grade != C.grade()) loc.fail("grade \"" + grade + "\" does not match the family kind", grade);
  return C;
}

// ---------------------------------------------------------------------------
// report records

inline Json verify_report_json(const AlgebraicSystem& S, const VerifyReport& R) {
  Json j;
  j["pass"] = R.pass;
  j["message"] = R.message;
  j["family_consistent"] = R.family_consistent;
  j["moves_apart"] = R.moves_apart;
  if (R.first_bad) j["first_bad"] = *R.first_bad;
  Json entries = Json::array();
  for (const auto& e : R.entries) {
    Json inst = Json::array();
    for (const auto& g : e.instance) inst.push_back(group_element_json(S.group(), g));
    entries.push_back(Json{{"parameter", detail::rational_json(e.parameter)},
                           {"recorded", e.recorded ? 1 : 0},
                           {"recomputed", e.recomputed ? 1 : 0},
                           {"instance", inst}});
  }
  j["entries"] = entries;
  return j;
}

inline Json mixing_report_json(const AlgebraicSystem& S, const MixingReport& R) {
  Json j;
  Json orders = Json::array();
  for (const auto& o : R.orders)
    orders.push_back(Json{{"r", o.r}, {"status", o.status}, {"method", o.method}, {"region", o.region}, {"certificates", o.certificates}});
  j["orders"] = orders;
  j["least_order"] = R.least_order ? Json(*R.least_order) : Json(nullptr);
  j["proof_grade"] = R.proof_grade();
  j["mixing_box"] = R.mixing_box;
  j["nonmixing_element"] = R.nonmixing_element ? group_element_json(S.group(), *R.nonmixing_element) : Json(nullptr);
  if (R.certificate) j["certificate"] = certificate_json(S, *R.certificate);
  j["notes"] = R.notes;
  return j;
}

inline Json box_json(const SearchBox& b) { return Json{{"lo", b.lo}, {"hi", b.hi}}; }

inline Json estimate_json(const Estimate& e) {
  Json j;
  j["estimate"] = e.value;
  j["stderr"] = e.stderr_;
  j["samples"] = e.samples;
  j["hits"] = e.hits;
  j["seed"] = e.seed;
  j["generator"] = e.generator;
  j["window"] = box_json(e.window);
  j["exact"] = e.exact ? Json(to_string(*e.exact)) : Json(nullptr);
  return j;
}

inline Json unit_solutions_json(const UnitSolutions& U) {
  Json j;
  Json sols = Json::array();
  for (const auto& s : U.solutions) {
    Json vals = Json::array();
    for (const auto& v : s.values) vals.push_back(detail::field_element_json(v));
    sols.push_back(Json{{"values", vals}, {"exponents", s.exponents}});
  }
  j["solutions"] = sols;
  j["count"] = U.solutions.size();
  j["group_elements"] = U.group_elements;
  j["bound_exponent"] = to_string(U.bound_exponent);
  j["bound_holds"] = U.bound_holds;
  return j;
}

}  // namespace algmix
