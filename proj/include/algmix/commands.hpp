#pragma once

// The CLI commands as library functions: each takes parsed inputs, writes
// text (or one JSON document) to `out` and returns the process exit code.

#include <algmix/io.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <thread>

namespace algmix::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kInputError = 2, kEmptySearch = 3, kBudgetExhausted = 4 };

inline unsigned default_threads() {
  if (const char* env = std::getenv("ALGMIX_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------------------
// argument syntax

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '[' || c == '(') ++depth;
    if (c == ']' || c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  for (auto& t : out) {
    auto b = t.find_first_not_of(" \t");
    auto e = t.find_last_not_of(" \t");
    t = b == std::string::npos ? "" : t.substr(b, e - b + 1);
  }
  return out;
}

inline long to_long(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw DomainError("bad integer '" + s + "' in " + what);
  return v;
}

inline std::vector<long> long_list(const std::string& s, const std::string& what) {
  std::vector<long> out;
  if (s.empty()) return out;
  for (const auto& t : split(s, ',')) out.push_back(to_long(t, what));
  return out;
}

}  // namespace detail

/// "lo:hi" (a cube) or "lo1,lo2:hi1,hi2".
inline SearchBox parse_box(const std::string& s, std::size_t d) {
  auto parts = detail::split(s, ':');
  if (parts.size() != 2) throw DomainError("box '" + s + "' is not of the form lo:hi");
  auto lo = detail::long_list(parts[0], "box"), hi = detail::long_list(parts[1], "box");
  if (lo.size() == 1) lo.assign(d, lo[0]);
  if (hi.size() == 1) hi.assign(d, hi[0]);
  if (lo.size() != d || hi.size() != d) throw DomainError("box '" + s + "' does not have " + std::to_string(d) + " coordinates");
  for (std::size_t i = 0; i < d; ++i)
    if (lo[i] > hi[i]) throw DomainError("box '" + s + "' is empty");
  return {lo, hi};
}

/// "x,y=v;x,y=v".
inline CylinderSet parse_pins(const std::string& s) {
  CylinderSet C;
  for (const auto& pin : detail::split(s, ';')) {
    auto eq = detail::split(pin, '=');
    if (eq.size() != 2) throw DomainError("pin '" + pin + "' is not of the form site=value");
    long v = detail::to_long(eq[1], "pin value");
    if (v < 0) throw DomainError("pin value must be a residue, got " + eq[1]);
    C.push_back(Pin{detail::long_list(eq[0], "pin site"), static_cast<std::uint32_t>(v)});
  }
  if (C.empty()) throw DomainError("empty cylinder set");
  return C;
}

/// "x,y;x,y;...".
inline std::vector<GroupElement> parse_shifts(const std::string& s, std::size_t d) {
  std::vector<GroupElement> out;
  for (const auto& t : detail::split(s, ';')) {
    auto v = detail::long_list(t, "shift");
    if (v.size() != d) throw DomainError("shift '" + t + "' does not have " + std::to_string(d) + " coordinates");
    GroupElement g(d);
    for (std::size_t i = 0; i < d; ++i) g[i] = v[i];
    out.push_back(g);
  }
  return out;
}

/// Field elements separated by commas; "[a,b]" gives power-basis coordinates.
inline std::vector<FieldElement> parse_field_elements(const std::string& s, const NumberField& K) {
  std::vector<FieldElement> out;
  if (s.empty()) return out;
  for (const auto& t : detail::split(s, ',')) {
    if (!t.empty() && t.front() == '[') {
      if (t.back() != ']') throw DomainError("unclosed coordinate list '" + t + "'");
      upoly::Dense c;
      for (const auto& x : detail::split(t.substr(1, t.size() - 2), ',')) c.push_back(parse_rational(x));
      if (c.size() > K.degree()) throw DomainError("'" + t + "' has more coordinates than the field degree");
      out.push_back(K.reduce(std::move(c)));
    } else {
      out.push_back(K.from_rational(parse_rational(t)));
    }
  }
  return out;
}

inline NumberField parse_field(const std::string& s) {
  std::vector<Rational> m;
  for (const auto& t : detail::split(s, ',')) m.push_back(parse_rational(t));
  return NumberField(std::move(m));
}

namespace detail {
inline void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

inline std::string join(const std::vector<GroupElement>& v, const GroupDescriptor& G) {
  std::string s;
  for (const auto& g : v) s += (s.empty() ? "" : " ") + G.format(g);
  return s;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOptions {
  std::optional<SearchBox> mixing_box;
  unsigned torsion_kmax = 64;
  bool json = false;
};

inline int cmd_analyze(const SystemFile& F, const AnalyzeOptions& opt, std::ostream& out, std::ostream& err) {
  const auto& S = F.system;
  const std::size_t d = S.group().rank();
  Json j;
  j["name"] = F.name;
  j["system_hash"] = system_hash(S);
  j["group"] = group_json(S.group());
  j["module"] = S.module_kind_name();
  bool trivial = false;
  std::string characteristic = "0";
  if (S.is_char_p()) {
    const auto& I = S.ideal();
    characteristic = std::to_string(I.characteristic());
    trivial = I.constant_in_ideal();
    j["engine"] = I.preferred_engine() == MembershipEngine::Substitution ? "substitution" : "groebner";
    Json gb = Json::array();
    for (const auto& g : I.groebner_basis()) gb.push_back(to_string(g));
    j["groebner_basis"] = gb;
    if (!trivial) {
      auto k = I.find_torsion_unit(opt.torsion_kmax);
      j["torsion_unit"] = k ? Json(*k) : Json(nullptr);
    }
  }
  j["characteristic"] = characteristic;
  j["quotient"] = trivial ? "trivial" : "nontrivial";
  std::string summary;
  if (trivial) {
    summary = "trivial quotient";
    err << "warning: trivial quotient: the ideal contains a unit, the system is a point\n";
    j["nonmixing_element"] = nullptr;
  } else {
    SearchBox box = opt.mixing_box.value_or(SearchBox::cube(d, -3, 3));
    auto g = find_nonmixing_element(S, box);
    std::string where = S.is_rational_dual() ? "(the action is free)" : "in box " + box.describe();
    j["mixing_box"] = S.is_rational_dual() ? "none needed: the action is free" : box.describe();
    j["nonmixing_element"] = g ? group_element_json(S.group(), *g) : Json(nullptr);
    summary = "nontrivial, " + (g ? "non-mixing element " + S.group().format(*g) + " " + where : "no non-mixing element " + where);
  }
  summary += ", characteristic " + characteristic;
  bool connected = !S.is_char_p();
  j["connected"] = connected;
  if (!connected)
    j["contract"] = "characteristic p: mixing can hold for some orders and fail for others";
  else if (S.group().kind() == GroupKind::PositiveRationals)
    j["contract"] = "connected, but the acting group has infinite rational rank: mixing does not force mixing of all orders";
  else
    j["contract"] = "connected, acting group of finite rational rank: once mixing, the system is mixing of all orders";
  j["summary"] = summary;
  if (opt.json) {
    detail::emit(out, j);
    return kOk;
  }
  out << (F.name.empty() ? "system" : F.name) << ": " << S.group().kind_name() << " of rank " << d << ", "
      << S.module_kind_name() << " module\n";
  out << summary << "\n";
  if (j.contains("engine")) out << "membership engine: " << j["engine"].get<std::string>() << "\n";
  if (j.contains("torsion_unit") && !j["torsion_unit"].is_null())
    out << "u1^" << j["torsion_unit"].get<unsigned>() << " = 1 in the quotient\n";
  out << j["contract"].get<std::string>() << "\n";
  out << "system hash " << j["system_hash"].get<std::string>() << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// certify

struct CertifyOptions {
  std::size_t order = 0;
  std::optional<SearchBox> box, window;
  std::vector<long> dilations;
  unsigned kmax = 6;
  std::uint64_t budget = 5'000'000;
  unsigned threads = 1;
  std::size_t max_per_cell = 1;
  long coeff_height = 20, shift_height = 50, family_last = 1000;
  std::string out_dir = ".";
  std::string prefix = "certificate";
  bool write = true;
  bool json = false;
};

struct CertifyOutcome {
  int exit = kOk;
  std::string status, method, region;
  std::vector<NonMixingCertificate> certificates;
  std::vector<std::string> files;
};

inline CertifyOutcome run_certify(const AlgebraicSystem& S, const CertifyOptions& opt) {
  if (opt.order < 2) throw DomainError("--order must be at least 2");
  const std::size_t r = opt.order, d = S.group().rank();
  CertifyOutcome res;
  if (S.is_char_p() && S.ideal().constant_in_ideal()) throw DomainError("trivial quotient: there are no nonzero characters");

  if (S.is_char_p()) {
    std::vector<LaurentPoly> sources = S.ideal().generators();
    for (const auto& g : S.ideal().groebner_basis()) sources.push_back(g);
    std::set<std::string> seen;
    for (const auto& f : sources) {
      if (f.size() != r || !seen.insert(to_string(f)).second) continue;
      auto C = frobenius_certificate(S, f, opt.kmax);
      if (verify_certificate(S, C).pass) res.certificates.push_back(std::move(C));
    }
    if (!res.certificates.empty()) {
      res.method = "frobenius";
      res.region = "generators and Groebner basis elements with " + std::to_string(r) + " terms";
    }
  }
  if (res.certificates.empty()) {
    if (S.is_rational_dual()) {
      if (r == 2) {
        auto scan = rational_dual_pair_scan(S, opt.coeff_height, opt.shift_height);
        res.method = "pair scan";
        res.region = "coefficients of height <= " + std::to_string(opt.coeff_height) + ", shift pairs of height <= " +
                     std::to_string(opt.shift_height) + ", " + std::to_string(scan.vanishing_tuples) +
                     " vanishing tuples, at most " + std::to_string(scan.max_ratios_per_pair) + " ratio per coefficient pair";
        if (scan.crosscheck_mismatches) throw std::logic_error("pair scan disagrees with character_correlation");
      } else if (r == 3) {
        res.method = "affine family (1, n, n-1)";
        res.region = "n = 3.." + std::to_string(opt.family_last);
        auto C = affine_family_certificate(S, {1, 0, -1}, {0, 1, 1}, 3, opt.family_last);
        if (verify_certificate(S, C).pass) res.certificates.push_back(std::move(C));
      } else {
        res.method = "none";
        res.region = "no search is implemented for order " + std::to_string(r) + " on the rational dual system";
      }
    } else {
      ShapeSearchOptions so;
      so.box = opt.box.value_or(S.is_char_p() ? SearchBox::cube(d, 0, 4) : SearchBox::cube(d, -4, 4));
      so.window = opt.window.value_or(SearchBox::cube(d, 0, 3));
      so.dilations = opt.dilations;
      if (so.dilations.empty()) {
        if (S.is_char_p())
          so.dilations = {1, 2, 4, 8};
        else
          for (long n = 1; n <= static_cast<long>(r) + 1; ++n) so.dilations.push_back(n);
      }
      so.budget = opt.budget;
      so.threads = opt.threads;
      so.max_per_cell = opt.max_per_cell;
      res.method = "shape search";
      try {
        auto sr = shape_search(S, r, so);
        res.region = sr.region + ", " + std::to_string(sr.cells) + " cells";
        if (!sr.exhaustive()) res.region += ", kernel enumeration truncated in " + std::to_string(sr.truncated_cells) + " cells";
        res.certificates = std::move(sr.certificates);
      } catch (const BudgetExceeded& e) {
        res.exit = kBudgetExhausted;
        res.status = "budget";
        res.region = e.region();
        return res;
      }
    }
  }
  const auto hash = system_hash(S);
  for (auto& C : res.certificates) C.system_hash = hash;
  res.status = res.certificates.empty() ? "clean" : "certificate";
  res.exit = res.certificates.empty() ? kEmptySearch : kOk;
  return res;
}

inline int cmd_certify(const SystemFile& F, const CertifyOptions& opt, std::ostream& out, std::ostream& err) {
  const auto& S = F.system;
  auto res = run_certify(S, opt);
  if (opt.write && !res.certificates.empty()) {
    std::filesystem::create_directories(opt.out_dir);
    for (std::size_t i = 0; i < res.certificates.size(); ++i) {
      auto path = (std::filesystem::path(opt.out_dir) /
                   (opt.prefix + "-order" + std::to_string(opt.order) + "-" + std::to_string(i + 1) + ".json"))
                      .string();
      std::ofstream f(path, std::ios::binary);
      if (!f) throw InputError(path, 0, 0, "cannot write certificate");
      f << print_certificate(S, res.certificates[i]);
      res.files.push_back(path);
    }
  }
  if (opt.json) {
    Json j;
    j["order"] = opt.order;
    j["status"] = res.status;
    j["method"] = res.method;
    j["region"] = res.region;
    j["files"] = res.files;
    Json certs = Json::array();
    for (const auto& C : res.certificates) certs.push_back(certificate_json(S, C));
    j["certificates"] = certs;
    detail::emit(out, j);
    return res.exit;
  }
  if (res.exit == kBudgetExhausted) {
    err << "budget exhausted at order " << opt.order << "; searched region: " << res.region << "\n";
    return res.exit;
  }
  if (res.certificates.empty()) {
    out << "no certificate at order " << opt.order << " (" << res.method << ")\n";
    out << "exhausted region: " << res.region << "\n";
    return res.exit;
  }
  out << res.certificates.size() << " certificate" << (res.certificates.size() > 1 ? "s" : "") << " at order " << opt.order
      << " (" << res.method << ")\n";
  for (std::size_t i = 0; i < res.certificates.size(); ++i) {
    const auto& C = res.certificates[i];
    out << "  " << C.grade() << "-grade, shape " << detail::join(C.shape, S.group()) << ", coefficients";
    for (const auto& a : C.coefficients) out << " " << to_string(a);
    out << ", " << C.transcript.size() << " transcript entries";
    if (i < res.files.size()) out << " -> " << res.files[i];
    out << "\n";
  }
  return res.exit;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  bool json = false;
};

inline int cmd_verify(const SystemFile& F, const std::string& certificate_text, const std::string& source,
                      const VerifyOptions& opt, std::ostream& out, std::ostream&) {
  const auto& S = F.system;
  auto C = parse_certificate(S, certificate_text, source);
  auto rep = verify_certificate(S, C);
  if (opt.json) {
    detail::emit(out, verify_report_json(S, rep));
    return rep.pass ? kOk : kVerifyFailed;
  }
  const auto& G = S.group();
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    const auto& e = rep.entries[i];
    out << "entry " << i << " parameter " << to_string(e.parameter) << " shifts " << detail::join(e.instance, G)
        << " recorded " << e.recorded << " recomputed " << e.recomputed << "\n";
  }
  if (rep.pass) {
    out << "PASS: " << rep.entries.size() << " entries, " << C.grade() << "-grade, order " << C.order << "\n";
  } else {
    out << "FAIL";
    if (rep.first_bad)
      out << " at entry " << *rep.first_bad << " (parameter " << to_string(rep.entries[*rep.first_bad].parameter) << ")";
    out << ": " << rep.message << "\n";
  }
  return rep.pass ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
  std::vector<CylinderSet> sets;
  std::vector<GroupElement> shifts;
  std::optional<SearchBox> window;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  std::size_t dump = 0;
  unsigned threads = 1;
  bool json = false;
};

/// Bounding box of the shifted pins, grown by the generator extent.
inline SearchBox default_window(const AlgebraicSystem& S, const std::vector<CylinderSet>& sets,
                                const std::vector<GroupElement>& shifts) {
  auto pins = algmix::detail::shifted_pins(sets, shifts);
  const std::size_t d = S.group().rank();
  long margin = 1;
  for (const auto& g : S.ideal().generators())
    for (const auto& [e, c] : g)
      for (const auto& q : e) margin = std::max<long>(margin, std::abs(q.get_num().get_si()));
  SearchBox b{std::vector<long>(d, 0), std::vector<long>(d, 0)};
  bool first = true;
  for (const auto& p : pins) {
    if (p.site.size() != d) throw DomainError("pin site has the wrong dimension");
    for (std::size_t i = 0; i < d; ++i) {
      b.lo[i] = first ? p.site[i] : std::min(b.lo[i], p.site[i]);
      b.hi[i] = first ? p.site[i] : std::max(b.hi[i], p.site[i]);
    }
    first = false;
  }
  for (std::size_t i = 0; i < d; ++i) {
    b.lo[i] -= margin;
    b.hi[i] += margin;
  }
  return b;
}

inline int cmd_simulate(const SystemFile& F, const SimulateOptions& opt, std::ostream& out, std::ostream&) {
  const auto& S = F.system;
  if (!S.is_char_p()) throw UnsupportedOperation("measure-level simulation needs a characteristic-p system; " +
                                                 S.module_kind_name() + " systems are handled at character level only");
  if (opt.sets.empty()) throw DomainError("no cylinder set given");
  if (opt.shifts.empty()) throw DomainError("no shifts given");
  if (opt.sets.size() != 1 && opt.sets.size() != opt.shifts.size())
    throw DomainError("give one cylinder set or one per shift");
  SearchBox win = opt.window.value_or(default_window(S, opt.sets, opt.shifts));
  auto exact = correlation_exact(S, opt.sets, opt.shifts, win);
  Rational product = product_measure(S, opt.sets, opt.shifts.size(), win);
  auto est = correlation_estimate(S, opt.sets, opt.shifts, win, opt.samples, opt.seed, opt.threads);
  est.exact = exact.value;
  double sigmas = est.stderr_ > 0 ? std::abs(est.value - exact.value.get_d()) / est.stderr_ : 0.0;
  std::vector<std::string> grids;
  if (opt.dump) {
    WindowConfigSpace W(S, win);
    for (const auto& x : sample_uniform(W, opt.dump, opt.seed, opt.threads)) grids.push_back(to_text_grid(W, x));
  }
  if (opt.json) {
    Json j;
    j["exact"] = to_string(exact.value);
    j["exact_larger_window"] = to_string(exact.larger_value);
    j["stable"] = exact.stable;
    j["product"] = to_string(product);
    j["monte_carlo"] = estimate_json(est);
    j["deviation_sigmas"] = sigmas;
    if (!grids.empty()) j["samples"] = grids;
    detail::emit(out, j);
    return kOk;
  }
  out << "window " << win.describe() << " (compared with " << algmix::detail::grown(win).describe() << ")\n";
  out << "exact correlation  " << to_string(exact.value) << (exact.stable ? "" : "  NOT STABLE: larger window gives " + to_string(exact.larger_value)) << "\n";
  out << "product measure    " << to_string(product) << "\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "monte carlo        %.6f +- %.6f (N=%zu, seed=%llu, %s)\n", est.value, est.stderr_,
                est.samples, static_cast<unsigned long long>(est.seed), est.generator.c_str());
  out << buf;
  std::snprintf(buf, sizeof buf, "deviation          %.2f standard errors\n", sigmas);
  out << buf;
  for (std::size_t i = 0; i < grids.size(); ++i) out << "sample " << i << ":\n" << grids[i];
  return kOk;
}

// ---------------------------------------------------------------------------
// uniteq

struct UniteqOptions {
  std::string field = "0,1";
  std::string coeffs;
  std::string gens;
  unsigned box = 5;
  std::uint64_t budget = 50'000'000;
  bool json = false;
};

inline int cmd_uniteq(const UniteqOptions& opt, std::ostream& out, std::ostream& err) {
  UnitEquationProblem P;
  P.field = parse_field(opt.field);
  P.coefficients = parse_field_elements(opt.coeffs, P.field);
  P.generators = parse_field_elements(opt.gens, P.field);
  P.box = opt.box;
  UnitSolutions U;
  try {
    U = enumerate_unit_solutions(P, opt.budget);
  } catch (const BudgetExceeded& e) {
    err << "budget exhausted: " << e.what() << " (" << e.region() << ")\n";
    return kBudgetExhausted;
  }
  if (opt.json) {
    auto j = unit_solutions_json(U);
    j["n"] = P.coefficients.size();
    j["rank"] = P.generators.size();
    j["box"] = P.box;
    detail::emit(out, j);
    return kOk;
  }
  for (const auto& s : U.solutions) {
    out << "(";
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      const auto& v = s.values[i];
      out << (i ? ", " : "") << (v.coeffs.size() == 1 ? to_string(v.coeffs[0]) : to_string(v));
    }
    out << ")\n";
  }
  out << U.solutions.size() << " solution" << (U.solutions.size() == 1 ? "" : "s") << " among " << U.group_elements
      << " group elements with exponents in [-" << P.box << "," << P.box << "]\n";
  out << "bound exponent " << to_string(U.bound_exponent) << " for n=" << P.coefficients.size()
      << ", r=" << P.generators.size() << ": assertion " << (U.bound_holds ? "pass" : "FAIL") << "\n";
  return U.bound_holds ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------------------
// report

inline int cmd_report(const SystemFile& F, const ReportOptions& opt, bool json, std::ostream& out, std::ostream&) {
  const auto& S = F.system;
  auto rep = mixing_order_report(S, opt);
  if (json) {
    detail::emit(out, mixing_report_json(S, rep));
    return kOk;
  }
  const auto& G = S.group();
  out << "non-mixing element search (" << rep.mixing_box << "): "
      << (rep.nonmixing_element ? G.format(*rep.nonmixing_element) : std::string("none")) << "\n";
  for (const auto& o : rep.orders)
    out << "order " << o.r << ": " << o.status << " [" << o.method << "] " << o.region << "\n";
  if (rep.least_order) {
    out << "least order with a certificate: " << *rep.least_order << " ("
        << rep.certificate->grade() << "-grade), shape " << detail::join(rep.certificate->shape, G) << "\n";
  }
  for (const auto& n : rep.notes) out << "note: " << n << "\n";
  return kOk;
}

}  // namespace algmix::cli
