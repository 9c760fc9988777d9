#pragma once

// Sparse Laurent polynomials with exact rational exponent vectors over
// Z, Q or F_p. These are the elements of the group rings Z[Z^d], Z[Q^d] and
// (via prime coordinates) Z[Q^x_{>0}], and of their quotient modules.

#include <algmix/numeric.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace algmix {

enum class CoefficientKind { IntegerZ, RationalQ, PrimeField };

struct Domain {
  CoefficientKind kind = CoefficientKind::IntegerZ;
  std::uint64_t p = 0;  // only meaningful for PrimeField

  static Domain integers() { return {CoefficientKind::IntegerZ, 0}; }
  static Domain rationals() { return {CoefficientKind::RationalQ, 0}; }
  static Domain prime_field(std::uint64_t p) {
    if (!is_prime(p) || p >= (std::uint64_t{1} << 31))
      throw DomainError("prime field characteristic must be a prime below 2^31, got " +
                        std::to_string(p));
    return {CoefficientKind::PrimeField, p};
  }

  bool is_prime_field() const { return kind == CoefficientKind::PrimeField; }
  std::uint64_t characteristic() const { return is_prime_field() ? p : 0; }

  friend bool operator==(const Domain&, const Domain&) = default;

  std::string name() const {
    switch (kind) {
      case CoefficientKind::IntegerZ: return "Z";
      case CoefficientKind::RationalQ: return "Q";
      case CoefficientKind::PrimeField: return "F_" + std::to_string(p);
    }
    return "?";
  }

  /// Canonical representative of `c` in this domain.
  Rational normalize(const Rational& c) const {
    switch (kind) {
      case CoefficientKind::IntegerZ:
        if (!is_integral(c)) throw DomainError("non-integral coefficient " + to_string(c) + " over Z");
        return c;
      case CoefficientKind::RationalQ: return c;
      case CoefficientKind::PrimeField: return Rational(Integer(static_cast<unsigned long>(reduce_mod(c, p))));
    }
    return c;
  }
};

/// A point of Q^d. Entries are always reduced fractions (mpq canonical form).
class ExponentVector {
public:
  ExponentVector() = default;
  explicit ExponentVector(std::size_t d) : entries_(d, Rational(0)) {}
  explicit ExponentVector(std::vector<Rational> entries) : entries_(std::move(entries)) {
    for (auto& e : entries_) e.canonicalize();
  }
  ExponentVector(std::initializer_list<long> ints) {
    for (long v : ints) entries_.emplace_back(v);
  }

  static ExponentVector unit(std::size_t d, std::size_t i) {
    ExponentVector e(d);
    e.entries_.at(i) = 1;
    return e;
  }

  std::size_t size() const { return entries_.size(); }
  const Rational& operator[](std::size_t i) const { return entries_[i]; }
  Rational& operator[](std::size_t i) { return entries_[i]; }
  const std::vector<Rational>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  bool is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Rational& q) { return q == 0; });
  }
  bool is_integral() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Rational& q) { return algmix::is_integral(q); });
  }

  /// Least common multiple of the denominators (1 for integer vectors).
  Integer denominator_lcm() const {
    Integer l = 1;
    for (const auto& q : entries_) l = lcm(l, q.get_den());
    return l;
  }

  /// Sup-norm.
  Rational max_abs() const {
    Rational m = 0;
    for (const auto& q : entries_) m = std::max(m, Rational(abs(q)));
    return m;
  }

  ExponentVector operator+(const ExponentVector& o) const {
    check_same(o);
    ExponentVector r(*this);
    for (std::size_t i = 0; i < size(); ++i) r.entries_[i] += o.entries_[i];
    return r;
  }
  ExponentVector operator-(const ExponentVector& o) const {
    check_same(o);
    ExponentVector r(*this);
    for (std::size_t i = 0; i < size(); ++i) r.entries_[i] -= o.entries_[i];
    return r;
  }
  ExponentVector operator-() const {
    ExponentVector r(*this);
    for (auto& q : r.entries_) q = -q;
    return r;
  }
  ExponentVector scaled(const Rational& n) const {
    ExponentVector r(*this);
    for (auto& q : r.entries_) q *= n;
    return r;
  }

  friend bool operator==(const ExponentVector& a, const ExponentVector& b) { return a.entries_ == b.entries_; }
  friend bool operator<(const ExponentVector& a, const ExponentVector& b) {
    return std::lexicographical_compare(a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end());
  }

private:
  void check_same(const ExponentVector& o) const {
    if (o.size() != size()) throw DomainError("exponent vectors of different length");
  }

  std::vector<Rational> entries_;
};

inline std::string to_string(const ExponentVector& e) {
  std::string s = "(";
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) s += ",";
    s += to_string(e[i]);
  }
  return s + ")";
}

/// Finite map ExponentVector -> nonzero coefficient. Terms iterate in
/// ascending lexicographic order of exponent vectors.
class LaurentPoly {
public:
  using TermMap = std::map<ExponentVector, Rational>;

  LaurentPoly() = default;
  LaurentPoly(std::size_t nvars, Domain domain) : nvars_(nvars), domain_(domain) {}

  static LaurentPoly constant(std::size_t nvars, Domain domain, const Rational& c) {
    LaurentPoly f(nvars, domain);
    f.add_term(ExponentVector(nvars), c);
    return f;
  }
  static LaurentPoly one(std::size_t nvars, Domain domain) { return constant(nvars, domain, 1); }
  static LaurentPoly monomial(Domain domain, const ExponentVector& e, const Rational& c = 1) {
    LaurentPoly f(e.size(), domain);
    f.add_term(e, c);
    return f;
  }
  static LaurentPoly variable(std::size_t nvars, Domain domain, std::size_t i) {
    return monomial(domain, ExponentVector::unit(nvars, i));
  }

  std::size_t nvars() const { return nvars_; }
  const Domain& domain() const { return domain_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  Rational coefficient(const ExponentVector& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  std::vector<ExponentVector> support() const {
    std::vector<ExponentVector> s;
    s.reserve(terms_.size());
    for (const auto& [e, c] : terms_) s.push_back(e);
    return s;
  }

  bool has_integral_exponents() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.is_integral(); });
  }

  /// Adds c*u^e, keeping the map canonical.
  void add_term(const ExponentVector& e, const Rational& c) {
    if (e.size() != nvars_) throw DomainError("exponent vector length does not match variable count");
    Rational v = domain_.normalize(c);
    if (v == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, v);
    if (!inserted) {
      it->second = domain_.normalize(it->second + v);
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// Entrywise minimum of exponents; the zero vector for the zero polynomial.
  ExponentVector min_exponents() const {
    ExponentVector m(nvars_);
    bool first = true;
    for (const auto& [e, c] : terms_) {
      for (std::size_t i = 0; i < nvars_; ++i)
        if (first || e[i] < m[i]) m[i] = e[i];
      first = false;
    }
    return m;
  }

  /// Multiplication by the monomial u^shift.
  LaurentPoly translated(const ExponentVector& shift) const {
    LaurentPoly r(nvars_, domain_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e + shift, c);
    return r;
  }

  LaurentPoly scaled(const Rational& k) const {
    LaurentPoly r(nvars_, domain_);
    for (const auto& [e, c] : terms_) r.add_term(e, c * k);
    return r;
  }

  /// Same exponents, coefficients reinterpreted in `target` (e.g. Z -> F_p).
  LaurentPoly in_domain(Domain target) const {
    LaurentPoly r(nvars_, target);
    for (const auto& [e, c] : terms_) r.add_term(e, c);
    return r;
  }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.nvars_ == b.nvars_ && a.domain_ == b.domain_ && a.terms_ == b.terms_;
  }

  friend bool operator<(const LaurentPoly& a, const LaurentPoly& b) {
    return std::lexicographical_compare(a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end());
  }

private:
  std::size_t nvars_ = 0;
  Domain domain_{};
  TermMap terms_;
};

namespace detail {
inline void check_compatible(const LaurentPoly& f, const LaurentPoly& g) {
  if (f.nvars() != g.nvars())
    throw DomainError("variable count mismatch: " + std::to_string(f.nvars()) + " vs " + std::to_string(g.nvars()));
  if (!(f.domain() == g.domain()))
    throw DomainError("coefficient domain mismatch: " + f.domain().name() + " vs " + g.domain().name());
}
}  // namespace detail

inline LaurentPoly add(const LaurentPoly& f, const LaurentPoly& g) {
  detail::check_compatible(f, g);
  LaurentPoly r = f;
  for (const auto& [e, c] : g) r.add_term(e, c);
  return r;
}

inline LaurentPoly sub(const LaurentPoly& f, const LaurentPoly& g) {
  detail::check_compatible(f, g);
  LaurentPoly r = f;
  for (const auto& [e, c] : g) r.add_term(e, -c);
  return r;
}

inline LaurentPoly mul(const LaurentPoly& f, const LaurentPoly& g) {
  detail::check_compatible(f, g);
  LaurentPoly r(f.nvars(), f.domain());
  for (const auto& [e1, c1] : f)
    for (const auto& [e2, c2] : g) r.add_term(e1 + e2, c1 * c2);
  return r;
}

inline LaurentPoly operator+(const LaurentPoly& f, const LaurentPoly& g) { return add(f, g); }
inline LaurentPoly operator-(const LaurentPoly& f, const LaurentPoly& g) { return sub(f, g); }
inline LaurentPoly operator*(const LaurentPoly& f, const LaurentPoly& g) { return mul(f, g); }
inline LaurentPoly operator-(const LaurentPoly& f) { return f.scaled(-1); }

/// f^k for k >= 0 by repeated squaring.
inline LaurentPoly power(const LaurentPoly& f, unsigned long k) {
  LaurentPoly result = LaurentPoly::one(f.nvars(), f.domain());
  LaurentPoly base = f;
  while (k) {
    if (k & 1) result = mul(result, base);
    k >>= 1;
    if (k) base = mul(base, base);
  }
  return result;
}

/// f^(p^k) over F_p, computed termwise: sum c^(p^k) u^(p^k m).
inline LaurentPoly frobenius_pow(const LaurentPoly& f, unsigned long k) {
  if (!f.domain().is_prime_field()) throw DomainError("frobenius_pow needs a prime-field polynomial");
  const std::uint64_t p = f.domain().p;
  Rational q = pow(Integer(static_cast<unsigned long>(p)), k);
  LaurentPoly r(f.nvars(), f.domain());
  for (const auto& [e, c] : f) {
    std::uint64_t v = c.get_num().get_ui();
    for (unsigned long i = 0; i < k; ++i) v = mod_pow(v, p, p);
    r.add_term(e.scaled(q), Rational(Integer(static_cast<unsigned long>(v))));
  }
  return r;
}

/// Replaces every exponent vector m by n*m.
inline LaurentPoly dilate(const LaurentPoly& f, const Rational& n) {
  if (n == 0) throw DomainError("dilation factor must be nonzero");
  LaurentPoly r(f.nvars(), f.domain());
  for (const auto& [e, c] : f) r.add_term(e.scaled(n), c);
  return r;
}

// ---------------------------------------------------------------------------
// Text form: `c*u1^a/b*u2^c/d + ...`

inline std::string to_string(const LaurentPoly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : f) {
    Rational mag = abs(c);
    bool negative = c < 0;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::vector<std::string> factors;
    if (mag != 1 || e.is_zero()) factors.push_back(to_string(mag));
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      std::string v = "u" + std::to_string(i + 1);
      if (e[i] != 1) v += "^" + to_string(e[i]);
      factors.push_back(v);
    }
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) out += "*";
      out += factors[i];
    }
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const LaurentPoly& f) { return os << to_string(f); }

namespace detail {

class PolyParser {
public:
  PolyParser(std::string_view text, std::size_t nvars, Domain domain)
      : s_(text), nvars_(nvars), domain_(domain) {}

  LaurentPoly parse() {
    LaurentPoly result(nvars_, domain_);
    skip_ws();
    if (pos_ == s_.size()) fail("empty polynomial");
    bool first = true;
    while (true) {
      skip_ws();
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
        skip_ws();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      auto [e, c] = parse_term();
      result.add_term(e, c * sign);
      skip_ws();
      if (pos_ == s_.size()) break;
    }
    return result;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'", pos_);
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool is_digit() const { return std::isdigit(static_cast<unsigned char>(peek())) != 0; }

  Integer parse_digits() {
    std::size_t b = pos_;
    while (is_digit()) ++pos_;
    if (b == pos_) fail("expected digits");
    return Integer(std::string(s_.substr(b, pos_ - b)), 10);
  }

  Rational parse_unsigned_fraction() {
    Integer num = parse_digits();
    Integer den = 1;
    if (peek() == '/') {
      ++pos_;
      den = parse_digits();
      if (den == 0) fail("zero denominator");
    }
    return make_rational(num, den);
  }

  Rational parse_exponent() {
    bool paren = false;
    if (peek() == '(') {
      paren = true;
      ++pos_;
    }
    int sign = 1;
    if (peek() == '-' || peek() == '+') {
      sign = peek() == '-' ? -1 : 1;
      ++pos_;
    }
    if (!is_digit()) fail("malformed exponent");
    Rational q = parse_unsigned_fraction() * sign;
    if (paren) {
      if (peek() != ')') fail("expected ')'");
      ++pos_;
    }
    return q;
  }

  std::pair<ExponentVector, Rational> parse_term() {
    ExponentVector e(nvars_);
    Rational c = 1;
    while (true) {
      skip_ws();
      if (is_digit()) {
        c *= parse_unsigned_fraction();
      } else if (peek() == 'u') {
        ++pos_;
        std::size_t at = pos_;
        Integer idx = parse_digits();
        if (idx < 1 || idx > nvars_) {
          pos_ = at;
          fail("variable u" + idx.get_str() + " outside declared range u1..u" + std::to_string(nvars_));
        }
        Rational ex = 1;
        skip_ws();
        if (peek() == '^') {
          ++pos_;
          skip_ws();
          ex = parse_exponent();
        }
        e[idx.get_ui() - 1] += ex;
      } else {
        fail("expected coefficient or variable");
      }
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        continue;
      }
      break;
    }
    return {e, c};
  }

  std::string_view s_;
  std::size_t nvars_;
  Domain domain_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses the text form. Variables are u1..u<nvars>.
inline LaurentPoly parse_laurent(std::string_view text, std::size_t nvars, Domain domain) {
  return detail::PolyParser(text, nvars, domain).parse();
}

}  // namespace algmix
