#pragma once

// Number fields Q[x]/(m(x)) with elements in power-basis coordinates, and
// evaluation of integer-exponent Laurent polynomials at field units.

#include <algmix/numeric.hpp>
#include <algmix/ring.hpp>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace algmix {

namespace upoly {

// Dense univariate polynomials over Q, lowest degree first, no trailing zeros.
using Dense = std::vector<Rational>;

inline void trim(Dense& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Dense mul(const Dense& a, const Dense& b) {
  if (a.empty() || b.empty()) return {};
  Dense r(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

inline Dense sub(Dense a, const Dense& b) {
  if (a.size() < b.size()) a.resize(b.size(), Rational(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

/// Quotient and remainder of a by nonzero b.
inline std::pair<Dense, Dense> divmod(Dense a, const Dense& b) {
  trim(a);
  Dense q;
  if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, Rational(0));
  const Rational& lead = b.back();
  while (!a.empty() && a.size() >= b.size()) {
    std::size_t shift = a.size() - b.size();
    Rational c = a.back() / lead;
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
    trim(a);
  }
  trim(q);
  return {q, a};
}

inline Rational eval(const Dense& a, const Rational& x) {
  Rational r = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) r = r * x + *it;
  return r;
}

}  // namespace upoly

/// Power-basis coordinates of an element of Q[x]/(m).
struct FieldElement {
  std::vector<Rational> coeffs;

  bool is_zero() const {
    for (const auto& c : coeffs)
      if (c != 0) return false;
    return true;
  }
  friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

inline std::string to_string(const FieldElement& a) {
  std::string s = "[";
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (i) s += ", ";
    s += to_string(a.coeffs[i]);
  }
  return s + "]";
}

class NumberField {
public:
  /// `modulus` lists coefficients lowest degree first and must be monic.
  explicit NumberField(std::vector<Rational> modulus) : modulus_(std::move(modulus)) {
    upoly::trim(modulus_);
    if (modulus_.size() < 2) throw DomainError("number field modulus must have degree >= 1");
    if (modulus_.back() != 1) throw DomainError("number field modulus must be monic");
    if (degree() > 1 && has_rational_root()) throw DomainError("number field modulus has a rational root");
  }

  /// Q itself, presented as Q[x]/(x).
  static NumberField rationals() { return NumberField({Rational(0), Rational(1)}); }

  std::size_t degree() const { return modulus_.size() - 1; }
  const std::vector<Rational>& modulus() const { return modulus_; }

  FieldElement zero() const { return {std::vector<Rational>(degree(), Rational(0))}; }
  FieldElement one() const { return from_rational(1); }
  FieldElement from_rational(const Rational& q) const {
    FieldElement a = zero();
    a.coeffs[0] = q;
    return a;
  }
  /// The class of x.
  FieldElement generator() const {
    return reduce({Rational(0), Rational(1)});
  }

  FieldElement reduce(upoly::Dense a) const {
    upoly::trim(a);
    if (a.size() > degree()) a = upoly::divmod(std::move(a), modulus_).second;
    a.resize(degree(), Rational(0));
    return {std::move(a)};
  }

  void check(const FieldElement& a) const {
    if (a.coeffs.size() != degree())
      throw DomainError("field element has " + std::to_string(a.coeffs.size()) + " coordinates, field degree is " +
                        std::to_string(degree()));
  }

  friend bool operator==(const NumberField&, const NumberField&) = default;

private:
  bool has_rational_root() const {
    // Rational root theorem on the denominator-cleared modulus.
    Integer l = 1;
    for (const auto& c : modulus_) l = lcm(l, c.get_den());
    std::vector<Integer> z;
    for (const auto& c : modulus_) z.push_back(Integer(c * l));
    if (z.front() == 0) return true;
    const Integer limit("1000000000000");
    Integer a0 = abs(z.front()), an = abs(z.back());
    if (a0 > limit || an > limit) return false;  // screen skipped for huge constants
    auto divisors = [](const Integer& n) {
      std::vector<Integer> out;
      for (Integer k = 1; k * k <= n; ++k)
        if (n % k == 0) {
          out.push_back(k);
          if (k * k != n) out.push_back(n / k);
        }
      return out;
    };
    for (const auto& num : divisors(a0))
      for (const auto& den : divisors(an))
        for (int sign : {1, -1})
          if (upoly::eval(modulus_, make_rational(num * sign, den)) == 0) return true;
    return false;
  }

  std::vector<Rational> modulus_;
};

inline FieldElement field_add(const NumberField& K, const FieldElement& a, const FieldElement& b) {
  K.check(a);
  K.check(b);
  FieldElement r = a;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] += b.coeffs[i];
  return r;
}

inline FieldElement field_sub(const NumberField& K, const FieldElement& a, const FieldElement& b) {
  K.check(a);
  K.check(b);
  FieldElement r = a;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] -= b.coeffs[i];
  return r;
}

inline FieldElement field_scale(const NumberField& K, const FieldElement& a, const Rational& q) {
  K.check(a);
  FieldElement r = a;
  for (auto& c : r.coeffs) c *= q;
  return r;
}

inline FieldElement field_mul(const NumberField& K, const FieldElement& a, const FieldElement& b) {
  K.check(a);
  K.check(b);
  return K.reduce(upoly::mul(a.coeffs, b.coeffs));
}

/// Inverse via extended Euclid of the lift of `a` against the modulus.
inline FieldElement field_inv(const NumberField& K, const FieldElement& a) {
  K.check(a);
  if (a.is_zero()) throw DomainError("zero has no inverse");
  upoly::Dense r0 = K.modulus(), r1 = a.coeffs;
  upoly::trim(r1);
  upoly::Dense s0, s1{Rational(1)};  // coefficient of `a` in r0, r1
  while (r1.size() > 1) {
    auto [q, r] = upoly::divmod(r0, r1);
    upoly::Dense s = upoly::sub(s0, upoly::mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (r1.empty())
    throw DomainError("element is not invertible: the modulus is reducible, so this is not a field presentation");
  Rational c = r1[0];
  for (auto& x : s1) x /= c;
  return K.reduce(s1);
}

inline FieldElement field_pow(const NumberField& K, const FieldElement& a, const Integer& e) {
  if (e < 0) return field_pow(K, field_inv(K, a), -e);
  FieldElement result = K.one(), base = a;
  Integer k = e;
  while (k > 0) {
    if (mpz_odd_p(k.get_mpz_t())) result = field_mul(K, result, base);
    k >>= 1;
    if (k > 0) base = field_mul(K, base, base);
  }
  return result;
}

/// Sum of c_m * prod assignment_i^{m_i}. Exponents must be integers.
inline FieldElement evaluate(const NumberField& K, const std::vector<FieldElement>& assignment, const LaurentPoly& f) {
  if (assignment.size() != f.nvars())
    throw DomainError("assignment covers " + std::to_string(assignment.size()) + " variables, polynomial has " +
                      std::to_string(f.nvars()));
  if (f.domain().is_prime_field()) throw DomainError("cannot evaluate a characteristic-p polynomial in a number field");
  for (const auto& a : assignment) {
    K.check(a);
    if (a.is_zero()) throw DomainError("assignment contains a non-invertible (zero) element");
  }
  std::vector<std::map<Integer, FieldElement>> cache(assignment.size());
  auto power_of = [&](std::size_t i, const Integer& e) -> const FieldElement& {
    auto it = cache[i].find(e);
    if (it == cache[i].end()) it = cache[i].emplace(e, field_pow(K, assignment[i], e)).first;
    return it->second;
  };
  FieldElement sum = K.zero();
  for (const auto& [m, c] : f) {
    if (!m.is_integral())
      throw DomainError("fractional exponent " + to_string(m) + " remains; level-embed the polynomial first");
    FieldElement term = K.from_rational(c);
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i] != 0) term = field_mul(K, term, power_of(i, m[i].get_num()));
    sum = field_add(K, sum, term);
  }
  return sum;
}

}  // namespace algmix
