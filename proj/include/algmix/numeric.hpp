#pragma once

// Exact scalar helpers shared by every module: arbitrary-precision integers
// and rationals (GMP), modular arithmetic for small primes, and the "p/q"
// text form used in all serialized documents.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace algmix {

using Integer = mpz_class;
using Rational = mpq_class;

/// Raised for malformed textual input. `offset` is a 0-based character
/// position inside the string that was being parsed.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

/// Domain/precondition violations (mismatched dimensions, zero divisors, ...).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw DomainError("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw DomainError("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_integral(const Rational& q) { return q.get_den() == 1; }

/// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline std::string to_string(const Integer& z) { return z.get_str(); }

/// Parses "[-]digits[/digits]" with no embedded whitespace.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&](std::size_t at) -> Rational {
    throw ParseError("malformed rational '" + std::string(text) + "'", at);
  };
  if (text.empty()) return fail(0);
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') ++i;
  std::size_t num_begin = i;
  while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
  if (i == num_begin) return fail(i);
  Integer num(std::string(text.substr(num_begin, i - num_begin)), 10);
  if (text[0] == '-') num = -num;
  Integer den = 1;
  if (i < text.size()) {
    if (text[i] != '/') return fail(i);
    ++i;
    std::size_t den_begin = i;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
    if (i == den_begin || i != text.size()) return fail(i);
    den = Integer(std::string(text.substr(den_begin)), 10);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'", den_begin);
  }
  return make_rational(num, den);
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer pow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rational pow(const Rational& base, long e) {
  if (e < 0) {
    if (base == 0) throw DomainError("zero to a negative power");
    Rational inv = 1 / base;
    return pow(inv, -e);
  }
  Rational r(pow(Integer(base.get_num()), static_cast<unsigned long>(e)),
             pow(Integer(base.get_den()), static_cast<unsigned long>(e)));
  return r;
}

/// max(|num|, den); the multiplicative height of a rational.
inline Integer height(const Rational& q) {
  Integer n = abs(q.get_num());
  return n > q.get_den() ? n : Integer(q.get_den());
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  Integer z(std::to_string(n));
  return mpz_probab_prime_p(z.get_mpz_t(), 40) > 0;
}

// Modular arithmetic for p < 2^32.
inline std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return (a * b) % p;
}

inline std::uint64_t mod_pow(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mod_mul(r, a, p);
    a = mod_mul(a, a, p);
    e >>= 1;
  }
  return r;
}

inline std::uint64_t mod_inv(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) throw DomainError("zero has no inverse mod p");
  return mod_pow(a, p - 2, p);
}

/// Reduces an exact rational into F_p; the denominator must be a unit.
inline std::uint64_t reduce_mod(const Rational& q, std::uint64_t p) {
  Integer pz(std::to_string(p));
  Integer n = q.get_num() % pz;
  if (n < 0) n += pz;
  Integer d = q.get_den() % pz;
  if (d == 0) throw DomainError("denominator divisible by the characteristic");
  std::uint64_t nn = n.get_ui(), dd = d.get_ui();
  return mod_mul(nn, mod_inv(dd, p), p);
}

/// First `count` primes, ascending.
inline std::vector<std::uint64_t> first_primes(std::size_t count) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; out.size() < count; ++n)
    if (is_prime(n)) out.push_back(n);
  return out;
}

}  // namespace algmix
