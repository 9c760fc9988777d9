#pragma once

// Ideals of Laurent polynomial rings F_p[u_1^{±1},...,u_d^{±1}] and exact
// membership. Two engines:
//
//  * Groebner: the Laurent ideal is replaced by the polynomial ideal
//    <generators, t*u_1*...*u_d - 1>; a block order eliminating t gives the
//    saturation of the generators by u_1*...*u_d, whose reduced basis
//    decides membership of any denominator-cleared Laurent polynomial.
//  * Substitution: the hint u_j = g_j(earlier variables) turns the quotient
//    into a localization of a polynomial ring in the unsolved variables, where
//    zero-testing is exact after clearing the (monomial x power-of-g_j)
//    denominators.

#include <algmix/groebner.hpp>
#include <algmix/ring.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace algmix {

enum class MembershipEngine { Groebner, Substitution };

/// u_j -> polynomial in u_1..u_{j-1} (0-based variable indices).
using SubstitutionHint = std::map<std::size_t, LaurentPoly>;

class EngineUnavailable : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IdealPresentation {
public:
  /// `characteristic` is 0 or a prime; in characteristic p the generators are
  /// reduced mod p and p itself is an implicit generator.
  IdealPresentation(std::size_t d, std::uint64_t characteristic, std::vector<LaurentPoly> generators,
                    std::optional<SubstitutionHint> hint = std::nullopt)
      : d_(d), characteristic_(characteristic), hint_(std::move(hint)), cache_(std::make_shared<Cache>()) {
    domain_ = characteristic ? Domain::prime_field(characteristic) : Domain::rationals();
    for (auto& g : generators) {
      if (g.nvars() != d) throw DomainError("generator has " + std::to_string(g.nvars()) + " variables, ideal has " + std::to_string(d));
      if (!g.has_integral_exponents()) throw DomainError("ideal generators must have integer exponents: " + to_string(g));
      LaurentPoly r = g.in_domain(domain_);
      if (!r.is_zero()) generators_.push_back(std::move(r));
    }
    if (hint_) check_hint_shape();
  }

  std::size_t d() const { return d_; }
  std::uint64_t characteristic() const { return characteristic_; }
  const Domain& domain() const { return domain_; }
  const std::vector<LaurentPoly>& generators() const { return generators_; }
  const std::optional<SubstitutionHint>& hint() const { return hint_; }

  MembershipEngine preferred_engine() const {
    return hint_ ? MembershipEngine::Substitution : MembershipEngine::Groebner;
  }

  /// Reduced Groebner basis of the saturated ideal, as Laurent polynomials
  /// with nonnegative exponents. {1} for the unit ideal.
  const std::vector<LaurentPoly>& groebner_basis() const {
    ensure_basis();
    return cache_->laurent_basis;
  }

  bool contains(const LaurentPoly& f) const { return contains(f, preferred_engine()); }

  bool contains(const LaurentPoly& f, MembershipEngine engine) const {
    check_element(f);
    LaurentPoly g = f.in_domain(domain_);
    if (g.is_zero()) return true;
    if (engine == MembershipEngine::Substitution) return substitution_contains(g);
    return normal_form_poly(to_engine(g.translated(-g.min_exponents()))).empty();
  }

  /// Normal form of a polynomial (nonnegative integer exponents) against the
  /// saturated basis. Zero iff the polynomial lies in the ideal.
  LaurentPoly normal_form(const LaurentPoly& f) const {
    check_element(f);
    LaurentPoly g = f.in_domain(domain_);
    for (const auto& [e, c] : g)
      for (const auto& q : e)
        if (q < 0) throw DomainError("normal_form expects nonnegative exponents; use contains for Laurent input");
    return from_engine(normal_form_poly(to_engine(g)));
  }

  /// True iff 1 is in the ideal (the quotient is the zero module).
  bool constant_in_ideal() const {
    if (characteristic_ == 0 && !hint_) throw EngineUnavailable("no membership engine for characteristic 0 without a substitution hint");
    return contains(LaurentPoly::one(d_, domain_));
  }

  /// Smallest k in 1..kmax with u_var^k - 1 in the ideal.
  std::optional<unsigned> find_torsion_unit(unsigned kmax, std::size_t var = 0) const {
    if (var >= d_) throw DomainError("designated variable out of range");
    for (unsigned k = 1; k <= kmax; ++k) {
      ExponentVector e(d_);
      e[var] = k;
      LaurentPoly f = LaurentPoly::monomial(domain_, e) - LaurentPoly::one(d_, domain_);
      if (contains(f)) return k;
    }
    return std::nullopt;
  }

  /// The ideal generated by the dilated generators, i.e. the image of this
  /// ideal under u_i -> u_i^n. Used for rational-exponent elements at level n.
  /// A substitution hint does not survive dilation (u_j^n = g_j(u^n) no longer
  /// solves for u_j), so the result uses the Groebner engine.
  IdealPresentation dilated(const Integer& n) const {
    std::vector<LaurentPoly> gens;
    for (const auto& g : generators_) gens.push_back(dilate(g, n));
    return IdealPresentation(d_, characteristic_, std::move(gens));
  }

  /// Checks that the substitution hint generates the same ideal: every
  /// generator vanishes under the substitution (checked at construction) and
  /// every u_j - g_j lies in the ideal (checked here with the Groebner engine).
  bool hint_consistent() const {
    if (!hint_) return true;
    for (const auto& [j, g] : *hint_) {
      LaurentPoly rel = LaurentPoly::variable(d_, domain_, j) - g;
      if (!contains(rel, MembershipEngine::Groebner)) return false;
    }
    return true;
  }

  // --- low-level access used by the search engines -----------------------

  const gb::Ring& engine_ring() const {
    ensure_basis();
    return *cache_->ring;
  }
  const std::vector<gb::Poly>& engine_basis() const {
    ensure_basis();
    return cache_->basis;
  }
  gb::Poly normal_form_poly(const gb::Poly& f) const {
    ensure_basis();
    return cache_->ring->reduce(f, cache_->basis);
  }

  /// Nonnegative-exponent polynomial over F_p into engine form (d variables).
  gb::Poly to_engine(const LaurentPoly& f) const {
    std::vector<gb::Term> terms;
    for (const auto& [e, c] : f) {
      gb::Monomial m(d_);
      for (std::size_t i = 0; i < d_; ++i) {
        if (!is_integral(e[i]) || e[i] < 0) throw DomainError("engine conversion needs nonnegative integer exponents");
        m[i] = static_cast<std::uint32_t>(e[i].get_num().get_ui());
      }
      terms.push_back({std::move(m), c.get_num().get_ui()});
    }
    return engine_ring().normalize(std::move(terms));
  }

  LaurentPoly from_engine(const gb::Poly& f) const {
    LaurentPoly r(d_, domain_);
    for (const auto& t : f) {
      ExponentVector e(d_);
      for (std::size_t i = 0; i < d_; ++i) e[i] = static_cast<unsigned long>(t.mono[i]);
      r.add_term(e, Rational(static_cast<unsigned long>(t.coeff)));
    }
    return r;
  }

private:
  struct Cache {
    std::once_flag once;
    std::unique_ptr<gb::Ring> ring;  // d variables, grlex
    std::vector<gb::Poly> basis;
    std::vector<LaurentPoly> laurent_basis;
  };

  void check_element(const LaurentPoly& f) const {
    if (f.nvars() != d_) throw DomainError("element has " + std::to_string(f.nvars()) + " variables, ideal has " + std::to_string(d_));
    if (!f.has_integral_exponents()) throw DomainError("membership needs integer exponents; level-embed first");
    if (f.domain().is_prime_field() && f.domain().p != characteristic_)
      throw DomainError("element characteristic differs from the ideal's");
  }

  void ensure_basis() const {
    if (characteristic_ == 0) throw EngineUnavailable("Groebner engine supports characteristic p only");
    std::call_once(cache_->once, [this] { compute_basis(); });
  }

  void compute_basis() const {
    const std::size_t n = d_ + 1;  // u_1..u_d, t
    gb::Ring with_t(characteristic_, gb::Order(n, 1));
    std::vector<gb::Poly> gens;
    for (const auto& g : generators_) {
      LaurentPoly cleared = g.translated(-g.min_exponents());
      std::vector<gb::Term> terms;
      for (const auto& [e, c] : cleared) {
        gb::Monomial m(n, 0);
        for (std::size_t i = 0; i < d_; ++i) m[i] = static_cast<std::uint32_t>(e[i].get_num().get_ui());
        terms.push_back({std::move(m), c.get_num().get_ui()});
      }
      gens.push_back(with_t.normalize(std::move(terms)));
    }
    {
      gb::Monomial tm(n, 1);  // t*u_1*...*u_d
      gb::Monomial one(n, 0);
      gens.push_back(with_t.normalize({{tm, 1}, {one, characteristic_ - 1}}));
    }
    auto full = with_t.buchberger(gens);

    cache_->ring = std::make_unique<gb::Ring>(characteristic_, gb::Order(d_, 0));
    std::vector<gb::Poly> eliminated;
    for (const auto& f : full) {
      if (std::any_of(f.begin(), f.end(), [&](const gb::Term& t) { return t.mono[d_] != 0; })) continue;
      std::vector<gb::Term> terms;
      for (const auto& t : f) terms.push_back({gb::Monomial(t.mono.begin(), t.mono.begin() + d_), t.coeff});
      eliminated.push_back(cache_->ring->normalize(std::move(terms)));
    }
    cache_->basis = cache_->ring->autoreduce(std::move(eliminated));
    for (const auto& f : cache_->basis) cache_->laurent_basis.push_back(from_engine(f));
  }

  void check_hint_shape() const {
    for (const auto& [j, g] : *hint_) {
      if (j >= d_) throw DomainError("substitution hint solves a variable outside u1..u" + std::to_string(d_));
      if (g.nvars() != d_) throw DomainError("substitution polynomial has the wrong variable count");
      if (!g.has_integral_exponents()) throw DomainError("substitution polynomial must have integer exponents");
      for (const auto& [e, c] : g)
        for (std::size_t i = j; i < d_; ++i)
          if (e[i] != 0)
            throw DomainError("substitution for u" + std::to_string(j + 1) + " must use strictly earlier variables only");
    }
    for (const auto& g : generators_)
      if (!substitution_contains(g))
        throw DomainError("generator " + to_string(g) + " does not vanish under the substitution hint");
  }

  /// g_j with all solved variables replaced, memoized per call.
  LaurentPoly substituted(std::size_t j, std::map<std::size_t, LaurentPoly>& memo) const {
    if (auto it = memo.find(j); it != memo.end()) return it->second;
    const LaurentPoly& g = hint_->at(j).in_domain(domain_);
    LaurentPoly r = substitute_all(g, memo);
    memo.emplace(j, r);
    return r;
  }

  /// Numerator of f after substitution, with denominators prod g_j^{E_j} cleared.
  /// Returns nullopt if some g_j substitutes to zero (then u_j = 0 is forced,
  /// which makes the Laurent quotient trivial).
  std::optional<LaurentPoly> cleared_numerator(const LaurentPoly& f, std::map<std::size_t, LaurentPoly>& memo) const {
    std::map<std::size_t, Integer> lift;  // E_j
    for (const auto& [j, g] : *hint_) {
      Integer e = 0;
      for (const auto& [m, c] : f)
        if (m[j] < 0) e = std::max(e, Integer(-m[j].get_num()));
      lift[j] = e;
    }
    std::map<std::size_t, LaurentPoly> gs;
    for (const auto& [j, g] : *hint_) {
      gs[j] = substituted(j, memo);
      if (gs[j].is_zero()) return std::nullopt;
    }
    std::map<std::pair<std::size_t, unsigned long>, LaurentPoly> powers;
    auto power_of = [&](std::size_t j, unsigned long k) -> const LaurentPoly& {
      auto key = std::make_pair(j, k);
      auto it = powers.find(key);
      if (it == powers.end()) it = powers.emplace(key, power(gs[j], k)).first;
      return it->second;
    };
    LaurentPoly num(d_, domain_);
    for (const auto& [m, c] : f) {
      ExponentVector free_part = m;
      LaurentPoly term = LaurentPoly::constant(d_, domain_, c);
      for (const auto& [j, g] : *hint_) {
        free_part[j] = 0;
        Integer k = m[j].get_num() + lift[j];
        if (k != 0) term = mul(term, power_of(j, k.get_ui()));
      }
      num = add(num, term.translated(free_part));
    }
    return num;
  }

  LaurentPoly substitute_all(const LaurentPoly& f, std::map<std::size_t, LaurentPoly>& memo) const {
    // Only used on hint polynomials, whose solved variables appear with
    // nonnegative exponents after earlier substitutions are expanded.
    LaurentPoly r(d_, domain_);
    for (const auto& [m, c] : f) {
      ExponentVector free_part = m;
      LaurentPoly term = LaurentPoly::constant(d_, domain_, c);
      for (const auto& [j, g] : *hint_) {
        if (m[j] == 0) continue;
        if (m[j] < 0) throw DomainError("substitution polynomial uses a solved variable with a negative exponent");
        free_part[j] = 0;
        term = mul(term, power(substituted(j, memo), m[j].get_num().get_ui()));
      }
      r = add(r, term.translated(free_part));
    }
    return r;
  }

  bool substitution_contains(const LaurentPoly& f) const {
    if (!hint_) throw EngineUnavailable("no substitution hint for this ideal");
    std::map<std::size_t, LaurentPoly> memo;
    auto num = cleared_numerator(f.in_domain(domain_), memo);
    return !num || num->is_zero();
  }

  std::size_t d_;
  std::uint64_t characteristic_;
  Domain domain_;
  std::vector<LaurentPoly> generators_;
  std::optional<SubstitutionHint> hint_;
  std::shared_ptr<Cache> cache_;
};

}  // namespace algmix
