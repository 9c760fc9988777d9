#pragma once

// Algebraic systems: an acting group (Z^d, Q^d or Q^x_{>0} on finitely many
// prime coordinates) together with a cyclic module presentation. A character
// tuple (gamma_s, a_s) has correlation 1 exactly when sum_s gamma_s . a_s = 0
// in the module; this is the Haar integral of the product of the shifted
// characters.

#include <algmix/ideals.hpp>
#include <algmix/numfield.hpp>
#include <algmix/ring.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace algmix {

enum class GroupKind { FreeAbelian, RationalVector, PositiveRationals };

/// Group elements are exponent vectors: integer vectors for Z^d, reduced
/// fractions for Q^d, and integer exponents over the listed primes for
/// Q^x_{>0} (the element 2^a 3^b ... <-> (a, b, ...)).
using GroupElement = ExponentVector;

class GroupDescriptor {
public:
  static GroupDescriptor free_abelian(std::size_t d) { return GroupDescriptor(GroupKind::FreeAbelian, d, {}); }
  static GroupDescriptor rational_vector(std::size_t d) { return GroupDescriptor(GroupKind::RationalVector, d, {}); }
  static GroupDescriptor positive_rationals(std::vector<std::uint64_t> primes) {
    for (std::size_t i = 0; i < primes.size(); ++i) {
      if (!is_prime(primes[i])) throw DomainError(std::to_string(primes[i]) + " is not prime");
      for (std::size_t j = 0; j < i; ++j)
        if (primes[j] == primes[i]) throw DomainError("repeated prime coordinate " + std::to_string(primes[i]));
    }
    std::size_t d = primes.size();
    return GroupDescriptor(GroupKind::PositiveRationals, d, std::move(primes));
  }

  GroupKind kind() const { return kind_; }
  std::size_t rank() const { return d_; }
  const std::vector<std::uint64_t>& primes() const { return primes_; }

  std::string kind_name() const {
    switch (kind_) {
      case GroupKind::FreeAbelian: return "FreeAbelian";
      case GroupKind::RationalVector: return "RationalVector";
      case GroupKind::PositiveRationals: return "PositiveRationals";
    }
    return "?";
  }

  void validate(const GroupElement& g) const {
    if (g.size() != d_)
      throw DomainError("group element " + to_string(g) + " has length " + std::to_string(g.size()) + ", group rank is " +
                        std::to_string(d_));
    if (kind_ != GroupKind::RationalVector && !g.is_integral())
      throw DomainError("group element " + to_string(g) + " must have integer coordinates");
  }

  GroupElement identity() const { return GroupElement(d_); }

  /// Q^x_{>0}: factor a positive rational over the listed primes.
  GroupElement from_rational(const Rational& q) const {
    if (kind_ != GroupKind::PositiveRationals) throw DomainError("from_rational needs a PositiveRationals group");
    if (q <= 0) throw DomainError("group elements of Q^x_{>0} must be positive");
    Integer num = q.get_num(), den = q.get_den();
    GroupElement e(d_);
    for (std::size_t i = 0; i < d_; ++i) {
      Integer p(static_cast<unsigned long>(primes_[i]));
      long k = 0;
      while (num % p == 0) {
        num /= p;
        ++k;
      }
      while (den % p == 0) {
        den /= p;
        --k;
      }
      e[i] = k;
    }
    if (num != 1 || den != 1)
      throw DomainError(to_string(q) + " has prime factors outside the declared prime coordinates");
    return e;
  }

  Rational to_rational(const GroupElement& g) const {
    if (kind_ != GroupKind::PositiveRationals) throw DomainError("to_rational needs a PositiveRationals group");
    validate(g);
    Rational r = 1;
    for (std::size_t i = 0; i < d_; ++i)
      if (g[i] != 0) r *= pow(Rational(static_cast<unsigned long>(primes_[i])), g[i].get_num().get_si());
    return r;
  }

  /// Size of an element, used to check that differences leave finite sets:
  /// sup-norm for Z^d and Q^d, height of the rational for Q^x_{>0}.
  Rational norm(const GroupElement& g) const {
    if (kind_ == GroupKind::PositiveRationals) return Rational(height(to_rational(g)));
    return g.max_abs();
  }

  std::string format(const GroupElement& g) const {
    return kind_ == GroupKind::PositiveRationals ? to_string(to_rational(g)) : to_string(g);
  }

  friend bool operator==(const GroupDescriptor&, const GroupDescriptor&) = default;

private:
  GroupDescriptor(GroupKind kind, std::size_t d, std::vector<std::uint64_t> primes)
      : kind_(kind), d_(d), primes_(std::move(primes)) {}

  GroupKind kind_;
  std::size_t d_;
  std::vector<std::uint64_t> primes_;
};

struct CharPModule {
  IdealPresentation ideal;
};

/// R_Gamma/P embedded in K = Q[x]/(m): u_i^{1/level} -> assignment[i].
struct EvaluationModule {
  NumberField field;
  std::vector<FieldElement> assignment;
  Integer level = 1;
};

/// The module Q on which gamma in Q^x_{>0} acts by multiplication.
struct RationalDualModule {};

using ModuleSpec = std::variant<CharPModule, EvaluationModule, RationalDualModule>;

/// Module element: a Laurent polynomial residue (CharP), a field element
/// (Evaluation) or a rational number (RationalDual).
using ModuleElement = std::variant<LaurentPoly, FieldElement, Rational>;

inline std::string to_string(const ModuleElement& a) {
  return std::visit([](const auto& x) { return to_string(x); }, a);
}

/// Shape entry paired with its module coefficient.
struct Character {
  GroupElement shift;
  ModuleElement coefficient;
};

struct CharacterTuple {
  std::vector<Character> pairs;
};

struct LevelEmbedding {
  Integer level;                      // L
  std::vector<GroupElement> shape;    // L * input, integral
};

/// Smallest L making every entry integral, and the scaled shape.
inline LevelEmbedding level_embed(const std::vector<GroupElement>& shape) {
  if (shape.empty()) throw DomainError("level_embed needs a nonempty shape");
  Integer L = 1;
  for (const auto& g : shape) L = lcm(L, g.denominator_lcm());
  LevelEmbedding out{L, {}};
  for (const auto& g : shape) out.shape.push_back(g.scaled(Rational(L)));
  return out;
}

class AlgebraicSystem {
public:
  AlgebraicSystem(GroupDescriptor group, ModuleSpec module)
      : group_(std::move(group)), module_(std::move(module)), dilated_(std::make_shared<DilatedCache>()) {
    if (auto* m = std::get_if<CharPModule>(&module_)) {
      if (m->ideal.characteristic() == 0) throw DomainError("CharP module requires a prime characteristic");
      if (m->ideal.d() != group_.rank()) throw DomainError("ideal variable count differs from group rank");
    } else if (auto* m = std::get_if<EvaluationModule>(&module_)) {
      if (m->assignment.size() != group_.rank()) throw DomainError("assignment size differs from group rank");
      if (m->level < 1) throw DomainError("evaluation level must be positive");
      if (group_.kind() != GroupKind::RationalVector && m->level != 1)
        throw DomainError("evaluation level > 1 requires a RationalVector group");
      for (const auto& a : m->assignment) {
        m->field.check(a);
        if (a.is_zero()) throw DomainError("evaluation assignment must consist of invertible elements");
      }
    } else {
      if (group_.kind() != GroupKind::PositiveRationals) throw DomainError("RationalDual module needs a PositiveRationals group");
    }
  }

  const GroupDescriptor& group() const { return group_; }
  const ModuleSpec& module() const { return module_; }

  bool is_char_p() const { return std::holds_alternative<CharPModule>(module_); }
  bool is_evaluation() const { return std::holds_alternative<EvaluationModule>(module_); }
  bool is_rational_dual() const { return std::holds_alternative<RationalDualModule>(module_); }

  const IdealPresentation& ideal() const {
    if (!is_char_p()) throw DomainError("system has no characteristic-p ideal");
    return std::get<CharPModule>(module_).ideal;
  }
  const EvaluationModule& evaluation() const {
    if (!is_evaluation()) throw DomainError("system is not an evaluation presentation");
    return std::get<EvaluationModule>(module_);
  }
  std::uint64_t characteristic() const { return is_char_p() ? ideal().characteristic() : 0; }

  std::string module_kind_name() const {
    if (is_char_p()) return "CharP";
    if (is_evaluation()) return "Evaluation";
    return "RationalDual";
  }

  ModuleElement one() const {
    if (is_char_p()) return LaurentPoly::one(group_.rank(), ideal().domain());
    if (is_evaluation()) return evaluation().field.one();
    return Rational(1);
  }

  /// Brings a Laurent polynomial into this module's element type (evaluates
  /// it for Evaluation systems).
  ModuleElement element(const LaurentPoly& f) const {
    if (is_char_p()) return f.in_domain(ideal().domain());
    if (is_evaluation()) {
      LaurentPoly z = f.in_domain(Domain::rationals());
      return action_eval(z);
    }
    if (f.size() > 1 || !f.has_integral_exponents()) throw DomainError("RationalDual elements are rationals");
    if (f.is_zero()) return Rational(0);
    return f.begin()->second * group_.to_rational(f.begin()->first);
  }

  /// gamma . a
  ModuleElement act(const GroupElement& g, const ModuleElement& a) const {
    group_.validate(g);
    if (is_char_p()) {
      const auto& f = std::get<LaurentPoly>(a);
      check_poly(f);
      return f.translated(g);
    }
    if (is_evaluation()) {
      const auto& m = evaluation();
      const auto& x = std::get<FieldElement>(a);
      m.field.check(x);
      return field_mul(m.field, unit_power(g), x);
    }
    return std::get<Rational>(a) * group_.to_rational(g);
  }

  ModuleElement add(const ModuleElement& a, const ModuleElement& b) const {
    if (is_char_p()) return algmix::add(std::get<LaurentPoly>(a), std::get<LaurentPoly>(b));
    if (is_evaluation()) return field_add(evaluation().field, std::get<FieldElement>(a), std::get<FieldElement>(b));
    return std::get<Rational>(a) + std::get<Rational>(b);
  }

  ModuleElement zero() const {
    if (is_char_p()) return LaurentPoly(group_.rank(), ideal().domain());
    if (is_evaluation()) return evaluation().field.zero();
    return Rational(0);
  }

  bool is_zero(const ModuleElement& a) const {
    if (is_char_p()) return poly_in_ideal(std::get<LaurentPoly>(a));
    if (is_evaluation()) return std::get<FieldElement>(a).is_zero();
    return std::get<Rational>(a) == 0;
  }

  /// sum_s gamma_s . a_s == 0 in the module (no validation of the tuple).
  bool sum_vanishes(const std::vector<Character>& pairs) const {
    ModuleElement total = zero();
    for (const auto& c : pairs) total = add(total, act(c.shift, c.coefficient));
    return is_zero(total);
  }

  /// u^g evaluated in the field (Evaluation systems only).
  FieldElement unit_power(const GroupElement& g) const {
    const auto& m = evaluation();
    group_.validate(g);
    FieldElement r = m.field.one();
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] == 0) continue;
      Rational e = g[i] * Rational(m.level);
      if (!is_integral(e))
        throw DomainError("shift " + to_string(g) + " needs a level finer than the presentation's level " + m.level.get_str());
      r = field_mul(m.field, r, field_pow(m.field, m.assignment[i], e.get_num()));
    }
    return r;
  }

  friend bool operator==(const AlgebraicSystem& a, const AlgebraicSystem& b) = delete;

private:
  struct DilatedCache {
    std::mutex mutex;
    std::map<Integer, std::shared_ptr<const IdealPresentation>> ideals;
  };

  void check_poly(const LaurentPoly& f) const {
    if (f.nvars() != group_.rank()) throw DomainError("module element has the wrong number of variables");
  }

  FieldElement action_eval(const LaurentPoly& f) const {
    const auto& m = evaluation();
    FieldElement sum = m.field.zero();
    for (const auto& [e, c] : f) sum = field_add(m.field, sum, field_scale(m.field, unit_power(e), c));
    return sum;
  }

  bool poly_in_ideal(const LaurentPoly& f) const {
    check_poly(f);
    const auto& I = ideal();
    if (f.has_integral_exponents()) return I.contains(f);
    // Level embedding: membership in I R_{Gamma} is decided inside the
    // finite level L where every exponent of f is integral.
    Integer L = 1;
    for (const auto& [e, c] : f) L = lcm(L, e.denominator_lcm());
    std::shared_ptr<const IdealPresentation> dil;
    {
      std::lock_guard lock(dilated_->mutex);
      auto& slot = dilated_->ideals[L];
      if (!slot) slot = std::make_shared<const IdealPresentation>(I.dilated(L));
      dil = slot;
    }
    return dil->contains(dilate(f, Rational(L)));
  }

  GroupDescriptor group_;
  ModuleSpec module_;
  std::shared_ptr<DilatedCache> dilated_;
};

class InvalidTuple : public DomainError {
public:
  using DomainError::DomainError;
};

/// 1 iff sum_s gamma_s . a_s vanishes in the module. Every a_s must be
/// nonzero in the module.
inline bool character_correlation(const AlgebraicSystem& S, const CharacterTuple& T) {
  if (T.pairs.empty()) throw InvalidTuple("empty character tuple");
  for (std::size_t s = 0; s < T.pairs.size(); ++s) {
    S.group().validate(T.pairs[s].shift);
    if (S.is_zero(T.pairs[s].coefficient))
      throw InvalidTuple("coefficient " + std::to_string(s + 1) + " (" + to_string(T.pairs[s].coefficient) +
                         ") is zero in the module");
  }
  return S.sum_vanishes(T.pairs);
}

/// Pairwise-distinct shifts, as required of a character tuple shape.
inline bool shifts_distinct(const CharacterTuple& T) {
  std::set<GroupElement> seen;
  for (const auto& c : T.pairs)
    if (!seen.insert(c.shift).second) return false;
  return true;
}

/// Integer points of an axis-aligned box, lexicographic order.
struct SearchBox {
  std::vector<long> lo, hi;

  static SearchBox cube(std::size_t d, long lo, long hi) { return {std::vector<long>(d, lo), std::vector<long>(d, hi)}; }

  std::size_t dim() const { return lo.size(); }
  std::size_t count() const {
    // saturates instead of wrapping
    std::size_t n = 1;
    for (std::size_t i = 0; i < dim(); ++i) {
      auto w = static_cast<std::size_t>(std::max(0L, hi[i] - lo[i] + 1));
      if (w == 0) return 0;
      n = n > std::numeric_limits<std::size_t>::max() / w ? std::numeric_limits<std::size_t>::max() : n * w;
    }
    return n;
  }
  std::vector<GroupElement> points() const {
    std::vector<GroupElement> out;
    if (count() == 0) return out;
    std::vector<long> cur = lo;
    while (true) {
      GroupElement g(dim());
      for (std::size_t i = 0; i < dim(); ++i) g[i] = cur[i];
      out.push_back(std::move(g));
      std::size_t i = dim();
      while (i > 0) {
        --i;
        if (cur[i] < hi[i]) {
          ++cur[i];
          break;
        }
        cur[i] = lo[i];
        if (i == 0) return out;
      }
      if (dim() == 0) return out;
    }
  }
  std::string describe() const {
    std::string s;
    for (std::size_t i = 0; i < dim(); ++i) {
      if (i) s += "x";
      s += "[" + std::to_string(lo[i]) + "," + std::to_string(hi[i]) + "]";
    }
    return s;
  }
};

/// Nonzero polynomials supported on {0,1}^d with coefficients in F_p (all of
/// them when there are at most 256, otherwise just the monomials).
inline std::vector<LaurentPoly> small_residues(const AlgebraicSystem& S) {
  const auto& I = S.ideal();
  const std::size_t d = S.group().rank();
  SearchBox cube = SearchBox::cube(d, 0, 1);
  auto mons = cube.points();
  std::vector<LaurentPoly> out;
  double combos = std::pow(static_cast<double>(I.characteristic()), static_cast<double>(mons.size()));
  if (combos <= 256) {
    std::vector<std::uint64_t> digits(mons.size(), 0);
    while (true) {
      std::size_t i = 0;
      while (i < digits.size() && ++digits[i] == I.characteristic()) digits[i++] = 0;
      if (i == digits.size()) break;
      LaurentPoly f(d, I.domain());
      for (std::size_t k = 0; k < mons.size(); ++k) f.add_term(mons[k], Rational(static_cast<unsigned long>(digits[k])));
      out.push_back(std::move(f));
    }
  } else {
    for (const auto& m : mons) out.push_back(LaurentPoly::monomial(I.domain(), m));
  }
  return out;
}

/// A nonidentity gamma in the box with gamma . a = a for some nonzero module
/// element a, if one exists among the tested residues.
inline std::optional<GroupElement> find_nonmixing_element(const AlgebraicSystem& S, const SearchBox& box) {
  if (box.dim() != S.group().rank()) throw DomainError("search box dimension differs from group rank");
  // q a = a with a != 0 forces q = 1
  if (S.is_rational_dual()) return std::nullopt;
  if (box.count() > 10'000'000) throw DomainError("search box too large: " + box.describe());
  std::vector<LaurentPoly> residues;
  if (S.is_char_p()) {
    for (auto& r : small_residues(S))
      if (!S.is_zero(r)) residues.push_back(std::move(r));
  }
  for (const auto& g : box.points()) {
    if (g.is_zero()) continue;
    if (S.is_char_p()) {
      const auto& I = S.ideal();
      LaurentPoly unit = LaurentPoly::monomial(I.domain(), g) - LaurentPoly::one(g.size(), I.domain());
      for (const auto& a : residues)
        if (S.is_zero(mul(unit, a))) return g;
    } else if (S.is_evaluation()) {
      if (S.unit_power(g) == S.evaluation().field.one()) return g;
    } else {
      if (S.group().to_rational(g) == 1) return g;
    }
  }
  return std::nullopt;
}

/// Result of splitting Q^x_{>0} = Gamma' (+) Gamma'' where Gamma' carries the
/// variables mentioned by the generators and Gamma'' acts as a full shift.
class SplitAction {
public:
  SplitAction(const AlgebraicSystem& full, std::vector<std::size_t> inner_vars, std::vector<std::size_t> shift_vars,
              AlgebraicSystem inner)
      : full_(full), inner_vars_(std::move(inner_vars)), shift_vars_(std::move(shift_vars)), inner_(std::move(inner)) {}

  const AlgebraicSystem& inner() const { return inner_; }
  const std::vector<std::size_t>& inner_vars() const { return inner_vars_; }
  const std::vector<std::size_t>& shift_vars() const { return shift_vars_; }
  std::vector<std::uint64_t> shift_primes() const {
    std::vector<std::uint64_t> out;
    for (auto v : shift_vars_) out.push_back(full_.group().primes()[v]);
    return out;
  }

  GroupElement inner_part(const GroupElement& g) const {
    GroupElement r(inner_vars_.size());
    for (std::size_t i = 0; i < inner_vars_.size(); ++i) r[i] = g[inner_vars_[i]];
    return r;
  }
  GroupElement shift_part(const GroupElement& g) const {
    GroupElement r(shift_vars_.size());
    for (std::size_t i = 0; i < shift_vars_.size(); ++i) r[i] = g[shift_vars_[i]];
    return r;
  }
  /// Embeds (inner, shift) coordinates back into the full group.
  GroupElement combine(const GroupElement& inner, const GroupElement& shift) const {
    GroupElement r(full_.group().rank());
    for (std::size_t i = 0; i < inner_vars_.size(); ++i) r[inner_vars_[i]] = inner[i];
    for (std::size_t i = 0; i < shift_vars_.size(); ++i) r[shift_vars_[i]] = shift[i];
    return r;
  }
  LaurentPoly lift(const LaurentPoly& inner_poly) const {
    LaurentPoly r(full_.group().rank(), inner_poly.domain());
    for (const auto& [e, c] : inner_poly) r.add_term(combine(e, GroupElement(shift_vars_.size())), c);
    return r;
  }

  /// Correlation computed fiberwise: each coefficient is decomposed along
  /// Gamma'' and every fiber's inner sum must vanish.
  bool factored_correlation(const CharacterTuple& T) const {
    for (const auto& c : T.pairs)
      if (full_.is_zero(c.coefficient)) throw InvalidTuple("coefficient is zero in the module");
    std::map<GroupElement, LaurentPoly> fibers;
    const Domain dom = full_.ideal().domain();
    for (const auto& c : T.pairs) {
      const auto& a = std::get<LaurentPoly>(c.coefficient);
      GroupElement g_in = inner_part(c.shift), g_sh = shift_part(c.shift);
      for (const auto& [e, coeff] : a) {
        GroupElement key = g_sh + shift_part(e);
        auto [it, inserted] = fibers.try_emplace(key, LaurentPoly(inner_vars_.size(), dom));
        it->second.add_term(g_in + inner_part(e), coeff);
      }
    }
    for (const auto& [key, poly] : fibers)
      if (!inner_.is_zero(poly)) return false;
    return true;
  }

private:
  AlgebraicSystem full_;
  std::vector<std::size_t> inner_vars_;
  std::vector<std::size_t> shift_vars_;
  AlgebraicSystem inner_;
};

/// Splits a characteristic-p system over Q^x_{>0}: the generators' variables
/// form the inner Z^|V| system, the other prime coordinates act as a shift.
/// `variables` (0-based), when given, must contain every variable the
/// generators mention.
inline SplitAction split_action(const AlgebraicSystem& S, std::optional<std::vector<std::size_t>> variables = std::nullopt) {
  if (S.group().kind() != GroupKind::PositiveRationals) throw DomainError("split_action needs a Q^x_{>0} system");
  const auto& I = S.ideal();
  std::set<std::size_t> used;
  for (const auto& g : I.generators())
    for (const auto& [e, c] : g)
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] != 0) used.insert(i);
  std::vector<std::size_t> inner_vars;
  if (variables) {
    std::set<std::size_t> declared(variables->begin(), variables->end());
    for (auto v : used)
      if (!declared.count(v))
        throw DomainError("generator mentions u" + std::to_string(v + 1) + " (prime " + std::to_string(S.group().primes()[v]) +
                          ") outside the declared variable set");
    inner_vars.assign(declared.begin(), declared.end());
  } else {
    inner_vars.assign(used.begin(), used.end());
  }
  std::vector<std::size_t> shift_vars;
  for (std::size_t i = 0; i < S.group().rank(); ++i)
    if (!std::count(inner_vars.begin(), inner_vars.end(), i)) shift_vars.push_back(i);

  std::vector<LaurentPoly> gens;
  for (const auto& g : I.generators()) {
    LaurentPoly r(inner_vars.size(), I.domain());
    for (const auto& [e, c] : g) {
      GroupElement x(inner_vars.size());
      for (std::size_t i = 0; i < inner_vars.size(); ++i) x[i] = e[inner_vars[i]];
      r.add_term(x, c);
    }
    gens.push_back(std::move(r));
  }
  AlgebraicSystem inner(GroupDescriptor::free_abelian(inner_vars.size()),
                        CharPModule{IdealPresentation(inner_vars.size(), I.characteristic(), std::move(gens))});
  return SplitAction(S, std::move(inner_vars), std::move(shift_vars), std::move(inner));
}

}  // namespace algmix
