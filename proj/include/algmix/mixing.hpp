#pragma once

// Non-mixing certificates and the searches that produce them.

#include <algmix/linalg.hpp>
#include <algmix/systems.hpp>

#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

namespace algmix {

class BudgetExceeded : public std::runtime_error {
public:
  BudgetExceeded(const std::string& what, std::string region) : std::runtime_error(what), region_(std::move(region)) {}
  const std::string& region() const { return region_; }

private:
  std::string region_;
};

enum class FamilyKind { PrimePower, ExplicitList };

struct DilationFamily {
  FamilyKind kind = FamilyKind::ExplicitList;
  std::uint64_t p = 0;  // PrimePower only
  unsigned kmax = 0;    // PrimePower only
  friend bool operator==(const DilationFamily&, const DilationFamily&) = default;
};

/// One member of the family: its parameter (p^k or the dilation n), the
/// shape instance and the recorded correlation bit.
struct TranscriptEntry {
  Rational parameter;
  std::vector<GroupElement> instance;
  bool bit = false;
};

struct NonMixingCertificate {
  std::size_t order = 0;
  std::vector<GroupElement> shape;
  std::vector<ModuleElement> coefficients;
  DilationFamily family;
  std::vector<TranscriptEntry> transcript;
  std::string system_hash;  // filled by the serializer

  bool proof_grade() const { return family.kind == FamilyKind::PrimePower; }
  std::string grade() const { return proof_grade() ? "proof" : "evidence"; }
};

inline CharacterTuple character_tuple(const std::vector<GroupElement>& shape, const std::vector<ModuleElement>& coeffs) {
  if (shape.size() != coeffs.size()) throw DomainError("shape and coefficient lists differ in length");
  CharacterTuple T;
  for (std::size_t s = 0; s < shape.size(); ++s) T.pairs.push_back({shape[s], coeffs[s]});
  return T;
}

inline std::vector<GroupElement> scale_shape(const std::vector<GroupElement>& shape, const Rational& n) {
  std::vector<GroupElement> out;
  for (const auto& g : shape) out.push_back(g.scaled(n));
  return out;
}

/// Differences gamma_s - gamma_t must be injective along the transcript and
/// their smallest size must grow from the first to the last entry without
/// ever dropping. Only the tested range is examined.
inline bool moves_apart(const GroupDescriptor& G, const std::vector<TranscriptEntry>& transcript) {
  if (transcript.size() < 2) return false;
  const std::size_t r = transcript.front().instance.size();
  std::vector<std::set<GroupElement>> seen(r * r);
  std::optional<Rational> prev, first;
  for (const auto& entry : transcript) {
    if (entry.instance.size() != r) return false;
    std::optional<Rational> smallest;
    for (std::size_t s = 0; s < r; ++s)
      for (std::size_t t = s + 1; t < r; ++t) {
        GroupElement diff = entry.instance[t] - entry.instance[s];
        if (!seen[s * r + t].insert(diff).second) return false;
        Rational n = G.norm(diff);
        if (!smallest || n < *smallest) smallest = n;
      }
    if (!smallest) return false;
    if (prev && *smallest < *prev) return false;
    if (!first) first = smallest;
    prev = smallest;
  }
  return *prev > *first;
}

struct VerifyEntry {
  Rational parameter;
  bool recorded = false;
  bool recomputed = false;
  std::vector<GroupElement> instance;
};

struct VerifyReport {
  bool pass = false;
  std::vector<VerifyEntry> entries;
  std::optional<std::size_t> first_bad;
  bool family_consistent = true;
  bool moves_apart = false;
  std::string message;
};

/// Replays the transcript through character_correlation.
inline VerifyReport verify_certificate(const AlgebraicSystem& S, const NonMixingCertificate& C) {
  VerifyReport rep;
  auto fail = [&](std::string msg) {
    rep.pass = false;
    if (rep.message.empty()) rep.message = std::move(msg);
  };
  if (C.order < 2 || C.shape.size() != C.order || C.coefficients.size() != C.order) {
    fail("order, shape and coefficients disagree in size");
    return rep;
  }
  if (C.transcript.empty()) {
    fail("empty transcript");
    return rep;
  }
  if (C.family.kind == FamilyKind::PrimePower) {
    if (!S.is_char_p() || C.family.p != S.characteristic()) rep.family_consistent = false;
    if (C.transcript.size() != C.family.kmax + 1) rep.family_consistent = false;
    for (std::size_t k = 0; k < C.transcript.size() && rep.family_consistent; ++k) {
      Rational q(pow(Integer(static_cast<unsigned long>(C.family.p)), k));
      if (C.transcript[k].parameter != q || C.transcript[k].instance != scale_shape(C.shape, q)) rep.family_consistent = false;
    }
  }
  for (std::size_t j = 0; j < C.transcript.size(); ++j) {
    const auto& e = C.transcript[j];
    VerifyEntry v{e.parameter, e.bit, false, e.instance};
    try {
      v.recomputed = character_correlation(S, character_tuple(e.instance, C.coefficients));
    } catch (const DomainError& err) {
      rep.entries.push_back(v);
      if (!rep.first_bad) rep.first_bad = j;
      fail(std::string("entry rejected: ") + err.what());
      continue;
    }
    if ((!v.recomputed || v.recomputed != v.recorded) && !rep.first_bad) rep.first_bad = j;
    rep.entries.push_back(std::move(v));
  }
  rep.moves_apart = moves_apart(S.group(), C.transcript);
  rep.pass = !rep.first_bad && rep.family_consistent && rep.moves_apart && rep.message.empty();
  if (rep.first_bad && rep.message.empty())
    rep.message = "correlation is 0 at parameter " + to_string(C.transcript[*rep.first_bad].parameter);
  else if (!rep.family_consistent && rep.message.empty())
    rep.message = "transcript does not match the declared prime-power family";
  else if (!rep.moves_apart && rep.message.empty())
    rep.message = "shape differences do not move apart over the transcript";
  return rep;
}

/// Certificate from an ideal element f = sum c_m u^m: the Frobenius identity
/// f^{p^k} = sum c_m u^{p^k m} keeps every dilation by p^k inside I.
inline NonMixingCertificate frobenius_certificate(const AlgebraicSystem& S, const LaurentPoly& f, unsigned kmax) {
  const auto& I = S.ideal();
  LaurentPoly g = f.in_domain(I.domain());
  if (g.size() < 2) throw DomainError("support of f has fewer than 2 elements");
  if (!S.is_zero(g)) throw DomainError("f is not in the ideal");
  NonMixingCertificate C;
  C.order = g.size();
  for (const auto& [e, c] : g) {
    C.shape.push_back(e);
    C.coefficients.push_back(LaurentPoly::constant(g.nvars(), I.domain(), c));
  }
  C.family = {FamilyKind::PrimePower, I.characteristic(), kmax};
  for (unsigned k = 0; k <= kmax; ++k) {
    Rational q(pow(Integer(static_cast<unsigned long>(I.characteristic())), k));
    auto inst = scale_shape(C.shape, q);
    bool bit = character_correlation(S, character_tuple(inst, C.coefficients));
    C.transcript.push_back({q, std::move(inst), bit});
  }
  return C;
}

// ---------------------------------------------------------------------------
// shape search

struct ShapeSearchOptions {
  SearchBox box;
  SearchBox window;                 // CharP coefficient supports
  std::vector<long> dilations;
  std::size_t min_dilations = 0;    // 0: all of D at once
  std::uint64_t kernel_limit = 1u << 16;
  std::size_t max_per_cell = 1;
  std::uint64_t budget = 5'000'000; // cells
  unsigned threads = 1;
};

struct ShapeSearchResult {
  std::vector<NonMixingCertificate> certificates;
  std::size_t shapes = 0;
  std::size_t cells = 0;
  std::size_t truncated_cells = 0;
  std::string region;
  bool exhaustive() const { return truncated_cells == 0; }
};

namespace detail {

using IVec = std::vector<long>;

inline GroupElement to_group(const IVec& v) {
  GroupElement g(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) g[i] = v[i];
  return g;
}

inline bool lex_positive(const IVec& v) {
  for (long x : v)
    if (x != 0) return x > 0;
  return false;
}

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i, 0u);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i, w);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline std::vector<std::vector<long>> dilation_subsets(const std::vector<long>& D, std::size_t min_size) {
  if (D.empty()) throw DomainError("dilation set is empty");
  if (D.size() > 16) throw DomainError("at most 16 dilations are supported");
  for (long n : D)
    if (n == 0) throw DomainError("dilation 0 is not allowed");
  if (min_size == 0 || min_size > D.size()) min_size = D.size();
  std::vector<std::vector<long>> out;
  for (std::uint32_t mask = 1; mask < (1u << D.size()); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) < min_size) continue;
    std::vector<long> sub;
    for (std::size_t i = 0; i < D.size(); ++i)
      if (mask >> i & 1) sub.push_back(D[i]);
    out.push_back(std::move(sub));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() > b.size() : a < b;
  });
  return out;
}

}  // namespace detail

/// Canonical r-element shapes of the box up to translation: sorted
/// lexicographically with the first element at the origin.
inline std::vector<std::vector<GroupElement>> canonical_shapes(const SearchBox& box, std::size_t r) {
  using detail::IVec;
  const std::size_t d = box.dim();
  if (r == 0) throw DomainError("shape size must be positive");
  IVec ext(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (box.hi[i] < box.lo[i]) return {};
    ext[i] = box.hi[i] - box.lo[i];
  }
  std::vector<IVec> cand;
  SearchBox diff{IVec(d), ext};
  for (std::size_t i = 0; i < d; ++i) diff.lo[i] = -ext[i];
  for (const auto& g : diff.points()) {
    IVec v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = g[i].get_num().get_si();
    if (detail::lex_positive(v)) cand.push_back(std::move(v));
  }
  std::vector<std::vector<GroupElement>> out;
  std::vector<std::size_t> pick;
  IVec lo(d, 0), hi(d, 0);
  std::function<void(std::size_t, IVec, IVec)> rec = [&](std::size_t start, IVec mn, IVec mx) {
    if (pick.size() + 1 == r) {
      std::vector<GroupElement> shape{GroupElement(d)};
      for (auto k : pick) shape.push_back(detail::to_group(cand[k]));
      out.push_back(std::move(shape));
      return;
    }
    for (std::size_t k = start; k < cand.size(); ++k) {
      IVec a = mn, b = mx;
      bool ok = true;
      for (std::size_t i = 0; i < d && ok; ++i) {
        a[i] = std::min(a[i], cand[k][i]);
        b[i] = std::max(b[i], cand[k][i]);
        ok = b[i] - a[i] <= ext[i];
      }
      if (!ok) continue;
      pick.push_back(k);
      rec(k + 1, a, b);
      pick.pop_back();
    }
  };
  rec(0, lo, hi);
  return out;
}

namespace detail {

class CharPCell {
public:
  CharPCell(const AlgebraicSystem& S, const SearchBox& window)
      : S_(S), I_(S.ideal()), p_(I_.characteristic()), d_(S.group().rank()) {
    for (const auto& g : window.points()) {
      IVec v(d_);
      for (std::size_t i = 0; i < d_; ++i) v[i] = g[i].get_num().get_si();
      window_.push_back(std::move(v));
    }
    IVec wmin(d_, std::numeric_limits<long>::max());
    for (const auto& w : window_)
      for (std::size_t i = 0; i < d_; ++i) wmin[i] = std::min(wmin[i], w[i]);
    // Keep only window monomials independent modulo I: the unknowns then
    // parametrize the image of the window in R/I, and a block is zero in the
    // module exactly when its coordinates vanish.
    std::vector<IVec> kept;
    std::map<gb::Monomial, std::map<gb::Monomial, std::uint64_t>> echelon;  // pivot -> reduced row
    for (const auto& w : window_) {
      IVec e(d_);
      for (std::size_t i = 0; i < d_; ++i) e[i] = w[i] - wmin[i];
      const gb::Poly& f = nf(e);
      std::map<gb::Monomial, std::uint64_t> row;
      for (const auto& t : f) row[t.mono] = t.coeff;
      for (auto& [pivot, brow] : echelon) {
        auto it = row.find(pivot);
        if (it == row.end() || it->second == 0) continue;
        std::uint64_t c = it->second;
        for (const auto& [m, x] : brow) {
          auto& slot = row[m];
          slot = (slot + p_ - mod_mul(c, x, p_)) % p_;
        }
      }
      std::erase_if(row, [](const auto& kv) { return kv.second == 0; });
      if (row.empty()) continue;
      // normalize and back-substitute so rows stay fully reduced
      auto pivot = row.begin()->first;
      std::uint64_t inv = mod_inv(row.begin()->second, p_);
      for (auto& [m, x] : row) x = mod_mul(x, inv, p_);
      for (auto& [q, brow] : echelon) {
        auto it = brow.find(pivot);
        if (it == brow.end()) continue;
        std::uint64_t c = it->second;
        for (const auto& [m, x] : row) {
          auto& slot = brow[m];
          slot = (slot + p_ - mod_mul(c, x, p_)) % p_;
        }
        std::erase_if(brow, [](const auto& kv) { return kv.second == 0; });
      }
      echelon.emplace(pivot, std::move(row));
      kept.push_back(w);
      window_nf_.push_back(f);
    }
    window_ = std::move(kept);
  }

  /// Certificates found for one (shape, dilation subset) cell.
  std::vector<NonMixingCertificate> solve(const std::vector<IVec>& shape, const std::vector<long>& dil,
                                          const ShapeSearchOptions& opt, bool& truncated) {
    const std::size_t r = shape.size(), W = window_.size(), cols = r * W;
    std::vector<std::vector<std::uint32_t>> rows;
    for (long n : dil) {
      IVec mn(d_, std::numeric_limits<long>::max());
      for (std::size_t s = 0; s < r; ++s)
        for (const auto& w : window_)
          for (std::size_t i = 0; i < d_; ++i) mn[i] = std::min(mn[i], n * shape[s][i] + w[i]);
      std::map<gb::Monomial, std::size_t> row_of;
      std::size_t base = rows.size();
      for (std::size_t s = 0; s < r; ++s)
        for (std::size_t w = 0; w < W; ++w) {
          IVec e(d_);
          for (std::size_t i = 0; i < d_; ++i) e[i] = n * shape[s][i] + window_[w][i] - mn[i];
          for (const auto& t : nf(e)) {
            auto [it, inserted] = row_of.try_emplace(t.mono, base + row_of.size());
            if (inserted) rows.emplace_back(cols, 0);
            rows[it->second][s * W + w] = static_cast<std::uint32_t>(t.coeff);
          }
        }
    }
    FpMatrix M(0, cols, p_);
    for (const auto& row : rows) M.append_row(row);
    auto basis = M.kernel();
    std::vector<NonMixingCertificate> found;
    if (basis.empty()) return found;

    const std::size_t k = basis.size();
    std::vector<std::uint32_t> digits(k, 0);
    std::uint64_t examined = 0;
    while (found.size() < opt.max_per_cell) {
      // next projective combination: first nonzero digit equal to 1
      std::size_t i = 0;
      while (i < k) {
        if (++digits[i] < p_) break;
        digits[i++] = 0;
      }
      if (i == k) break;
      std::size_t lead = 0;
      while (digits[lead] == 0) ++lead;
      if (digits[lead] != 1) continue;
      if (++examined > opt.kernel_limit) {
        truncated = true;
        break;
      }
      std::vector<std::uint64_t> v(cols, 0);
      for (std::size_t b = 0; b < k; ++b)
        if (digits[b])
          for (std::size_t c = 0; c < cols; ++c) v[c] = (v[c] + digits[b] * static_cast<std::uint64_t>(basis[b][c])) % p_;
      bool blocks_ok = true;
      for (std::size_t s = 0; s < r && blocks_ok; ++s) blocks_ok = block_nonzero(v, s);
      if (!blocks_ok) continue;
      found.push_back(make_certificate(shape, dil, v));
    }
    return found;
  }

private:
  const gb::Poly& nf(const IVec& e) {
    gb::Monomial m(d_);
    for (std::size_t i = 0; i < d_; ++i) m[i] = static_cast<std::uint32_t>(e[i]);
    auto it = cache_.find(m);
    if (it != cache_.end()) return it->second;
    gb::Poly mono{gb::Term{m, 1}};
    return cache_.emplace(m, I_.normal_form_poly(mono)).first->second;
  }

  bool block_nonzero(const std::vector<std::uint64_t>& v, std::size_t s) const {
    const std::size_t W = window_.size();
    std::map<gb::Monomial, std::uint64_t> acc;
    for (std::size_t w = 0; w < W; ++w) {
      std::uint64_t c = v[s * W + w];
      if (!c) continue;
      for (const auto& t : window_nf_[w]) {
        auto& slot = acc[t.mono];
        slot = (slot + c * t.coeff) % p_;
      }
    }
    for (const auto& [m, c] : acc)
      if (c) return true;
    return false;
  }

  NonMixingCertificate make_certificate(const std::vector<IVec>& shape, const std::vector<long>& dil,
                                        const std::vector<std::uint64_t>& v) const {
    const std::size_t r = shape.size(), W = window_.size();
    NonMixingCertificate C;
    C.order = r;
    for (std::size_t s = 0; s < r; ++s) {
      C.shape.push_back(to_group(shape[s]));
      LaurentPoly a(d_, I_.domain());
      for (std::size_t w = 0; w < W; ++w)
        if (v[s * W + w]) a.add_term(to_group(window_[w]), Rational(static_cast<unsigned long>(v[s * W + w])));
      C.coefficients.push_back(std::move(a));
    }
    C.family = {FamilyKind::ExplicitList, 0, 0};
    for (long n : dil) {
      auto inst = scale_shape(C.shape, n);
      bool bit = character_correlation(S_, character_tuple(inst, C.coefficients));
      C.transcript.push_back({Rational(n), std::move(inst), bit});
    }
    return C;
  }

  const AlgebraicSystem& S_;
  const IdealPresentation& I_;
  std::uint64_t p_;
  std::size_t d_;
  std::vector<IVec> window_;
  std::vector<gb::Poly> window_nf_;
  std::map<gb::Monomial, gb::Poly> cache_;
};

/// Evaluation analogue: coefficients range over the whole field (or Q for
/// the rational dual), x_s = u^{q_s} evaluated; the equations
/// sum_s x_s^n a_s = 0 for every n in the subset are linear over Q.
class FieldCell {
public:
  explicit FieldCell(const AlgebraicSystem& S) : S_(S) {
    if (S.is_evaluation()) {
      K_ = S.evaluation().field;
    } else {
      K_ = NumberField::rationals();
    }
    const std::size_t k = K_.degree();
    FieldElement x = K_.one();
    for (std::size_t j = 0; j < k; ++j) {
      basis_.push_back(x);
      x = field_mul(K_, x, K_.generator());
    }
  }

  std::vector<NonMixingCertificate> solve(const std::vector<IVec>& shape, const std::vector<long>& dil,
                                          const ShapeSearchOptions& opt) {
    const std::size_t r = shape.size(), k = K_.degree(), cols = r * k;
    std::vector<std::vector<Rational>> rows;
    for (long n : dil) {
      std::size_t base = rows.size();
      rows.resize(base + k, std::vector<Rational>(cols, Rational(0)));
      for (std::size_t s = 0; s < r; ++s) {
        IVec e(shape[s].size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = n * shape[s][i];
        const FieldElement& xs = value(e);
        for (std::size_t j = 0; j < k; ++j) {
          FieldElement col = k == 1 ? xs : field_mul(K_, xs, basis_[j]);
          for (std::size_t i = 0; i < k; ++i) rows[base + i][s * k + j] = col.coeffs[i];
        }
      }
    }
    auto kernel = rational_kernel(std::move(rows), cols);
    std::vector<NonMixingCertificate> found;
    if (kernel.empty()) return found;
    std::vector<std::vector<Rational>> candidates = kernel;
    if (kernel.size() > 1) {
      std::vector<Rational> sum(cols, Rational(0));
      for (const auto& v : kernel)
        for (std::size_t c = 0; c < cols; ++c) sum[c] += v[c];
      candidates.push_back(std::move(sum));
    }
    for (const auto& v : candidates) {
      if (found.size() >= opt.max_per_cell) break;
      std::vector<ModuleElement> coeffs;
      bool ok = true;
      for (std::size_t s = 0; s < r && ok; ++s) {
        FieldElement a{std::vector<Rational>(v.begin() + s * k, v.begin() + (s + 1) * k)};
        ok = !a.is_zero();
        if (S_.is_evaluation())
          coeffs.push_back(a);
        else
          coeffs.push_back(a.coeffs[0]);
      }
      if (!ok) continue;
      NonMixingCertificate C;
      C.order = r;
      for (const auto& q : shape) C.shape.push_back(to_group(q));
      C.coefficients = std::move(coeffs);
      for (long n : dil) {
        auto inst = scale_shape(C.shape, n);
        bool bit = character_correlation(S_, character_tuple(inst, C.coefficients));
        C.transcript.push_back({Rational(n), std::move(inst), bit});
      }
      found.push_back(std::move(C));
    }
    return found;
  }

private:
  const FieldElement& value(const IVec& e) {
    auto it = cache_.find(e);
    if (it != cache_.end()) return it->second;
    GroupElement g = to_group(e);
    FieldElement x = S_.is_evaluation() ? S_.unit_power(g) : K_.from_rational(S_.group().to_rational(g));
    return cache_.emplace(e, std::move(x)).first->second;
  }

  const AlgebraicSystem& S_;
  NumberField K_ = NumberField::rationals();
  std::vector<FieldElement> basis_;
  std::map<IVec, FieldElement> cache_;
};

inline bool certificate_less(const NonMixingCertificate& a, const NonMixingCertificate& b) {
  if (a.shape != b.shape) return a.shape < b.shape;
  if (a.transcript.size() != b.transcript.size()) return a.transcript.size() > b.transcript.size();
  for (std::size_t j = 0; j < a.transcript.size(); ++j)
    if (a.transcript[j].parameter != b.transcript[j].parameter) return a.transcript[j].parameter < b.transcript[j].parameter;
  for (std::size_t s = 0; s < a.coefficients.size(); ++s) {
    auto x = to_string(a.coefficients[s]), y = to_string(b.coefficients[s]);
    if (x != y) return x < y;
  }
  return false;
}

inline std::string dilation_text(const std::vector<long>& D) {
  std::string s = "{";
  for (std::size_t i = 0; i < D.size(); ++i) s += (i ? "," : "") + std::to_string(D[i]);
  return s + "}";
}

}  // namespace detail

/// Exhaustive search over canonical shapes of `opt.box` and dilation subsets
/// of `opt.dilations` (jointly enforced). Characteristic-p systems solve for
/// coefficients supported on `opt.window` over F_p; Evaluation and
/// RationalDual systems solve over the field itself.
inline ShapeSearchResult shape_search(const AlgebraicSystem& S, std::size_t r, const ShapeSearchOptions& opt) {
  if (r < 2) throw DomainError("order must be at least 2");
  if (opt.box.dim() != S.group().rank()) throw DomainError("shape box dimension differs from group rank");
  if (S.is_char_p()) {
    if (opt.window.dim() != S.group().rank()) throw DomainError("coefficient window dimension differs from group rank");
    if (opt.window.count() == 0) throw DomainError("coefficient window is empty");
    if (S.ideal().constant_in_ideal()) throw DomainError("quotient is trivial (the ideal contains a unit)");
  }
  auto subsets = detail::dilation_subsets(opt.dilations, opt.min_dilations);
  ShapeSearchResult res;
  res.region = "order " + std::to_string(r) + ", shapes in " + opt.box.describe() +
               (S.is_char_p() ? ", coefficients on " + opt.window.describe() : ", coefficients in the field") +
               ", dilations " + detail::dilation_text(opt.dilations) + " jointly" +
               (subsets.size() > 1 ? " (subsets of size >= " + std::to_string(subsets.back().size()) + ")" : "");

  // Count shapes before enumerating them so an oversized region fails fast.
  auto shapes = canonical_shapes(opt.box, r);
  res.shapes = shapes.size();
  std::uint64_t cells = static_cast<std::uint64_t>(shapes.size()) * subsets.size();
  if (cells > opt.budget)
    throw BudgetExceeded("search needs " + std::to_string(cells) + " cells, budget is " + std::to_string(opt.budget), res.region);
  res.cells = cells;

  std::vector<std::vector<detail::IVec>> ishapes;
  for (const auto& sh : shapes) {
    std::vector<detail::IVec> v;
    for (const auto& g : sh) {
      detail::IVec x(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) x[i] = g[i].get_num().get_si();
      v.push_back(std::move(x));
    }
    ishapes.push_back(std::move(v));
  }

  const unsigned threads = std::max(1u, opt.threads);
  std::vector<std::vector<NonMixingCertificate>> per_worker(threads);
  std::vector<std::size_t> truncated(threads, 0);
  std::vector<std::unique_ptr<detail::CharPCell>> charp(threads);
  std::vector<std::unique_ptr<detail::FieldCell>> field(threads);
  if (S.is_char_p()) S.ideal().groebner_basis();  // build once before the workers start
  detail::parallel_for(cells, threads, [&](std::size_t idx, unsigned w) {
    const auto& shape = ishapes[idx / subsets.size()];
    const auto& dil = subsets[idx % subsets.size()];
    std::vector<NonMixingCertificate> got;
    if (S.is_char_p()) {
      if (!charp[w]) charp[w] = std::make_unique<detail::CharPCell>(S, opt.window);
      bool trunc = false;
      got = charp[w]->solve(shape, dil, opt, trunc);
      truncated[w] += trunc;
    } else {
      if (!field[w]) field[w] = std::make_unique<detail::FieldCell>(S);
      got = field[w]->solve(shape, dil, opt);
    }
    for (auto& c : got) per_worker[w].push_back(std::move(c));
  });
  for (unsigned w = 0; w < threads; ++w) {
    for (auto& c : per_worker[w]) res.certificates.push_back(std::move(c));
    res.truncated_cells += truncated[w];
  }
  std::sort(res.certificates.begin(), res.certificates.end(), detail::certificate_less);
  return res;
}

// ---------------------------------------------------------------------------
// vanishing subsums

/// Inclusion-minimal nonempty index sets S with sum_{s in S} term_s = 0,
/// given a zero test for subsets. Returned in (size, lexicographic) order.
inline std::vector<std::vector<std::size_t>> vanishing_subsums(std::size_t n,
                                                              const std::function<bool(const std::vector<std::size_t>&)>& sums_to_zero) {
  if (n < 2 || n > 20) throw DomainError("vanishing_subsums needs between 2 and 20 terms");
  std::vector<std::uint32_t> minimal;
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t size = 1; size <= n; ++size) {
    std::vector<std::uint32_t> masks;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask)
      if (static_cast<std::size_t>(__builtin_popcount(mask)) == size) masks.push_back(mask);
    // lexicographic order of the index lists
    auto indices = [&](std::uint32_t mask) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) idx.push_back(i);
      return idx;
    };
    std::vector<std::pair<std::vector<std::size_t>, std::uint32_t>> ordered;
    for (auto m : masks) ordered.emplace_back(indices(m), m);
    std::sort(ordered.begin(), ordered.end());
    for (const auto& [idx, mask] : ordered) {
      bool super = false;
      for (auto m : minimal)
        if ((mask & m) == m) {
          super = true;
          break;
        }
      if (super) continue;
      if (sums_to_zero(idx)) {
        minimal.push_back(mask);
        out.push_back(idx);
      }
    }
  }
  return out;
}

inline std::vector<std::vector<std::size_t>> vanishing_subsums(const std::vector<Rational>& terms) {
  return vanishing_subsums(terms.size(), [&](const std::vector<std::size_t>& idx) {
    Rational s = 0;
    for (auto i : idx) s += terms[i];
    return s == 0;
  });
}

inline std::vector<std::vector<std::size_t>> vanishing_subsums(const AlgebraicSystem& S, const std::vector<ModuleElement>& terms) {
  return vanishing_subsums(terms.size(), [&](const std::vector<std::size_t>& idx) {
    ModuleElement s = S.zero();
    for (auto i : idx) s = S.add(s, terms[i]);
    return S.is_zero(s);
  });
}

inline std::vector<std::vector<std::size_t>> vanishing_subsums(const NumberField& K, const std::vector<FieldElement>& terms) {
  return vanishing_subsums(terms.size(), [&](const std::vector<std::size_t>& idx) {
    FieldElement s = K.zero();
    for (auto i : idx) s = field_add(K, s, terms[i]);
    return s.is_zero();
  });
}

/// Restricts a certificate to a vanishing subset shared by every transcript
/// entry (the smallest such, then lexicographically first).
inline NonMixingCertificate reduce_witness(const AlgebraicSystem& S, const NonMixingCertificate& C) {
  if (C.order <= 2) throw DomainError("order-2 certificates cannot be reduced");
  if (C.transcript.empty()) throw DomainError("certificate has no transcript");
  std::optional<std::set<std::vector<std::size_t>>> common;
  for (const auto& e : C.transcript) {
    std::vector<ModuleElement> terms;
    for (std::size_t s = 0; s < C.order; ++s) terms.push_back(S.act(e.instance[s], C.coefficients[s]));
    std::set<std::vector<std::size_t>> here;
    for (auto& sub : vanishing_subsums(S, terms))
      if (sub.size() < C.order) here.insert(std::move(sub));
    if (!common) {
      common = std::move(here);
    } else {
      std::set<std::vector<std::size_t>> both;
      std::set_intersection(common->begin(), common->end(), here.begin(), here.end(), std::inserter(both, both.end()));
      common = std::move(both);
    }
    if (common->empty()) break;
  }
  if (!common || common->empty()) throw DomainError("certificate is irreducible: no common proper vanishing subsum");
  const std::vector<std::size_t>* best = nullptr;
  for (const auto& sub : *common)
    if (!best || sub.size() < best->size()) best = &sub;
  NonMixingCertificate R;
  R.order = best->size();
  for (auto i : *best) {
    R.shape.push_back(C.shape[i]);
    R.coefficients.push_back(C.coefficients[i]);
  }
  R.family = C.family;
  for (const auto& e : C.transcript) {
    std::vector<GroupElement> inst;
    for (auto i : *best) inst.push_back(e.instance[i]);
    bool bit = character_correlation(S, character_tuple(inst, R.coefficients));
    R.transcript.push_back({e.parameter, std::move(inst), bit});
  }
  return R;
}

/// Embeds an inner certificate of a split system into the full system with
/// zero shift coordinates and re-runs its transcript there.
inline NonMixingCertificate lift_certificate(const AlgebraicSystem& full, const SplitAction& split, const NonMixingCertificate& inner) {
  NonMixingCertificate C;
  C.order = inner.order;
  C.family = inner.family;
  const GroupElement zero(split.shift_vars().size());
  for (const auto& g : inner.shape) C.shape.push_back(split.combine(g, zero));
  for (const auto& a : inner.coefficients) C.coefficients.push_back(split.lift(std::get<LaurentPoly>(a)));
  for (const auto& e : inner.transcript) {
    std::vector<GroupElement> inst;
    for (const auto& g : e.instance) inst.push_back(split.combine(g, zero));
    bool bit = character_correlation(full, character_tuple(inst, C.coefficients));
    C.transcript.push_back({e.parameter, std::move(inst), bit});
  }
  return C;
}

// ---------------------------------------------------------------------------
// unit equations

/// (6n)^{3n} (r+1): the solution count of a nondegenerate unit equation in
/// n unknowns over a rank-r group is at most exp of this number.
inline Integer ess_bound_exponent(unsigned long n, unsigned long r) {
  if (n < 1) throw DomainError("ess_bound_exponent needs n >= 1");
  return pow(Integer(6 * n), 3 * n) * Integer(r + 1);
}

struct UnitEquationProblem {
  NumberField field = NumberField::rationals();
  std::vector<FieldElement> coefficients;  // a_1..a_n
  std::vector<FieldElement> generators;    // g_1..g_r
  unsigned box = 0;                        // |e_ij| <= box
};

struct UnitSolution {
  std::vector<FieldElement> values;
  std::vector<std::vector<long>> exponents;  // one representation per value
};

struct UnitSolutions {
  std::vector<UnitSolution> solutions;
  std::size_t group_elements = 0;   // distinct values of the box
  Integer bound_exponent;
  bool bound_holds = false;         // log(count+1) <= bound_exponent
};

namespace detail {
struct FieldLess {
  bool operator()(const FieldElement& a, const FieldElement& b) const { return a.coeffs < b.coeffs; }
};

inline std::map<FieldElement, std::vector<long>, FieldLess> unit_box(const UnitEquationProblem& P) {
  const auto& K = P.field;
  std::map<FieldElement, std::vector<long>, FieldLess> values;
  const std::size_t m = P.generators.size();
  std::vector<long> e(m, -static_cast<long>(P.box));
  while (true) {
    FieldElement x = K.one();
    for (std::size_t j = 0; j < m; ++j) x = field_mul(K, x, field_pow(K, P.generators[j], Integer(e[j])));
    values.try_emplace(x, e);
    std::size_t j = 0;
    while (j < m && e[j] == static_cast<long>(P.box)) e[j++] = -static_cast<long>(P.box);
    if (j == m) break;
    ++e[j];
  }
  return values;
}
}  // namespace detail

/// All x in <g>^n from the exponent box with sum a_i x_i = 1 and no vanishing
/// proper subsum. The last unknown is solved for and looked up.
inline UnitSolutions enumerate_unit_solutions(const UnitEquationProblem& P, std::uint64_t budget = 50'000'000) {
  const auto& K = P.field;
  const std::size_t n = P.coefficients.size();
  if (n == 0) throw DomainError("unit equation needs at least one coefficient");
  for (const auto& a : P.coefficients) {
    K.check(a);
    if (a.is_zero()) throw DomainError("unit equation coefficients must be nonzero");
  }
  for (const auto& g : P.generators) {
    K.check(g);
    if (g.is_zero()) throw DomainError("group generators must be nonzero");
  }
  double box_size = std::pow(2.0 * P.box + 1, static_cast<double>(P.generators.size()));
  if (box_size > static_cast<double>(budget))
    throw BudgetExceeded("exponent box has " + std::to_string(static_cast<std::uint64_t>(box_size)) + " points, budget is " +
                             std::to_string(budget),
                         "box " + std::to_string(P.box));
  auto values = detail::unit_box(P);
  std::vector<FieldElement> G;
  for (const auto& [x, e] : values) G.push_back(x);
  double search = std::pow(static_cast<double>(G.size()), static_cast<double>(n - 1));
  if (search > static_cast<double>(budget))
    throw BudgetExceeded("search needs " + std::to_string(static_cast<std::uint64_t>(search)) + " steps, budget is " +
                             std::to_string(budget),
                         "box " + std::to_string(P.box));

  UnitSolutions out;
  out.group_elements = G.size();
  const FieldElement inv_last = field_inv(K, P.coefficients[n - 1]);
  std::vector<std::size_t> idx(n - 1, 0);
  while (true) {
    FieldElement rest = K.one();
    std::vector<FieldElement> x;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      x.push_back(G[idx[i]]);
      rest = field_sub(K, rest, field_mul(K, P.coefficients[i], G[idx[i]]));
    }
    FieldElement last = field_mul(K, rest, inv_last);
    auto it = values.find(last);
    if (it != values.end()) {
      x.push_back(last);
      bool degenerate = false;
      if (n >= 2) {
        std::vector<FieldElement> terms;
        for (std::size_t i = 0; i < n; ++i) terms.push_back(field_mul(K, P.coefficients[i], x[i]));
        degenerate = !vanishing_subsums(K, terms).empty();
      }
      if (!degenerate) {
        UnitSolution sol{x, {}};
        for (const auto& v : x) sol.exponents.push_back(values.at(v));
        out.solutions.push_back(std::move(sol));
      }
    }
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == G.size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  std::sort(out.solutions.begin(), out.solutions.end(), [](const UnitSolution& a, const UnitSolution& b) {
    for (std::size_t i = 0; i < a.values.size(); ++i)
      if (a.values[i].coeffs != b.values[i].coeffs) return a.values[i].coeffs < b.values[i].coeffs;
    return false;
  });
  out.bound_exponent = ess_bound_exponent(n, P.generators.size());
  // log(c+1) <= bits(c+1) * log 2 < bits(c+1), so comparing bit length is exact enough
  Integer c1(static_cast<unsigned long>(out.solutions.size() + 1));
  out.bound_holds = Integer(static_cast<unsigned long>(mpz_sizeinbase(c1.get_mpz_t(), 2))) <= out.bound_exponent;
  return out;
}

// ---------------------------------------------------------------------------
// rational dual

/// Shape gamma_s(n) = alpha_s + beta_s n in Q^x_{>0}; the coefficients are
/// the kernel of the polynomial identity sum_s a_s (alpha_s + beta_s n) = 0,
/// normalized so the first nonzero entry is 1.
inline std::vector<Rational> solve_affine_family(const std::vector<Rational>& alpha, const std::vector<Rational>& beta) {
  if (alpha.size() != beta.size() || alpha.size() < 2) throw DomainError("affine family needs matching offsets and slopes");
  auto ker = rational_kernel({alpha, beta}, alpha.size());
  if (ker.empty()) throw DomainError("the affine family admits no vanishing coefficient vector");
  if (ker.size() > 1) throw DomainError("affine family coefficient vector is not unique up to scale");
  auto v = ker.front();
  Rational lead = 0;
  for (const auto& x : v)
    if (x != 0) {
      lead = x;
      break;
    }
  for (auto& x : v) x /= lead;
  for (const auto& x : v)
    if (x == 0) throw DomainError("affine family solution has a zero coefficient");
  return v;
}

inline NonMixingCertificate affine_family_certificate(const AlgebraicSystem& S, const std::vector<Rational>& alpha,
                                                      const std::vector<Rational>& beta, long n_first, long n_last) {
  if (!S.is_rational_dual()) throw DomainError("affine families live in the rational dual system");
  auto coeffs = solve_affine_family(alpha, beta);
  NonMixingCertificate C;
  C.order = alpha.size();
  for (const auto& a : coeffs) C.coefficients.push_back(a);
  C.family = {FamilyKind::ExplicitList, 0, 0};
  for (long n = n_first; n <= n_last; ++n) {
    std::vector<GroupElement> inst;
    for (std::size_t s = 0; s < alpha.size(); ++s) inst.push_back(S.group().from_rational(alpha[s] + beta[s] * n));
    bool bit = character_correlation(S, character_tuple(inst, C.coefficients));
    C.transcript.push_back({Rational(n), std::move(inst), bit});
  }
  if (C.transcript.empty()) throw DomainError("empty parameter range");
  C.shape = C.transcript.front().instance;
  return C;
}

struct PairScanResult {
  std::size_t coefficient_values = 0;   // nonzero rationals of height <= coefficient bound
  std::size_t coefficient_pairs = 0;
  std::size_t shift_values = 0;         // positive rationals of height <= shift bound
  std::size_t shift_pairs = 0;          // ordered, distinct
  std::size_t vanishing_tuples = 0;     // (a1, a2, gamma1, gamma2) with correlation 1
  std::size_t max_ratios_per_pair = 0;  // distinct gamma2/gamma1 among those, per coefficient pair
  std::size_t crosschecked = 0;
  std::size_t crosscheck_mismatches = 0;
  bool certificate_possible() const { return max_ratios_per_pair > 1; }
};

namespace detail {
inline std::vector<std::pair<long, long>> rationals_of_height(long h) {
  std::vector<std::pair<long, long>> out;
  for (long p = 1; p <= h; ++p)
    for (long q = 1; q <= h; ++q)
      if (std::gcd(p, q) == 1) out.emplace_back(p, q);
  return out;
}
inline std::pair<long, long> reduced(long p, long q) {
  long g = std::gcd(p, q);
  return {p / g, q / g};
}
}  // namespace detail

/// Exhaustive order-2 check: for every pair of nonzero coefficients of height
/// at most `coeff_height` and every ordered pair of distinct shifts of height
/// at most `shift_height`, count the tuples with a1 g1 + a2 g2 = 0 and the
/// distinct ratios g2/g1 they use. A non-mixing family would need infinitely
/// many ratios for a fixed coefficient pair. A deterministic sample of the
/// exact-arithmetic decisions is replayed through character_correlation.
inline PairScanResult rational_dual_pair_scan(const AlgebraicSystem& S, long coeff_height, long shift_height,
                                              std::size_t crosscheck = 256) {
  if (!S.is_rational_dual()) throw DomainError("pair scan needs the rational dual system");
  auto key = [](long p, long q) { return (static_cast<std::uint64_t>(p) << 32) | static_cast<std::uint64_t>(q); };
  PairScanResult res;
  auto coeff_abs = detail::rationals_of_height(coeff_height);
  auto shifts = detail::rationals_of_height(shift_height);
  res.coefficient_values = 2 * coeff_abs.size();
  res.coefficient_pairs = res.coefficient_values * res.coefficient_values;
  res.shift_values = shifts.size();
  res.shift_pairs = shifts.size() * (shifts.size() - 1);

  // ratio g2/g1 -> number of shift pairs realizing it
  std::unordered_map<std::uint64_t, std::uint32_t> ratio_count;
  ratio_count.reserve(res.shift_pairs);
  for (const auto& [p1, q1] : shifts)
    for (const auto& [p2, q2] : shifts) {
      if (p1 == p2 && q1 == q2) continue;
      auto [p, q] = detail::reduced(p2 * q1, q2 * p1);
      ++ratio_count[key(p, q)];
    }

  auto rational_of = [](long p, long q) { return make_rational(p, q); };
  std::size_t stride = std::max<std::size_t>(1, res.coefficient_pairs / std::max<std::size_t>(1, crosscheck));
  std::size_t pair_index = 0;
  for (const auto& [n1, d1] : coeff_abs)
    for (int s1 : {1, -1})
      for (const auto& [n2, d2] : coeff_abs)
        for (int s2 : {1, -1}) {
          ++pair_index;
          std::size_t hits = 0;
          std::optional<std::pair<long, long>> hit_ratio;
          // a1 g1 + a2 g2 = 0  <=>  g2/g1 = -a1/a2, positive only for opposite signs
          if (s1 != s2) {
            auto ratio = detail::reduced(n1 * d2, d1 * n2);
            auto it = ratio_count.find(key(ratio.first, ratio.second));
            if (it != ratio_count.end()) {
              hits = it->second;
              hit_ratio = ratio;
            }
          }
          res.vanishing_tuples += hits;
          res.max_ratios_per_pair = std::max<std::size_t>(res.max_ratios_per_pair, hits ? 1 : 0);
          if (pair_index % stride == 0 && res.crosschecked < crosscheck) {
            // replay one shift pair: the hit (if any) and a near miss
            Rational a1 = s1 * rational_of(n1, d1), a2 = s2 * rational_of(n2, d2);
            std::vector<std::pair<Rational, Rational>> probes;
            if (hit_ratio) {
              for (const auto& [p, q] : shifts) {
                Rational g1 = rational_of(p, q), g2 = g1 * rational_of(hit_ratio->first, hit_ratio->second);
                if (height(g2) <= shift_height) {
                  probes.emplace_back(g1, g2);
                  break;
                }
              }
            }
            probes.emplace_back(Rational(1), rational_of(shifts.back().first, shifts.back().second));
            for (const auto& [g1, g2] : probes) {
              if (g1 == g2) continue;
              bool fast = a1 * g1 + a2 * g2 == 0;
              bool fast_table = hit_ratio && g2 / g1 == rational_of(hit_ratio->first, hit_ratio->second);
              CharacterTuple T{{{S.group().from_rational(g1), a1}, {S.group().from_rational(g2), a2}}};
              bool exact = character_correlation(S, T);
              ++res.crosschecked;
              if (exact != fast || exact != fast_table) ++res.crosscheck_mismatches;
            }
          }
        }
  return res;
}

// ---------------------------------------------------------------------------
// order report

struct ReportOptions {
  std::size_t rmax = 4;
  unsigned kmax = 6;
  std::optional<SearchBox> box, window;  // defaults depend on the system
  std::vector<long> dilations;           // default {1,2,4,8} (CharP), {1..r+1} otherwise
  std::optional<SearchBox> mixing_box;
  long dual_coeff_height = 20, dual_shift_height = 50;
  long dual_family_last = 1000;
  std::uint64_t budget = 5'000'000;
  unsigned threads = 1;
};

struct OrderEntry {
  std::size_t r = 0;
  std::string status;  // "certificate", "clean", "budget", "skipped"
  std::string region;
  std::string method;
  std::size_t certificates = 0;
};

struct MixingReport {
  std::vector<OrderEntry> orders;
  std::optional<std::size_t> least_order;
  std::optional<NonMixingCertificate> certificate;
  std::optional<GroupElement> nonmixing_element;
  std::string mixing_box;
  std::vector<std::string> notes;
  bool proof_grade() const { return certificate && certificate->proof_grade(); }
};

inline MixingReport mixing_order_report(const AlgebraicSystem& S, const ReportOptions& opt) {
  MixingReport rep;
  const std::size_t d = S.group().rank();
  SearchBox mbox = opt.mixing_box.value_or(SearchBox::cube(d, -3, 3));
  rep.mixing_box = S.is_rational_dual() ? "none needed: the action is free" : mbox.describe();
  if (S.is_char_p() && S.ideal().constant_in_ideal()) {
    rep.notes.push_back("trivial quotient: the ideal contains a unit");
    return rep;
  }
  rep.nonmixing_element = find_nonmixing_element(S, mbox);
  if (rep.nonmixing_element) rep.notes.push_back("a nonidentity element fixes a nonzero character: the action is not mixing");

  for (std::size_t r = 2; r <= opt.rmax && !rep.least_order; ++r) {
    OrderEntry entry{r, "clean", "", "", 0};
    std::optional<NonMixingCertificate> found;
    if (S.is_char_p()) {
      std::vector<LaurentPoly> sources = S.ideal().generators();
      for (const auto& g : S.ideal().groebner_basis()) sources.push_back(g);
      for (const auto& f : sources)
        if (f.size() == r) {
          auto C = frobenius_certificate(S, f, opt.kmax);
          if (verify_certificate(S, C).pass) {
            found = std::move(C);
            entry.method = "frobenius";
            break;
          }
        }
    } else if (S.is_rational_dual() && r == 3) {
      std::vector<Rational> alpha{1, 0, -1}, beta{0, 1, 1};
      auto C = affine_family_certificate(S, alpha, beta, 3, opt.dual_family_last);
      if (verify_certificate(S, C).pass) {
        found = std::move(C);
        entry.method = "affine family (1, n, n-1)";
        entry.region = "n = 3.." + std::to_string(opt.dual_family_last);
      }
    }
    if (!found && S.is_rational_dual() && r == 2) {
      auto scan = rational_dual_pair_scan(S, opt.dual_coeff_height, opt.dual_shift_height);
      entry.method = "pair scan";
      entry.region = "coefficients of height <= " + std::to_string(opt.dual_coeff_height) + ", shifts of height <= " +
                     std::to_string(opt.dual_shift_height);
      if (scan.certificate_possible()) entry.status = "candidate";
    } else if (!found && !S.is_rational_dual()) {
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
      entry.method = "shape search";
      try {
        auto res = shape_search(S, r, so);
        entry.region = res.region;
        if (!res.exhaustive()) entry.region += ", kernel enumeration truncated in " + std::to_string(res.truncated_cells) + " cells";
        if (!res.certificates.empty()) {
          entry.certificates = res.certificates.size();
          found = res.certificates.front();
        }
      } catch (const BudgetExceeded& e) {
        entry.status = "budget";
        entry.region = e.region();
      }
    }
    if (found) {
      entry.status = "certificate";
      entry.certificates = std::max<std::size_t>(entry.certificates, 1);
      rep.least_order = r;
      rep.certificate = std::move(found);
    }
    rep.orders.push_back(std::move(entry));
  }

  if (rep.certificate)
    rep.notes.push_back(rep.certificate->proof_grade()
                            ? "order-" + std::to_string(*rep.least_order) +
                                  " non-mixing is proved for every k by the Frobenius identity"
                            : "order-" + std::to_string(*rep.least_order) +
                                  " non-mixing is witnessed over the tested parameter range only");
  rep.notes.push_back("clean regions are desk-scale evidence of mixing at that order, not a proof");
  if (S.is_evaluation())
    rep.notes.push_back("connected system: if it is mixing (no nonmixing element), it is mixing of all orders; "
                        "the clean regions above are bounded evidence consistent with that");
  return rep;
}

}  // namespace algmix
