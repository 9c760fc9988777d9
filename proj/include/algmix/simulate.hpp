#pragma once

// Finite-window view of a characteristic-p system: configurations x on a box
// with sum_m c_m x_{t+m} = 0 for every generator translate inside the box
// (free boundary). Cylinder measures come from rank counting, samples from
// random free variables after elimination.

#include <algmix/linalg.hpp>
#include <algmix/mixing.hpp>
#include <algmix/systems.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace algmix {

class UnsupportedOperation : public DomainError {
public:
  using DomainError::DomainError;
};

using Site = std::vector<long>;

struct Pin {
  Site site;
  std::uint32_t value = 0;
};

/// Finitely many pinned coordinates.
using CylinderSet = std::vector<Pin>;

// SplitMix64 in counter mode: output j of stream s under seed k is
// mix(key(k, s) + j * golden), so any block can be regenerated on its own.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ull))) {}

  std::uint64_t next() { return splitmix64(key_ + 0x9E3779B97F4A7C15ull * counter_++); }

  /// Uniform in [0, n), by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do x = next();
    while (x >= limit);
    return x % n;
  }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline constexpr std::size_t kSampleBlock = 4096;

class WindowConfigSpace {
public:
  WindowConfigSpace(const AlgebraicSystem& S, SearchBox window) : window_(std::move(window)) {
    if (!S.is_char_p()) throw UnsupportedOperation("measure-level simulation needs a characteristic-p system");
    if (S.group().kind() == GroupKind::RationalVector)
      throw UnsupportedOperation("measure-level simulation needs integer exponents (Z^d or prime coordinates)");
    if (window_.dim() != S.group().rank()) throw DomainError("window dimension differs from group rank");
    p_ = S.characteristic();
    n_ = window_.count();
    if (n_ == 0) throw DomainError("window is empty");
    const std::size_t d = window_.dim();
    A_ = FpMatrix(0, n_, p_);
    for (const auto& g : S.ideal().generators()) {
      if (g.is_zero()) continue;
      std::vector<std::pair<Site, std::uint32_t>> terms;
      Site lo(d, 0), hi(d, 0);
      bool first = true;
      for (const auto& [e, c] : g) {
        Site m(d);
        for (std::size_t i = 0; i < d; ++i) m[i] = e[i].get_num().get_si();
        for (std::size_t i = 0; i < d; ++i) {
          lo[i] = first ? m[i] : std::min(lo[i], m[i]);
          hi[i] = first ? m[i] : std::max(hi[i], m[i]);
        }
        first = false;
        terms.emplace_back(std::move(m), static_cast<std::uint32_t>(reduce_mod(c, p_)));
      }
      // translates t with t + supp(g) inside the window
      SearchBox shifts{Site(d), Site(d)};
      for (std::size_t i = 0; i < d; ++i) {
        shifts.lo[i] = window_.lo[i] - lo[i];
        shifts.hi[i] = window_.hi[i] - hi[i];
      }
      for (const auto& t : shifts.points()) {
        std::vector<std::uint32_t> row(n_, 0);
        for (const auto& [m, c] : terms) {
          Site s(d);
          for (std::size_t i = 0; i < d; ++i) s[i] = t[i].get_num().get_si() + m[i];
          auto& slot = row[*index(s)];
          slot = static_cast<std::uint32_t>((slot + c) % p_);
        }
        A_.append_row(row);
      }
    }
    R_ = A_;
    pivots_ = R_.rref();
    std::vector<bool> is_pivot(n_, false);
    for (auto c : pivots_) is_pivot[c] = true;
    for (std::size_t c = 0; c < n_; ++c)
      if (!is_pivot[c]) free_.push_back(c);
  }

  std::uint64_t p() const { return p_; }
  const SearchBox& window() const { return window_; }
  std::size_t sites() const { return n_; }
  const FpMatrix& constraints() const { return A_; }
  std::size_t rank() const { return pivots_.size(); }
  std::size_t dimension() const { return n_ - rank(); }
  Integer configurations() const { return pow(Integer(static_cast<unsigned long>(p_)), dimension()); }

  std::optional<std::size_t> index(const Site& s) const {
    if (s.size() != window_.dim()) return std::nullopt;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] < window_.lo[i] || s[i] > window_.hi[i]) return std::nullopt;
      idx = idx * static_cast<std::size_t>(window_.hi[i] - window_.lo[i] + 1) + static_cast<std::size_t>(s[i] - window_.lo[i]);
    }
    return idx;
  }

  Site site(std::size_t idx) const {
    Site s(window_.dim());
    for (std::size_t i = window_.dim(); i-- > 0;) {
      std::size_t len = static_cast<std::size_t>(window_.hi[i] - window_.lo[i] + 1);
      s[i] = window_.lo[i] + static_cast<long>(idx % len);
      idx /= len;
    }
    return s;
  }

  /// Fraction of window configurations matching the pins (0 if inconsistent).
  Rational pinned_measure(const std::vector<Pin>& pins) const {
    if (pins.empty()) throw DomainError("cylinder set must pin at least one coordinate");
    FpMatrix M(0, n_ + 1, p_);
    for (std::size_t r = 0; r < A_.rows(); ++r) {
      std::vector<std::uint32_t> row(n_ + 1, 0);
      for (std::size_t c = 0; c < n_; ++c) row[c] = A_.at(r, c);
      M.append_row(row);
    }
    for (const auto& pin : pins) {
      auto idx = index(pin.site);
      if (!idx) throw DomainError("window too small: pinned site " + site_text(pin.site) + " lies outside " + window_.describe());
      if (pin.value >= p_) throw DomainError("pinned symbol " + std::to_string(pin.value) + " is not in F_" + std::to_string(p_));
      std::vector<std::uint32_t> row(n_ + 1, 0);
      row[*idx] = 1;
      row[n_] = pin.value;
      M.append_row(row);
    }
    auto piv = M.rref();
    if (!piv.empty() && piv.back() == n_) return 0;
    std::size_t extra = piv.size() - rank();
    return Rational(1) / Rational(pow(Integer(static_cast<unsigned long>(p_)), extra));
  }

  bool satisfies(const std::vector<std::uint32_t>& x) const {
    for (std::size_t r = 0; r < A_.rows(); ++r) {
      std::uint64_t s = 0;
      for (std::size_t c = 0; c < n_; ++c) s += static_cast<std::uint64_t>(A_.at(r, c)) * x[c];
      if (s % p_) return false;
    }
    return true;
  }

  /// Linear form of coordinate `idx` over the free variables (index into free list -> coefficient).
  std::vector<std::pair<std::size_t, std::uint32_t>> coordinate_form(std::size_t idx) const {
    std::vector<std::pair<std::size_t, std::uint32_t>> out;
    for (std::size_t f = 0; f < free_.size(); ++f)
      if (free_[f] == idx) return {{f, 1}};
    for (std::size_t i = 0; i < pivots_.size(); ++i)
      if (pivots_[i] == idx) {
        for (std::size_t f = 0; f < free_.size(); ++f)
          if (std::uint32_t v = R_.at(i, free_[f])) out.emplace_back(f, static_cast<std::uint32_t>((p_ - v) % p_));
        return out;
      }
    return out;
  }

  std::size_t free_count() const { return free_.size(); }

  /// Full configuration from free-variable values.
  std::vector<std::uint32_t> complete(const std::vector<std::uint32_t>& free_values) const {
    std::vector<std::uint32_t> x(n_, 0);
    for (std::size_t f = 0; f < free_.size(); ++f) x[free_[f]] = free_values[f];
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
      std::uint64_t s = 0;
      for (std::size_t f = 0; f < free_.size(); ++f) s += static_cast<std::uint64_t>(R_.at(i, free_[f])) * free_values[f];
      x[pivots_[i]] = static_cast<std::uint32_t>((p_ - s % p_) % p_);
    }
    return x;
  }

  static std::string site_text(const Site& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
    return out + ")";
  }

private:
  SearchBox window_;
  std::uint64_t p_ = 2;
  std::size_t n_ = 0;
  FpMatrix A_{0, 0, 2};
  FpMatrix R_{0, 0, 2};
  std::vector<std::size_t> pivots_;
  std::vector<std::size_t> free_;
};

/// Uniform samples: block b of size kSampleBlock uses stream b of the seed.
inline std::vector<std::vector<std::uint32_t>> sample_uniform(const WindowConfigSpace& W, std::size_t count, std::uint64_t seed,
                                                              unsigned threads = 1) {
  std::vector<std::vector<std::uint32_t>> out(count);
  const std::size_t blocks = (count + kSampleBlock - 1) / kSampleBlock;
  detail::parallel_for(blocks, std::max(1u, threads), [&](std::size_t b, unsigned) {
    CounterRng rng(seed, b);
    for (std::size_t i = b * kSampleBlock; i < std::min(count, (b + 1) * kSampleBlock); ++i) {
      std::vector<std::uint32_t> free(W.free_count());
      for (auto& v : free) v = static_cast<std::uint32_t>(rng.below(W.p()));
      out[i] = W.complete(free);
    }
  });
  return out;
}

struct MeasureReport {
  Rational value;
  Rational larger_value;  // same quantity on the window grown by one site per side
  bool stable = false;
  SearchBox window, larger_window;
};

namespace detail {
inline SearchBox grown(const SearchBox& b) {
  SearchBox g = b;
  for (std::size_t i = 0; i < g.dim(); ++i) {
    --g.lo[i];
    ++g.hi[i];
  }
  return g;
}

inline std::vector<Pin> shifted_pins(const std::vector<CylinderSet>& sets, const std::vector<GroupElement>& shifts) {
  if (sets.empty()) throw DomainError("no cylinder sets given");
  if (sets.size() != shifts.size() && sets.size() != 1)
    throw DomainError("got " + std::to_string(sets.size()) + " sets for " + std::to_string(shifts.size()) + " shifts");
  std::vector<Pin> pins;
  for (std::size_t s = 0; s < shifts.size(); ++s) {
    const auto& C = sets.size() == 1 ? sets.front() : sets[s];
    if (C.empty()) throw DomainError("cylinder set must pin at least one coordinate");
    for (const auto& pin : C) {
      if (pin.site.size() != shifts[s].size()) throw DomainError("site and shift dimensions differ");
      if (!shifts[s].is_integral()) throw DomainError("shifts must be integral for simulation");
      Pin q = pin;
      for (std::size_t i = 0; i < q.site.size(); ++i) q.site[i] += shifts[s][i].get_num().get_si();
      pins.push_back(std::move(q));
    }
  }
  return pins;
}
}  // namespace detail

inline MeasureReport cylinder_measure(const AlgebraicSystem& S, const CylinderSet& C, const SearchBox& window) {
  MeasureReport rep;
  rep.window = window;
  rep.larger_window = detail::grown(window);
  rep.value = WindowConfigSpace(S, window).pinned_measure(C);
  rep.larger_value = WindowConfigSpace(S, rep.larger_window).pinned_measure(C);
  rep.stable = rep.value == rep.larger_value;
  return rep;
}

/// Measure of the intersection of the shifted cylinders alpha_{gamma_s} A_s.
inline MeasureReport correlation_exact(const AlgebraicSystem& S, const std::vector<CylinderSet>& sets,
                                       const std::vector<GroupElement>& shifts, const SearchBox& window) {
  return cylinder_measure(S, detail::shifted_pins(sets, shifts), window);
}

/// Product of the individual cylinder measures.
inline Rational product_measure(const AlgebraicSystem& S, const std::vector<CylinderSet>& sets, std::size_t count,
                                const SearchBox& window) {
  Rational prod = 1;
  for (std::size_t s = 0; s < count; ++s) {
    const auto& C = sets.size() == 1 ? sets.front() : sets[s];
    prod *= WindowConfigSpace(S, window).pinned_measure(C);
  }
  return prod;
}

struct Estimate {
  double value = 0;
  double stderr_ = 0;
  std::size_t samples = 0;
  std::size_t hits = 0;
  std::uint64_t seed = 0;
  SearchBox window;
  std::string generator = "splitmix64-counter";
  std::optional<Rational> exact;
};

inline Estimate correlation_estimate(const AlgebraicSystem& S, const std::vector<CylinderSet>& sets,
                                     const std::vector<GroupElement>& shifts, const SearchBox& window, std::size_t N,
                                     std::uint64_t seed, unsigned threads = 1) {
  if (N == 0) throw DomainError("sample count must be positive");
  WindowConfigSpace W(S, window);
  auto pins = detail::shifted_pins(sets, shifts);
  std::vector<std::vector<std::pair<std::size_t, std::uint32_t>>> forms;
  for (const auto& pin : pins) {
    auto idx = W.index(pin.site);
    if (!idx) throw DomainError("window too small: pinned site " + WindowConfigSpace::site_text(pin.site) + " lies outside " + window.describe());
    forms.push_back(W.coordinate_form(*idx));
  }
  const std::size_t blocks = (N + kSampleBlock - 1) / kSampleBlock;
  std::vector<std::size_t> hits(blocks, 0);
  detail::parallel_for(blocks, std::max(1u, threads), [&](std::size_t b, unsigned) {
    CounterRng rng(seed, b);
    std::vector<std::uint32_t> free(W.free_count());
    for (std::size_t i = b * kSampleBlock; i < std::min(N, (b + 1) * kSampleBlock); ++i) {
      for (auto& v : free) v = static_cast<std::uint32_t>(rng.below(W.p()));
      bool all = true;
      for (std::size_t k = 0; k < pins.size() && all; ++k) {
        std::uint64_t s = 0;
        for (const auto& [f, c] : forms[k]) s += static_cast<std::uint64_t>(c) * free[f];
        all = s % W.p() == pins[k].value;
      }
      hits[b] += all;
    }
  });
  Estimate e;
  e.samples = N;
  for (auto h : hits) e.hits += h;
  e.seed = seed;
  e.window = window;
  e.value = static_cast<double>(e.hits) / static_cast<double>(N);
  e.stderr_ = std::sqrt(e.value * (1 - e.value) / static_cast<double>(N));
  return e;
}

/// Text grid: for d = 2 one row per second coordinate (top = largest), for
/// d = 1 a single row, otherwise one "site value" line per coordinate.
inline std::string to_text_grid(const WindowConfigSpace& W, const std::vector<std::uint32_t>& x) {
  std::ostringstream os;
  const auto& b = W.window();
  if (b.dim() == 2) {
    for (long y = b.hi[1]; y >= b.lo[1]; --y) {
      for (long xx = b.lo[0]; xx <= b.hi[0]; ++xx) {
        if (xx > b.lo[0]) os << ' ';
        os << x[*W.index({xx, y})];
      }
      os << '\n';
    }
  } else if (b.dim() == 1) {
    for (long t = b.lo[0]; t <= b.hi[0]; ++t) os << (t > b.lo[0] ? " " : "") << x[*W.index({t})];
    os << '\n';
  } else {
    for (std::size_t i = 0; i < W.sites(); ++i) os << WindowConfigSpace::site_text(W.site(i)) << ' ' << x[i] << '\n';
  }
  return os.str();
}

}  // namespace algmix
