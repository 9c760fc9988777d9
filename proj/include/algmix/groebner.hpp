#pragma once

// Buchberger's algorithm over F_p for ordinary (non-Laurent) polynomials.
//
// Variables 0..n-1 are u_1..u_n. An optional trailing block of `elim`
// variables is ordered before everything else (block elimination order),
// which is what the saturation trick needs; inside each block the order is
// graded lexicographic with lower index = larger variable.

#include <algmix/numeric.hpp>

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace algmix::gb {

using Monomial = std::vector<std::uint32_t>;

struct Term {
  Monomial mono;
  std::uint64_t coeff;
  friend bool operator==(const Term&, const Term&) = default;
};

class Order {
public:
  Order() = default;
  Order(std::size_t nvars, std::size_t elim) : nvars_(nvars), elim_(elim) {}

  std::size_t nvars() const { return nvars_; }
  std::size_t elim() const { return elim_; }

  /// Three-way comparison; positive when a > b.
  int compare(const Monomial& a, const Monomial& b) const {
    const std::size_t main = nvars_ - elim_;
    if (int c = compare_block(a, b, main, nvars_)) return c;
    return compare_block(a, b, 0, main);
  }
  bool greater(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }

private:
  static int compare_block(const Monomial& a, const Monomial& b, std::size_t lo, std::size_t hi) {
    std::uint64_t da = 0, db = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      da += a[i];
      db += b[i];
    }
    if (da != db) return da > db ? 1 : -1;
    for (std::size_t i = lo; i < hi; ++i)
      if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
    return 0;
  }

  std::size_t nvars_ = 0;
  std::size_t elim_ = 0;
};

/// Terms sorted strictly descending under the ring's order; coefficients in [1, p).
using Poly = std::vector<Term>;

inline bool divides(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline Monomial lcm(const Monomial& a, const Monomial& b) {
  Monomial r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

inline Monomial quotient(const Monomial& a, const Monomial& b) {
  Monomial r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline std::uint64_t degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), std::uint64_t{0}); }

inline bool coprime(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && b[i]) return false;
  return true;
}

class Ring {
public:
  Ring(std::uint64_t p, Order order) : p_(p), order_(order) {}

  std::uint64_t p() const { return p_; }
  const Order& order() const { return order_; }

  /// Sorts, merges equal monomials, drops zeros.
  Poly normalize(std::vector<Term> terms) const {
    std::sort(terms.begin(), terms.end(), [&](const Term& a, const Term& b) { return order_.greater(a.mono, b.mono); });
    Poly out;
    for (auto& t : terms) {
      t.coeff %= p_;
      if (!out.empty() && out.back().mono == t.mono) {
        out.back().coeff = (out.back().coeff + t.coeff) % p_;
        if (out.back().coeff == 0) out.pop_back();
      } else if (t.coeff != 0) {
        out.push_back(std::move(t));
      }
    }
    return out;
  }

  Poly monic(Poly f) const {
    if (f.empty()) return f;
    std::uint64_t inv = mod_inv(f.front().coeff, p_);
    for (auto& t : f) t.coeff = mod_mul(t.coeff, inv, p_);
    return f;
  }

  /// f - c * x^shift * g, merged in one pass.
  Poly sub_scaled(const Poly& f, std::uint64_t c, const Monomial& shift, const Poly& g) const {
    Poly out;
    out.reserve(f.size() + g.size());
    std::size_t i = 0, j = 0;
    const std::uint64_t neg = (p_ - c % p_) % p_;
    Monomial shifted;
    auto shifted_term = [&](std::size_t k) {
      shifted = g[k].mono;
      for (std::size_t v = 0; v < shifted.size(); ++v) shifted[v] += shift[v];
    };
    if (j < g.size()) shifted_term(j);
    while (i < f.size() || j < g.size()) {
      int cmp;
      if (i == f.size()) cmp = -1;
      else if (j == g.size()) cmp = 1;
      else cmp = order_.compare(f[i].mono, shifted);
      if (cmp > 0) {
        out.push_back(f[i++]);
      } else if (cmp < 0) {
        out.push_back({shifted, mod_mul(neg, g[j].coeff, p_)});
        if (++j < g.size()) shifted_term(j);
      } else {
        std::uint64_t v = (f[i].coeff + mod_mul(neg, g[j].coeff, p_)) % p_;
        if (v) out.push_back({f[i].mono, v});
        ++i;
        if (++j < g.size()) shifted_term(j);
      }
    }
    return out;
  }

  /// Full reduction of f modulo `basis` (remainder has no term divisible by a leading monomial).
  Poly reduce(Poly f, const std::vector<Poly>& basis) const {
    Poly rem;
    while (!f.empty()) {
      const Term lead = f.front();
      const Poly* divisor = nullptr;
      for (const auto& g : basis)
        if (!g.empty() && divides(g.front().mono, lead.mono)) {
          divisor = &g;
          break;
        }
      if (!divisor) {
        rem.push_back(lead);
        f.erase(f.begin());
        continue;
      }
      std::uint64_t c = mod_mul(lead.coeff, mod_inv(divisor->front().coeff, p_), p_);
      f = sub_scaled(f, c, quotient(lead.mono, divisor->front().mono), *divisor);
    }
    return rem;
  }

  Poly s_polynomial(const Poly& f, const Poly& g) const {
    Monomial l = lcm(f.front().mono, g.front().mono);
    // both inputs are monic in the basis
    Poly a = sub_scaled({}, p_ - 1, quotient(l, f.front().mono), f);  // x^(l/f) * f
    return sub_scaled(a, 1, quotient(l, g.front().mono), g);
  }

  /// Reduced Groebner basis of the ideal generated by `gens`.
  std::vector<Poly> buchberger(const std::vector<Poly>& gens) const {
    std::vector<Poly> basis;
    struct Pair {
      std::size_t i, j;
      std::uint64_t deg;
      std::uint64_t seq;
    };
    std::vector<Pair> queue;
    std::uint64_t seq = 0;
    // pair (i,j) with i<j is "done" once popped or discarded
    std::vector<std::vector<bool>> pending;

    auto add_to_basis = [&](Poly g) {
      g = monic(std::move(g));
      std::size_t k = basis.size();
      basis.push_back(std::move(g));
      for (auto& row : pending) row.push_back(false);
      pending.emplace_back(k + 1, false);
      for (std::size_t i = 0; i < k; ++i) {
        if (basis[i].empty()) continue;
        queue.push_back({i, k, degree(lcm(basis[i].front().mono, basis[k].front().mono)), seq++});
        pending[i][k] = pending[k][i] = true;
      }
    };

    for (const auto& g : gens) {
      Poly r = reduce(g, basis);
      if (!r.empty()) add_to_basis(std::move(r));
    }

    while (!queue.empty()) {
      auto best = std::min_element(queue.begin(), queue.end(), [](const Pair& a, const Pair& b) {
        return a.deg != b.deg ? a.deg < b.deg : a.seq < b.seq;
      });
      Pair pr = *best;
      queue.erase(best);
      pending[pr.i][pr.j] = pending[pr.j][pr.i] = false;
      const Poly& f = basis[pr.i];
      const Poly& g = basis[pr.j];
      if (coprime(f.front().mono, g.front().mono)) continue;
      Monomial l = lcm(f.front().mono, g.front().mono);
      bool chain = false;
      for (std::size_t k = 0; k < basis.size() && !chain; ++k) {
        if (k == pr.i || k == pr.j || basis[k].empty()) continue;
        if (divides(basis[k].front().mono, l) && !pending[pr.i][k] && !pending[pr.j][k]) chain = true;
      }
      if (chain) continue;
      Poly r = reduce(s_polynomial(f, g), basis);
      if (!r.empty()) add_to_basis(std::move(r));
    }
    return autoreduce(std::move(basis));
  }

  /// Minimal, fully inter-reduced, monic; sorted by ascending leading monomial.
  std::vector<Poly> autoreduce(std::vector<Poly> basis) const {
    basis.erase(std::remove_if(basis.begin(), basis.end(), [](const Poly& f) { return f.empty(); }), basis.end());
    std::vector<Poly> minimal;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      bool redundant = false;
      for (std::size_t j = 0; j < basis.size() && !redundant; ++j) {
        if (i == j) continue;
        if (divides(basis[j].front().mono, basis[i].front().mono)) {
          // keep the earlier of two equal leading monomials
          redundant = basis[j].front().mono != basis[i].front().mono || j < i;
        }
      }
      if (!redundant) minimal.push_back(basis[i]);
    }
    std::vector<Poly> reduced;
    for (std::size_t i = 0; i < minimal.size(); ++i) {
      std::vector<Poly> others;
      for (std::size_t j = 0; j < minimal.size(); ++j)
        if (j != i) others.push_back(minimal[j]);
      Poly tail(minimal[i].begin() + 1, minimal[i].end());
      Poly r = reduce(tail, others);
      r.insert(r.begin(), minimal[i].front());
      reduced.push_back(monic(std::move(r)));
    }
    std::sort(reduced.begin(), reduced.end(),
              [&](const Poly& a, const Poly& b) { return order_.greater(b.front().mono, a.front().mono); });
    return reduced;
  }

private:
  std::uint64_t p_;
  Order order_;
};

}  // namespace algmix::gb
