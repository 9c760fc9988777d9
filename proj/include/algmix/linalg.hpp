#pragma once

// Dense Gaussian elimination over F_p (p < 2^31) and over Q. Used for kernel
// searches (coefficient systems of non-mixing shapes) and for rank counting
// on finite configuration windows.

#include <algmix/numeric.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace algmix {

class FpMatrix {
public:
  FpMatrix(std::size_t rows, std::size_t cols, std::uint64_t p) : rows_(rows), cols_(cols), p_(p), data_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint64_t p() const { return p_; }

  std::uint32_t& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::uint32_t at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  void append_row(const std::vector<std::uint32_t>& row) {
    data_.insert(data_.end(), row.begin(), row.end());
    ++rows_;
  }

  /// In-place reduced row echelon form; returns pivot columns.
  std::vector<std::size_t> rref() {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
      std::size_t piv = r;
      while (piv < rows_ && at(piv, c) == 0) ++piv;
      if (piv == rows_) continue;
      if (piv != r)
        for (std::size_t k = 0; k < cols_; ++k) std::swap(at(piv, k), at(r, k));
      const std::uint64_t inv = mod_inv(at(r, c), p_);
      for (std::size_t k = c; k < cols_; ++k) at(r, k) = static_cast<std::uint32_t>(mod_mul(at(r, k), inv, p_));
      for (std::size_t i = 0; i < rows_; ++i) {
        if (i == r || at(i, c) == 0) continue;
        const std::uint64_t f = at(i, c);
        for (std::size_t k = c; k < cols_; ++k) {
          if (at(r, k) == 0) continue;
          at(i, k) = static_cast<std::uint32_t>((at(i, k) + p_ - mod_mul(f, at(r, k), p_)) % p_);
        }
      }
      pivots.push_back(c);
      ++r;
    }
    return pivots;
  }

  std::size_t rank() const {
    FpMatrix copy = *this;
    return copy.rref().size();
  }

  /// Basis of the right kernel {x : A x = 0}.
  std::vector<std::vector<std::uint32_t>> kernel() const {
    FpMatrix m = *this;
    auto pivots = m.rref();
    std::vector<bool> is_pivot(cols_, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<std::uint32_t>> basis;
    for (std::size_t free = 0; free < cols_; ++free) {
      if (is_pivot[free]) continue;
      std::vector<std::uint32_t> v(cols_, 0);
      v[free] = 1;
      for (std::size_t i = 0; i < pivots.size(); ++i)
        v[pivots[i]] = static_cast<std::uint32_t>((p_ - m.at(i, free)) % p_);
      basis.push_back(std::move(v));
    }
    return basis;
  }

private:
  std::size_t rows_, cols_;
  std::uint64_t p_;
  std::vector<std::uint32_t> data_;
};

/// Right kernel of a dense rational matrix (row-major), by exact elimination.
inline std::vector<std::vector<Rational>> rational_kernel(std::vector<std::vector<Rational>> m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  const std::size_t rows = m.size();
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    Rational inv = 1 / m[r][c];
    for (std::size_t k = c; k < cols; ++k) m[r][k] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace algmix
