#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "hbl/errors.hpp"
#include "hbl/rational.hpp"

namespace hbl {

/// Dense row-major matrix of exact rationals.  Zero-row and zero-column
/// shapes are valid (maps into or out of the zero space).
class RationalMatrix {
 public:
  RationalMatrix() = default;

  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}

  /// Rows given as nested lists; every row must have `cols` entries.
  static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows,
                                  std::size_t cols) {
    RationalMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) {
        throw PreconditionError("row " + std::to_string(i) + " has " +
                                std::to_string(rows[i].size()) + " entries, expected " +
                                std::to_string(cols));
      }
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  /// Integer convenience constructor for tests and examples.
  static RationalMatrix from_ints(std::initializer_list<std::initializer_list<long>> rows) {
    const std::size_t cols = rows.size() ? rows.begin()->size() : 0;
    RationalMatrix m(rows.size(), cols);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != cols) throw PreconditionError("ragged integer matrix");
      std::size_t j = 0;
      for (long v : row) m(i, j++) = v;
      ++i;
    }
    return m;
  }

  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return entries_.empty(); }

  Rational& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  std::span<Rational> row(std::size_t r) { return {entries_.data() + r * cols_, cols_}; }
  std::span<const Rational> row(std::size_t r) const {
    return {entries_.data() + r * cols_, cols_};
  }

  std::span<const Rational> entries() const { return entries_; }

  RationalMatrix transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Rows [begin, end) as a new matrix.
  RationalMatrix row_block(std::size_t begin, std::size_t end) const {
    RationalMatrix out(end - begin, cols_);
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(i - begin, j) = (*this)(i, j);
    return out;
  }

  /// Selected columns, in the given order.
  RationalMatrix columns(std::span<const std::size_t> which) const {
    RationalMatrix out(rows_, which.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < which.size(); ++k) out(i, k) = (*this)(i, which[k]);
    return out;
  }

  /// Vertical concatenation; column counts must agree.
  static RationalMatrix stack(const RationalMatrix& top, const RationalMatrix& bottom) {
    if (top.cols() != bottom.cols()) throw AmbientMismatch("stack: column counts differ");
    RationalMatrix out(top.rows() + bottom.rows(), top.cols());
    std::size_t k = 0;
    for (const auto& v : top.entries_) out.entries_[k++] = v;
    for (const auto& v : bottom.entries_) out.entries_[k++] = v;
    return out;
  }

  bool is_integral() const {
    for (const auto& v : entries_)
      if (!is_integer(v)) return false;
    return true;
  }

  bool is_zero() const {
    for (const auto& v : entries_)
      if (sgn(v) != 0) return false;
    return true;
  }

  std::vector<Rational> apply(std::span<const Rational> x) const {
    if (x.size() != cols_) throw AmbientMismatch("apply: vector length differs from column count");
    std::vector<Rational> y(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      Rational acc = 0;
      for (std::size_t j = 0; j < cols_; ++j) {
        const Rational& a = (*this)(i, j);
        if (sgn(a) != 0 && sgn(x[j]) != 0) acc += a * x[j];
      }
      y[i] = acc;
    }
    return y;
  }

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols_ != b.rows_) throw AmbientMismatch("matrix product: inner dimensions differ");
    RationalMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& aik = a(i, k);
        if (sgn(aik) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const Rational& bkj = b(k, j);
          if (sgn(bkj) != 0) c(i, j) += aik * bkj;
        }
      }
    }
    return c;
  }

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> entries_;
};

}  // namespace hbl
