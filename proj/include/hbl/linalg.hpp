#pragma once

// Exact rational linear algebra: echelon forms, kernels, images, and the
// canonical Subspace type used throughout the library.

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hbl/errors.hpp"
#include "hbl/matrix.hpp"
#include "hbl/rational.hpp"

namespace hbl {

struct RrefResult {
  RationalMatrix reduced;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

/// Reduced row echelon form by Gauss-Jordan elimination.
inline RrefResult rref(RationalMatrix m) {
  RrefResult out;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(m(p, c)) == 0) ++p;
    if (p == rows) continue;
    if (p != r)
      for (std::size_t j = 0; j < cols; ++j) swap(m(p, j), m(r, j));
    const Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < cols; ++j)
      if (sgn(m(r, j)) != 0) m(r, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      const Rational f = m(i, c);
      for (std::size_t j = c; j < cols; ++j)
        if (sgn(m(r, j)) != 0) m(i, j) -= f * m(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  out.reduced = std::move(m);
  return out;
}

inline std::size_t rank(const RationalMatrix& m) {
  // Eliminate on the smaller orientation.
  if (m.rows() > m.cols()) return rref(m.transpose()).rank;
  return rref(m).rank;
}

/// A subspace of Q^n stored by its reduced row echelon basis (one basis
/// vector per row, no zero rows).  Equal subspaces have identical bases.
class Subspace {
 public:
  Subspace() = default;

  /// The subspace spanned by the rows of `generators`.
  static Subspace span(const RationalMatrix& generators) {
    RrefResult r = rref(generators);
    Subspace s;
    s.ambient_dim_ = generators.cols();
    s.basis_ = r.reduced.row_block(0, r.rank);
    s.pivots_ = std::move(r.pivots);
    return s;
  }

  static Subspace span(const std::vector<std::vector<Rational>>& generators,
                       std::size_t ambient_dim) {
    return span(RationalMatrix::from_rows(generators, ambient_dim));
  }

  static Subspace zero(std::size_t ambient_dim) {
    Subspace s;
    s.ambient_dim_ = ambient_dim;
    s.basis_ = RationalMatrix(0, ambient_dim);
    return s;
  }

  static Subspace full(std::size_t ambient_dim) {
    return span(RationalMatrix::identity(ambient_dim));
  }

  /// Wraps a matrix already in reduced row echelon form without zero rows.
  /// Throws if it is not.
  static Subspace from_canonical_basis(RationalMatrix basis) {
    Subspace s = span(basis);
    if (!(s.basis_ == basis)) throw PreconditionError("basis is not in reduced row echelon form");
    return s;
  }

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t dim() const { return basis_.rows(); }
  const RationalMatrix& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  bool is_zero() const { return dim() == 0; }
  bool is_full() const { return dim() == ambient_dim_; }

  bool contains(std::span<const Rational> v) const {
    if (v.size() != ambient_dim_) throw AmbientMismatch("contains: vector length differs");
    RationalMatrix m = RationalMatrix::stack(basis_, RationalMatrix::from_rows({{v.begin(), v.end()}}, ambient_dim_));
    return rank(m) == dim();
  }

  bool contains(const Subspace& other) const {
    if (other.ambient_dim_ != ambient_dim_) throw AmbientMismatch("contains: ambient dimensions differ");
    return rank(RationalMatrix::stack(basis_, other.basis_)) == dim();
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_dim_ == b.ambient_dim_ && a.basis_ == b.basis_;
  }

  /// Enumeration order: dimension, then lexicographic flattened basis.
  friend bool operator<(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim_ != b.ambient_dim_) return a.ambient_dim_ < b.ambient_dim_;
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    return lex_less(a.basis_.entries(), b.basis_.entries());
  }

 private:
  std::size_t ambient_dim_ = 0;
  RationalMatrix basis_;
  std::vector<std::size_t> pivots_;
};

/// Column space of `m` as a subspace of Q^rows.
inline Subspace image_subspace(const RationalMatrix& m) { return Subspace::span(m.transpose()); }

/// Null space {x : m x = 0} as a subspace of Q^cols.
inline Subspace kernel_subspace(const RationalMatrix& m) {
  const RrefResult r = rref(m);
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (std::size_t p : r.pivots) is_pivot[p] = true;
  RationalMatrix gens(n - r.rank, n);
  std::size_t k = 0;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    gens(k, f) = 1;
    for (std::size_t i = 0; i < r.rank; ++i) gens(k, r.pivots[i]) = -r.reduced(i, f);
    ++k;
  }
  return Subspace::span(gens);
}

struct SumAndIntersection {
  Subspace sum;
  Subspace intersection;
};

/// A + B and A ∩ B.  The intersection is read off the kernel of [A^T | -B^T].
inline SumAndIntersection sum_and_intersection(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw AmbientMismatch("sum_and_intersection: ambient dimensions " +
                          std::to_string(a.ambient_dim()) + " and " +
                          std::to_string(b.ambient_dim()));
  }
  const std::size_t n = a.ambient_dim();
  const std::size_t ka = a.dim();
  const std::size_t kb = b.dim();
  Subspace sum = Subspace::span(RationalMatrix::stack(a.basis(), b.basis()));

  RationalMatrix system(n, ka + kb);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < ka; ++j) system(i, j) = a.basis()(j, i);
    for (std::size_t j = 0; j < kb; ++j) system(i, ka + j) = -b.basis()(j, i);
  }
  const Subspace coeffs = kernel_subspace(system);
  RationalMatrix gens(coeffs.dim(), n);
  for (std::size_t r = 0; r < coeffs.dim(); ++r)
    for (std::size_t j = 0; j < ka; ++j) {
      const Rational& c = coeffs.basis()(r, j);
      if (sgn(c) == 0) continue;
      for (std::size_t i = 0; i < n; ++i) gens(r, i) += c * a.basis()(j, i);
    }
  return {std::move(sum), Subspace::span(gens)};
}

/// Invertible n x n matrix: W's basis rows, then the standard vectors e_c
/// for the non-pivot columns c of W in increasing order.
inline RationalMatrix extend_to_full_basis(const Subspace& w) {
  const std::size_t n = w.ambient_dim();
  RationalMatrix out(n, n);
  for (std::size_t i = 0; i < w.dim(); ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = w.basis()(i, j);
  std::vector<bool> is_pivot(n, false);
  for (std::size_t p : w.pivots()) is_pivot[p] = true;
  std::size_t r = w.dim();
  for (std::size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) out(r++, c) = 1;
  return out;
}

/// The complement columns used by extend_to_full_basis.
inline std::vector<std::size_t> non_pivot_columns(const Subspace& w) {
  std::vector<bool> is_pivot(w.ambient_dim(), false);
  for (std::size_t p : w.pivots()) is_pivot[p] = true;
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < w.ambient_dim(); ++c)
    if (!is_pivot[c]) out.push_back(c);
  return out;
}

/// Unique solution of a x = b, or nullopt when a is singular.
inline std::optional<std::vector<Rational>> solve_square(const RationalMatrix& a,
                                                         std::span<const Rational> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw PreconditionError("solve_square: matrix is not square");
  if (b.size() != n) throw AmbientMismatch("solve_square: right-hand side length differs");
  RationalMatrix aug(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  const RrefResult r = rref(std::move(aug));
  if (r.rank < n || (n > 0 && r.pivots[n - 1] != n - 1)) return std::nullopt;
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = r.reduced(i, n);
  return x;
}

}  // namespace hbl
