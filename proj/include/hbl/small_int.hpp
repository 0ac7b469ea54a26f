#pragma once

// Overflow-checked int64 elimination for small integer matrices.  Used on
// the hot paths (subspace enumeration, rank tuples); every routine reports
// overflow by returning nullopt so callers can fall back to GMP.

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

namespace hbl::detail {

using i128 = __int128;

inline constexpr std::int64_t kSmallLimit = std::int64_t{1} << 62;

inline bool fits(i128 v) { return v < kSmallLimit && v > -kSmallLimit; }

inline std::int64_t abs64(std::int64_t v) { return v < 0 ? -v : v; }

/// Divides the row by the gcd of its entries.
inline void make_primitive(std::span<std::int64_t> row) {
  std::int64_t g = 0;
  for (auto v : row) g = std::gcd(g, abs64(v));
  if (g > 1)
    for (auto& v : row) v /= g;
}

/// Integer Gauss-Jordan: on success `a` (rows x cols, row-major) holds the
/// nonzero rows first, each primitive with a positive pivot and zeros in
/// every other pivot column.  Returns the pivot columns.  Row i divided by
/// its pivot entry is row i of the reduced row echelon form, so this layout
/// is canonical for the row space.
inline std::optional<std::vector<std::size_t>> int_gauss_jordan(std::vector<std::int64_t>& a,
                                                                std::size_t rows,
                                                                std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  auto at = [&](std::size_t i, std::size_t j) -> std::int64_t& { return a[i * cols + j]; };
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && at(p, c) == 0) ++p;
    if (p == rows) continue;
    if (p != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(at(p, j), at(r, j));
    make_primitive({a.data() + r * cols, cols});
    if (at(r, c) < 0)
      for (std::size_t j = 0; j < cols; ++j) at(r, j) = -at(r, j);
    const std::int64_t piv = at(r, c);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || at(i, c) == 0) continue;
      const std::int64_t f = at(i, c);
      const std::int64_t g = std::gcd(abs64(f), piv);
      const std::int64_t mi = piv / g;
      const std::int64_t mr = f / g;
      for (std::size_t j = 0; j < cols; ++j) {
        const i128 v = i128(at(i, j)) * mi - i128(at(r, j)) * mr;
        if (!fits(v)) return std::nullopt;
        at(i, j) = static_cast<std::int64_t>(v);
      }
      make_primitive({a.data() + i * cols, cols});
    }
    pivots.push_back(c);
    ++r;
  }
  a.resize(r * cols);
  return pivots;
}

/// Rank of an integer matrix, or nullopt on overflow.
inline std::optional<std::size_t> int_rank(std::vector<std::int64_t> a, std::size_t rows,
                                           std::size_t cols) {
  std::size_t r = 0;
  auto at = [&](std::size_t i, std::size_t j) -> std::int64_t& { return a[i * cols + j]; };
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && at(p, c) == 0) ++p;
    if (p == rows) continue;
    if (p != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(at(p, j), at(r, j));
    const std::int64_t piv = at(r, c);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (at(i, c) == 0) continue;
      const std::int64_t f = at(i, c);
      const std::int64_t g = std::gcd(abs64(f), abs64(piv));
      const std::int64_t mi = piv / g;
      const std::int64_t mr = f / g;
      for (std::size_t j = c; j < cols; ++j) {
        const i128 v = i128(at(i, j)) * mi - i128(at(r, j)) * mr;
        if (!fits(v)) return std::nullopt;
        at(i, j) = static_cast<std::int64_t>(v);
      }
      make_primitive({a.data() + i * cols, cols});
    }
    ++r;
  }
  return r;
}

}  // namespace hbl::detail
