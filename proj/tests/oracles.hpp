#pragma once

// Deliberately naive reference implementations used to check the library.
// Nothing here calls into hbl's linear algebra, enumeration or polytope
// code; the only shared dependency is GMP's rational type.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

using Q = mpq_class;
using Vec = std::vector<Q>;
using Mat = std::vector<Vec>;

/// Row echelon form by textbook elimination; returns the rank and leaves
/// the reduced rows (pivots 1, zeros above and below) in `a`.
inline std::size_t reduce(Mat& a) {
  std::size_t r = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    const Q piv = a[r][c];
    for (auto& x : a[r]) x /= piv;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Q f = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  a.resize(r);
  return r;
}

inline std::size_t rank(Mat a) { return reduce(a); }

/// Canonical key of the row space of `rows` (length-d vectors).
inline std::string span_key(Mat rows, std::size_t d) {
  reduce(rows);
  std::string k = std::to_string(d) + ":";
  for (const auto& r : rows) {
    for (const auto& x : r) k += x.get_str() + ",";
    k += ";";
  }
  return k;
}

inline Mat times_transpose(const Mat& map, const Mat& rows, std::size_t d) {
  // map (dj x d) applied to each row of `rows`: result dim x dj.
  Mat out;
  for (const auto& v : rows) {
    Vec y(map.size());
    for (std::size_t i = 0; i < map.size(); ++i)
      for (std::size_t c = 0; c < d; ++c) y[i] += map[i][c] * v[c];
    out.push_back(std::move(y));
  }
  return out;
}

/// Every subspace of Q^d spanned by integer vectors with entries in
/// [-h, h], by closing {0} under "add one generator".  Each subspace is
/// returned as a list of integer generators.
inline std::vector<Mat> subspaces_of_height(std::size_t d, long h) {
  std::vector<Vec> gens;
  std::vector<long> v(d, -h);
  while (true) {
    bool nonzero = false;
    for (auto x : v) nonzero = nonzero || x != 0;
    if (nonzero) {
      Vec q;
      for (auto x : v) q.emplace_back(x);
      gens.push_back(std::move(q));
    }
    std::size_t i = 0;
    while (i < d && v[i] == h) v[i++] = -h;
    if (i == d) break;
    ++v[i];
  }
  std::map<std::string, Mat> found{{span_key({}, d), {}}};
  std::vector<Mat> frontier{{}};
  while (!frontier.empty()) {
    std::vector<Mat> next;
    for (const auto& s : frontier) {
      for (const auto& g : gens) {
        Mat t = s;
        t.push_back(g);
        if (rank(t) != t.size()) continue;
        auto key = span_key(t, d);
        if (found.emplace(key, t).second) next.push_back(t);
      }
    }
    frontier = std::move(next);
  }
  std::vector<Mat> out;
  for (auto& [k, m] : found) out.push_back(m);
  return out;
}

struct Ineq {
  std::vector<long> coeffs;
  long rhs = 0;
  friend bool operator<(const Ineq& a, const Ineq& b) {
    return std::tie(a.coeffs, a.rhs) < std::tie(b.coeffs, b.rhs);
  }
  friend bool operator==(const Ineq&, const Ineq&) = default;
};

/// Rank inequalities (dim W; dim phi_j(W)) of every height-h subspace,
/// dropping the trivial one from W = 0.
inline std::vector<Ineq> constraints_of_height(const std::vector<Mat>& maps, std::size_t d, long h) {
  std::set<Ineq> out;
  for (const auto& w : subspaces_of_height(d, h)) {
    if (w.empty()) continue;
    Ineq in;
    in.rhs = static_cast<long>(w.size());
    for (const auto& m : maps) in.coeffs.push_back(static_cast<long>(rank(times_transpose(m, w, d))));
    out.insert(in);
  }
  return {out.begin(), out.end()};
}

/// Solves a square system by elimination; false when singular.
inline bool solve(Mat a, Vec b, Vec& x) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return false;
    std::swap(a[p], a[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      const Q f = a[i][c] / a[c][c];
      for (std::size_t j = c; j <= n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  x.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
  return true;
}

inline bool feasible(const std::vector<Ineq>& ineqs, const Vec& s) {
  for (const auto& x : s)
    if (x < 0 || x > 1) return false;
  for (const auto& in : ineqs) {
    Q lhs = 0;
    for (std::size_t j = 0; j < s.size(); ++j) lhs += in.coeffs[j] * s[j];
    if (lhs < in.rhs) return false;
  }
  return true;
}

/// Vertices of {s in [0,1]^m : ineqs} by trying every m-subset of the
/// hyperplanes, sorted lexicographically.
inline std::vector<Vec> vertices(const std::vector<Ineq>& ineqs, std::size_t m) {
  Mat normals;
  Vec rhs;
  for (const auto& in : ineqs) {
    Vec n;
    for (auto c : in.coeffs) n.emplace_back(c);
    normals.push_back(n);
    rhs.emplace_back(in.rhs);
  }
  for (std::size_t j = 0; j < m; ++j) {
    Vec lo(m, 0), hi(m, 0);
    lo[j] = 1;
    hi[j] = 1;
    normals.push_back(lo);
    rhs.emplace_back(0);
    normals.push_back(hi);
    rhs.emplace_back(1);
  }
  std::set<Vec> found;
  const std::size_t total = normals.size();
  std::vector<bool> pick(total, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(std::min(m, total)), true);
  if (m == 0) {
    if (feasible(ineqs, {})) found.insert({});
  } else {
    do {
      Mat a;
      Vec b;
      for (std::size_t i = 0; i < total; ++i)
        if (pick[i]) {
          a.push_back(normals[i]);
          b.push_back(rhs[i]);
        }
      Vec x;
      if (solve(a, b, x) && feasible(ineqs, x)) found.insert(x);
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return {found.begin(), found.end()};
}

/// Whether p is a convex combination of `points` (Caratheodory: some
/// affinely independent subset of at most m+1 points suffices).
inline bool in_hull(const Vec& p, const std::vector<Vec>& points) {
  const std::size_t m = p.size();
  const std::size_t n = points.size();
  for (std::size_t k = 1; k <= std::min(n, m + 1); ++k) {
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
      // Columns: chosen points with a trailing 1; right side (p, 1).
      Mat aug(m + 1, Vec(k + 1));
      std::size_t col = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!pick[i]) continue;
        for (std::size_t r = 0; r < m; ++r) aug[r][col] = points[i][r];
        aug[m][col] = 1;
        ++col;
      }
      for (std::size_t r = 0; r < m; ++r) aug[r][k] = p[r];
      aug[m][k] = 1;
      Mat red = aug;
      const std::size_t rk = reduce(red);
      Mat coeff_only = aug;
      for (auto& row : coeff_only) row.pop_back();
      if (rank(coeff_only) != k || rk != k) continue;  // dependent or inconsistent
      // Unique solution: row i of the reduction gives lambda_i.
      bool nonneg = true;
      for (std::size_t i = 0; i < k; ++i) nonneg = nonneg && red[i][k] >= 0;
      if (nonneg) return true;
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return false;
}

/// Exhaustive scan for a 2-dimensional V spanned by two integer vectors
/// with entries in [-h, h] such that dim(map_i V) = rho_i for every i.
inline bool dioph_witness_exists(const std::vector<Mat>& maps, const std::vector<std::size_t>& rho,
                                 std::size_t nu, long h) {
  std::vector<Vec> gens;
  std::vector<long> v(nu, -h);
  while (true) {
    long lead = 0;
    for (auto x : v)
      if (lead == 0) lead = x;
    if (lead > 0) {
      Vec q;
      for (auto x : v) q.emplace_back(x);
      gens.push_back(std::move(q));
    }
    std::size_t i = 0;
    while (i < nu && v[i] == h) v[i++] = -h;
    if (i == nu) break;
    ++v[i];
  }
  for (std::size_t a = 0; a < gens.size(); ++a) {
    for (std::size_t b = a + 1; b < gens.size(); ++b) {
      const Mat w{gens[a], gens[b]};
      if (rank(w) != 2) continue;
      bool ok = true;
      for (std::size_t i = 0; i < maps.size() && ok; ++i) ok = rank(times_transpose(maps[i], w, nu)) == rho[i];
      if (ok) return true;
    }
  }
  return false;
}

}  // namespace oracle
