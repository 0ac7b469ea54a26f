#pragma once

// HBL data: rank tuples, criticality, and the datum surgery used by the
// decision procedure (restriction, quotient, index deletion).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hbl/errors.hpp"
#include "hbl/linalg.hpp"
#include "hbl/matrix.hpp"
#include "hbl/rational.hpp"
#include "hbl/small_int.hpp"

namespace hbl {

/// Exponents s_1..s_m.  Components must be nonnegative; values above one
/// are accepted by clamp_exponents() and raw inequality evaluation only.
using ExponentTuple = std::vector<Rational>;

/// An ambient space Q^d together with linear maps phi_j : Q^d -> Q^{d_j},
/// each stored as a d_j x d matrix.  Data read from files have integer
/// entries; data produced by restriction and quotient may be rational.
class HblDatum {
 public:
  HblDatum() = default;

  HblDatum(std::size_t ambient_dim, std::vector<RationalMatrix> maps)
      : ambient_dim_(ambient_dim), maps_(std::move(maps)) {
    if (maps_.empty()) throw PreconditionError("an HBL datum needs at least one map");
    for (std::size_t j = 0; j < maps_.size(); ++j) {
      if (maps_[j].cols() != ambient_dim_) {
        throw AmbientMismatch("map " + std::to_string(j + 1) + " has " +
                              std::to_string(maps_[j].cols()) + " columns, expected " +
                              std::to_string(ambient_dim_));
      }
    }
  }

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t num_maps() const { return maps_.size(); }
  const RationalMatrix& map(std::size_t j) const { return maps_.at(j); }
  const std::vector<RationalMatrix>& maps() const { return maps_; }

  bool is_integral() const {
    for (const auto& m : maps_)
      if (!m.is_integral()) return false;
    return true;
  }

  /// Exact byte serialization; map order is significant.
  std::string key() const {
    std::string k = std::to_string(ambient_dim_);
    for (const auto& m : maps_) {
      k += '|';
      k += std::to_string(m.rows());
      for (const auto& v : m.entries()) {
        k += ',';
        k += v.get_str();
      }
    }
    return k;
  }

  friend bool operator==(const HblDatum& a, const HblDatum& b) {
    return a.ambient_dim_ == b.ambient_dim_ && a.maps_ == b.maps_;
  }

 private:
  std::size_t ambient_dim_ = 0;
  std::vector<RationalMatrix> maps_;
};

/// (dim W; dim phi_1(W), ..., dim phi_m(W)).
struct RankTuple {
  std::size_t r = 0;
  std::vector<std::size_t> r_sub;

  friend bool operator==(const RankTuple&, const RankTuple&) = default;
};

enum class Criticality { strictly_subcritical, critical, supercritical };

inline const char* to_string(Criticality c) {
  switch (c) {
    case Criticality::strictly_subcritical: return "strictly_subcritical";
    case Criticality::critical: return "critical";
    case Criticality::supercritical: return "supercritical";
  }
  return "?";
}

inline void require_same_ambient(const HblDatum& d, const Subspace& w, const char* what) {
  if (w.ambient_dim() != d.ambient_dim()) {
    throw AmbientMismatch(std::string(what) + ": subspace lives in Q^" +
                          std::to_string(w.ambient_dim()) + ", datum in Q^" +
                          std::to_string(d.ambient_dim()));
  }
}

inline RankTuple rank_tuple(const HblDatum& d, const Subspace& w) {
  require_same_ambient(d, w, "rank_tuple");
  RankTuple t;
  t.r = w.dim();
  const RationalMatrix bt = w.basis().transpose();
  for (const auto& m : d.maps()) t.r_sub.push_back(w.dim() == 0 ? 0 : rank(m * bt));
  return t;
}

/// sum_j s_j * r_sub[j]
inline Rational weighted_rank(const RankTuple& t, std::span<const Rational> s) {
  if (s.size() != t.r_sub.size()) throw AmbientMismatch("exponent tuple length differs from map count");
  Rational total = 0;
  for (std::size_t j = 0; j < s.size(); ++j) total += s[j] * static_cast<unsigned long>(t.r_sub[j]);
  return total;
}

inline Criticality classify(const RankTuple& t, std::span<const Rational> s) {
  const int c = cmp(Rational(static_cast<unsigned long>(t.r)), weighted_rank(t, s));
  if (c < 0) return Criticality::strictly_subcritical;
  if (c == 0) return Criticality::critical;
  return Criticality::supercritical;
}

inline Criticality classify(const HblDatum& d, const Subspace& w, std::span<const Rational> s) {
  if (s.size() != d.num_maps()) throw AmbientMismatch("exponent tuple length differs from map count");
  return classify(rank_tuple(d, w), s);
}

/// The datum (W, (phi_j(W)), (phi_j|_W)) in the coordinates of W's basis.
/// Codomains stay Q^{d_j}; only image ranks matter downstream.
inline HblDatum restrict_datum(const HblDatum& d, const Subspace& w) {
  require_same_ambient(d, w, "restrict_datum");
  const RationalMatrix bt = w.basis().transpose();
  std::vector<RationalMatrix> maps;
  maps.reserve(d.num_maps());
  for (const auto& m : d.maps()) maps.push_back(m * bt);
  return HblDatum(w.dim(), std::move(maps));
}

/// The datum (V/W, (V_j/phi_j(W)), ([phi_j])).  Quotient coordinates are the
/// coefficients of the complement vectors chosen by extend_to_full_basis,
/// on both the domain and each codomain.
inline HblDatum quotient_datum(const HblDatum& d, const Subspace& w) {
  require_same_ambient(d, w, "quotient_datum");
  const std::vector<std::size_t> domain_cols = non_pivot_columns(w);
  const RationalMatrix bt = w.basis().transpose();
  std::vector<RationalMatrix> maps;
  maps.reserve(d.num_maps());
  for (const auto& phi : d.maps()) {
    const Subspace image = image_subspace(phi * bt);
    const std::size_t dj = phi.rows();
    const std::size_t k = image.dim();
    // Coordinates of y in the extended basis G are (G^T)^{-1} y; keep the
    // trailing dj - k of them.
    const RationalMatrix g = extend_to_full_basis(image);
    const RationalMatrix on_complement = phi.columns(domain_cols);
    RationalMatrix q(dj - k, domain_cols.size());
    const RationalMatrix gt = g.transpose();
    for (std::size_t c = 0; c < domain_cols.size(); ++c) {
      std::vector<Rational> y(dj);
      for (std::size_t i = 0; i < dj; ++i) y[i] = on_complement(i, c);
      const auto coords = solve_square(gt, y);
      if (!coords) throw Error("quotient_datum: extended codomain basis is singular");
      for (std::size_t i = k; i < dj; ++i) q(i - k, c) = (*coords)[i];
    }
    maps.push_back(std::move(q));
  }
  return HblDatum(domain_cols.size(), std::move(maps));
}

inline void require_map_index(const HblDatum& d, std::size_t i, const char* what) {
  if (i >= d.num_maps()) {
    throw PreconditionError(std::string(what) + ": map index " + std::to_string(i + 1) +
                            " out of range 1.." + std::to_string(d.num_maps()));
  }
  if (d.num_maps() < 2) {
    throw PreconditionError(std::string(what) + ": a datum with one map cannot lose it");
  }
}

/// Removes map i (0-based).
inline HblDatum delete_index(const HblDatum& d, std::size_t i) {
  require_map_index(d, i, "delete_index");
  std::vector<RationalMatrix> maps;
  for (std::size_t j = 0; j < d.num_maps(); ++j)
    if (j != i) maps.push_back(d.map(j));
  return HblDatum(d.ambient_dim(), std::move(maps));
}

/// Restriction to ker(phi_i) followed by deletion of map i (0-based).
inline HblDatum restrict_to_kernel_datum(const HblDatum& d, std::size_t i) {
  require_map_index(d, i, "restrict_to_kernel_datum");
  return delete_index(restrict_datum(d, kernel_subspace(d.map(i))), i);
}

template <typename T>
std::vector<T> without_index(std::span<const T> v, std::size_t i) {
  std::vector<T> out;
  out.reserve(v.size() ? v.size() - 1 : 0);
  for (std::size_t j = 0; j < v.size(); ++j)
    if (j != i) out.push_back(v[j]);
  return out;
}

/// t_j = min(s_j, 1).
inline ExponentTuple clamp_exponents(std::span<const Rational> s) {
  ExponentTuple t;
  t.reserve(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (sgn(s[j]) < 0) {
      throw PreconditionError("exponent " + std::to_string(j + 1) + " is negative: " + to_string(s[j]));
    }
    t.push_back(s[j] > 1 ? Rational(1) : s[j]);
  }
  return t;
}

/// Throws unless s has length m and every component lies in [0, 1].
inline void require_unit_exponents(std::span<const Rational> s, std::size_t m) {
  if (s.size() != m) {
    throw AmbientMismatch("exponent tuple has " + std::to_string(s.size()) +
                          " components, datum has " + std::to_string(m) + " maps");
  }
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (sgn(s[j]) < 0 || s[j] > 1) {
      throw PreconditionError("exponent " + std::to_string(j + 1) + " = " + to_string(s[j]) +
                              " lies outside [0,1]");
    }
  }
}

namespace detail {

/// Integer row-scaled copies of a datum's maps for the fast rank path.
/// Scaling a row by a nonzero constant leaves every image rank unchanged.
class SmallMaps {
 public:
  explicit SmallMaps(const HblDatum& d) : ambient_(d.ambient_dim()) {
    for (const auto& m : d.maps()) {
      std::vector<std::int64_t> rows;
      rows.reserve(m.rows() * m.cols());
      for (std::size_t i = 0; i < m.rows() && ok_; ++i) {
        const Integer scale = common_denominator(m.row(i));
        for (std::size_t j = 0; j < m.cols(); ++j) {
          const Rational scaled = m(i, j) * scale;
          const Integer num = scaled.get_num();
          if (!num.fits_slong_p() || !fits(num.get_si())) {
            ok_ = false;
            break;
          }
          rows.push_back(num.get_si());
        }
      }
      rows_.push_back(m.rows());
      maps_.push_back(std::move(rows));
    }
  }

  bool ok() const { return ok_; }

  /// Rank tuple of the subspace spanned by `gens` (dim x ambient, int32,
  /// independent rows).  nullopt on overflow.
  std::optional<RankTuple> rank_tuple(std::span<const std::int32_t> gens, std::size_t dim) const {
    if (!ok_) return std::nullopt;
    RankTuple t;
    t.r = dim;
    t.r_sub.reserve(maps_.size());
    for (std::size_t j = 0; j < maps_.size(); ++j) {
      const std::size_t dj = rows_[j];
      if (dim == 0 || dj == 0) {
        t.r_sub.push_back(0);
        continue;
      }
      // Image of the generators: dim x dj.
      std::vector<std::int64_t> img(dim * dj);
      for (std::size_t g = 0; g < dim; ++g) {
        for (std::size_t i = 0; i < dj; ++i) {
          i128 acc = 0;
          for (std::size_t c = 0; c < ambient_; ++c)
            acc += i128(maps_[j][i * ambient_ + c]) * gens[g * ambient_ + c];
          if (!fits(acc)) return std::nullopt;
          img[g * dj + i] = static_cast<std::int64_t>(acc);
        }
      }
      const auto r = int_rank(std::move(img), dim, dj);
      if (!r) return std::nullopt;
      t.r_sub.push_back(*r);
    }
    return t;
  }

 private:
  std::size_t ambient_;
  std::vector<std::vector<std::int64_t>> maps_;
  std::vector<std::size_t> rows_;
  bool ok_ = true;
};

}  // namespace detail

}  // namespace hbl
