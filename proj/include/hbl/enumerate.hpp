#pragma once

// A fixed, prefix-stable, duplicate-free enumeration of all subspaces of Q^d.
//
// Subspaces are produced in blocks of increasing height h = 0, 1, 2, ...:
// block h holds every subspace spanned by integer vectors with entries in
// [-h, h] that no earlier block holds, ordered by dimension and then by the
// lexicographic order of the flattened reduced row echelon basis.  Every
// subspace has an integer spanning set, so every subspace appears.
//
// Items are stored as canonical primitive integer rows (see
// detail::int_gauss_jordan); dividing row i by its pivot entry gives row i
// of the reduced row echelon basis.

#include <algorithm>
#include <climits>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "hbl/errors.hpp"
#include "hbl/linalg.hpp"
#include "hbl/small_int.hpp"

namespace hbl {

/// One enumerated subspace: `dim` primitive integer rows of length d.
struct SpanItem {
  std::size_t dim = 0;
  std::vector<std::int32_t> rows;
};

/// Converts an enumerated item to its canonical rational Subspace.
inline Subspace to_subspace(const SpanItem& item, std::size_t ambient_dim) {
  RationalMatrix basis(item.dim, ambient_dim);
  for (std::size_t i = 0; i < item.dim; ++i) {
    const std::int32_t* row = item.rows.data() + i * ambient_dim;
    std::int32_t pivot = 0;
    for (std::size_t j = 0; j < ambient_dim && pivot == 0; ++j) pivot = row[j];
    for (std::size_t j = 0; j < ambient_dim; ++j)
      if (row[j] != 0) basis(i, j) = make_rational(row[j], pivot);
  }
  return Subspace::from_canonical_basis(std::move(basis));
}

class SubspaceEnumerator {
 public:
  explicit SubspaceEnumerator(std::size_t ambient_dim)
      : d_(ambient_dim), seen_(64, Hash{this}, Equal{this}) {
    by_dim_.resize(d_ + 1);
    append_block({SpanItem{0, {}}});
  }

  SubspaceEnumerator(const SubspaceEnumerator&) = delete;
  SubspaceEnumerator& operator=(const SubspaceEnumerator&) = delete;

  std::size_t ambient_dim() const { return d_; }

  /// Q^0 and Q^1 have finitely many subspaces (1 and 2).
  std::optional<std::size_t> total() const {
    if (d_ == 0) return 1;
    if (d_ == 1) return 2;
    return std::nullopt;
  }

  /// Extends the enumeration to at least n items; false when the space has
  /// fewer than n subspaces.
  bool ensure(std::size_t n) {
    std::lock_guard lock(mutex_);
    return ensure_locked(n);
  }

  /// Number of items in blocks 0..h.
  std::size_t size_through_height(std::size_t h) {
    std::lock_guard lock(mutex_);
    while (block_end_.size() <= h && !exhausted_locked()) build_next_block();
    return h < block_end_.size() ? block_end_[h] : block_end_.back();
  }

  /// Item `index` (0-based).  Throws if the enumeration is shorter.
  SpanItem item(std::size_t index) {
    std::lock_guard lock(mutex_);
    if (!ensure_locked(index + 1)) throw PreconditionError("subspace enumeration exhausted");
    return SpanItem{dims_[index], {pool_.begin() + static_cast<std::ptrdiff_t>(offsets_[index]),
                                   pool_.begin() + static_cast<std::ptrdiff_t>(offsets_[index] + dims_[index] * d_)}};
  }

  /// Height of the block that holds item `index`.
  std::size_t height_of(std::size_t index) {
    std::lock_guard lock(mutex_);
    ensure_locked(index + 1);
    std::size_t h = 0;
    while (block_end_[h] <= index) ++h;
    return h;
  }

  Subspace subspace(std::size_t index) { return to_subspace(item(index), d_); }

 private:
  using Key = std::span<const std::int32_t>;

  struct Hash {
    using is_transparent = void;
    const SubspaceEnumerator* self;
    std::size_t operator()(Key k) const {
      std::size_t h = k.size();
      for (auto v : k) h = h * 1000003u ^ static_cast<std::size_t>(static_cast<std::uint32_t>(v));
      return h;
    }
    std::size_t operator()(std::uint32_t idx) const { return (*this)(self->key(idx)); }
  };

  struct Equal {
    using is_transparent = void;
    const SubspaceEnumerator* self;
    static bool same(Key a, Key b) { return std::equal(a.begin(), a.end(), b.begin(), b.end()); }
    bool operator()(std::uint32_t a, std::uint32_t b) const { return same(self->key(a), self->key(b)); }
    bool operator()(std::uint32_t a, Key b) const { return same(self->key(a), b); }
    bool operator()(Key a, std::uint32_t b) const { return same(a, self->key(b)); }
  };

  struct VecHash {
    std::size_t operator()(const std::vector<std::int32_t>& v) const { return Hash{nullptr}(Key(v)); }
  };

  Key key(std::uint32_t idx) const {
    return {pool_.data() + offsets_[idx], dims_[idx] * d_};
  }

  bool exhausted_locked() const {
    const auto t = total();
    return t && offsets_.size() >= *t;
  }

  bool ensure_locked(std::size_t n) {
    while (offsets_.size() < n) {
      if (exhausted_locked()) return false;
      build_next_block();
    }
    return true;
  }

  /// Lexicographic comparison of the rational echelon bases of two items
  /// of equal dimension.
  bool echelon_less(const SpanItem& a, const SpanItem& b) const {
    if (a.dim != b.dim) return a.dim < b.dim;
    for (std::size_t i = 0; i < a.dim; ++i) {
      const std::int32_t* ra = a.rows.data() + i * d_;
      const std::int32_t* rb = b.rows.data() + i * d_;
      std::int64_t pa = 0, pb = 0;
      for (std::size_t j = 0; j < d_ && pa == 0; ++j) pa = ra[j];
      for (std::size_t j = 0; j < d_ && pb == 0; ++j) pb = rb[j];
      for (std::size_t j = 0; j < d_; ++j) {
        const std::int64_t lhs = std::int64_t{ra[j]} * pb;
        const std::int64_t rhs = std::int64_t{rb[j]} * pa;
        if (lhs != rhs) return lhs < rhs;
      }
    }
    return false;
  }

  void append_block(std::vector<SpanItem> block) {
    std::sort(block.begin(), block.end(),
              [this](const SpanItem& a, const SpanItem& b) { return echelon_less(a, b); });
    for (auto& it : block) {
      const auto idx = static_cast<std::uint32_t>(offsets_.size());
      offsets_.push_back(pool_.size());
      dims_.push_back(it.dim);
      pool_.insert(pool_.end(), it.rows.begin(), it.rows.end());
      seen_.insert(idx);
      by_dim_[it.dim].push_back(idx);
    }
    block_end_.push_back(offsets_.size());
  }

  /// Primitive vectors with max |entry| = h and positive leading entry:
  /// exactly the lines first reached at height h.
  std::vector<std::vector<std::int32_t>> lines_of_height(std::int32_t h) const {
    std::vector<std::vector<std::int32_t>> out;
    std::vector<std::int32_t> v(d_, -h);
    while (true) {
      std::int32_t mx = 0, g = 0, lead = 0;
      for (auto x : v) {
        mx = std::max(mx, x < 0 ? -x : x);
        g = std::gcd(g, x < 0 ? -x : x);
        if (lead == 0) lead = x;
      }
      if (mx == h && g == 1 && lead > 0) out.push_back(v);
      std::size_t i = d_;
      while (i > 0) {
        --i;
        if (v[i] < h) {
          ++v[i];
          break;
        }
        v[i] = -h;
        if (i == 0) return out;
      }
      if (d_ == 0) return out;
    }
  }

  void build_next_block() {
    const auto h = static_cast<std::int32_t>(block_end_.size());
    std::vector<SpanItem> block;
    std::unordered_set<std::vector<std::int32_t>, VecHash> local;

    const auto new_lines = lines_of_height(h);
    for (const auto& l : new_lines) {
      if (seen_.find(Key(l)) != seen_.end()) continue;
      if (local.insert(l).second) block.push_back(SpanItem{1, l});
    }

    // dim k+1 = (any dim-k subspace of height <= h) + (a line first reached at h).
    for (std::size_t k = 1; k + 1 < d_; ++k) {
      std::vector<SpanItem> bases;
      for (auto idx : by_dim_[k]) bases.push_back(SpanItem{k, std::vector<std::int32_t>(key(idx).begin(), key(idx).end())});
      for (const auto& it : block)
        if (it.dim == k) bases.push_back(it);
      std::vector<std::int64_t> work;
      for (const auto& u : bases) {
        for (const auto& l : new_lines) {
          work.assign(u.rows.begin(), u.rows.end());
          work.insert(work.end(), l.begin(), l.end());
          const auto piv = detail::int_gauss_jordan(work, k + 1, d_);
          if (!piv) throw Error("subspace enumeration left the small-integer range");
          if (piv->size() != k + 1) continue;
          std::vector<std::int32_t> canon(work.size());
          for (std::size_t t = 0; t < work.size(); ++t) {
            if (work[t] > INT32_MAX || work[t] < INT32_MIN) {
              throw Error("subspace enumeration left the small-integer range");
            }
            canon[t] = static_cast<std::int32_t>(work[t]);
          }
          if (seen_.find(Key(canon)) != seen_.end()) continue;
          if (local.insert(canon).second) block.push_back(SpanItem{k + 1, std::move(canon)});
        }
      }
    }

    if (h == 1 && d_ >= 2) {
      std::vector<std::int32_t> id(d_ * d_, 0);
      for (std::size_t i = 0; i < d_; ++i) id[i * d_ + i] = 1;
      block.push_back(SpanItem{d_, std::move(id)});
    }
    append_block(std::move(block));
  }

  std::size_t d_;
  std::mutex mutex_;
  std::vector<std::int32_t> pool_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> block_end_;
  std::vector<std::vector<std::uint32_t>> by_dim_;
  std::unordered_set<std::uint32_t, Hash, Equal> seen_;
};

/// Process-wide enumerator for Q^d.  The enumeration is a pure function of
/// d, so sharing it only shares work.
inline SubspaceEnumerator& shared_enumerator(std::size_t d) {
  static std::mutex registry_mutex;
  static std::map<std::size_t, std::unique_ptr<SubspaceEnumerator>> registry;
  std::lock_guard lock(registry_mutex);
  auto& slot = registry[d];
  if (!slot) slot = std::make_unique<SubspaceEnumerator>(d);
  return *slot;
}

/// The first n subspaces of Q^d (fewer when d <= 1 and n exceeds the
/// number of subspaces).
inline std::vector<Subspace> enumerate_subspaces(std::size_t d, std::size_t n) {
  if (n == 0) throw PreconditionError("enumerate_subspaces: n must be at least 1");
  auto& e = shared_enumerator(d);
  e.ensure(n);
  const std::size_t count = e.total() ? std::min(n, *e.total()) : n;
  std::vector<Subspace> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(e.subspace(i));
  return out;
}

}  // namespace hbl
