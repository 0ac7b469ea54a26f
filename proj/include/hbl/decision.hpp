#pragma once

// Exact computation of the HBL exponent polytope and the recursive
// membership oracle that certifies its extreme points.
//
// compute_polytope runs the outer-approximation loop: P_N is cut out by the
// rank inequalities of the first N enumerated subspaces; once every extreme
// point of P_N is certified a member, P_N is the polytope.  Membership is
// decided by reduction: a zero exponent drops its map, a unit exponent
// restricts to that map's kernel, and an interior point splits the datum
// through a critical subspace into a restriction and a quotient of strictly
// smaller dimension.

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hbl/datum.hpp"
#include "hbl/enumerate.hpp"
#include "hbl/errors.hpp"
#include "hbl/linalg.hpp"
#include "hbl/polytope.hpp"
#include "hbl/rational.hpp"

namespace hbl {

/// One reduction step of a membership proof (or refutation).
struct TraceNode {
  enum class Kind {
    ambient0,   ///< zero-dimensional ambient space: always a member
    base_m1,    ///< single map: decided against base_case_rank_one
    one,        ///< s_i = 1: restrict to ker(phi_i), drop map i
    zero,       ///< s_i = 0: drop map i
    split,      ///< critical subspace W: restriction and quotient
    refuted,    ///< supercritical witness found
    contained,  ///< no critical proper subspace; decided by the computed polytope
  };

  Kind kind = Kind::ambient0;
  std::size_t index = 0;  ///< map index (0-based) for `one` and `zero`
  std::vector<Rational> s;
  bool verdict = false;
  std::optional<Subspace> witness;  ///< W for `split`, the violated witness for `refuted`
  std::vector<TraceNode> children;  ///< split: {restriction, quotient}; one/zero: {reduced}
};

using MembershipTrace = TraceNode;

struct Membership {
  bool member = false;
  MembershipTrace trace;
};

struct PolytopeSnapshot {
  std::size_t step = 0;  ///< first N at which P_N took this value
  Polytope polytope;
};

struct PolytopeResult {
  Polytope polytope;
  std::vector<Vertex> vertices;
  std::size_t steps_used = 0;
  std::vector<MembershipTrace> traces;  ///< traces[i] certifies vertices[i]
  std::vector<PolytopeSnapshot> history;  ///< filled when requested
};

/// The subspace budget ran out.  `outer` is the last P_N, a valid outer
/// approximation of the polytope.
class BudgetExhausted : public Error {
 public:
  BudgetExhausted(Polytope outer, std::size_t steps)
      : Error("subspace budget exhausted after " + std::to_string(steps) + " steps"),
        outer_(std::move(outer)),
        steps_(steps) {}

  const Polytope& outer() const { return outer_; }
  std::size_t steps() const { return steps_; }

 private:
  Polytope outer_;
  std::size_t steps_;
};

/// The polytope of a single-map datum: [0,1] when d = 0, {1} when the map is
/// injective, empty otherwise.  The empty case is witnessed by the kernel
/// (0 * s_1 >= dim ker).
inline Polytope base_case_rank_one(const HblDatum& d) {
  if (d.num_maps() != 1) throw PreconditionError("base_case_rank_one needs exactly one map");
  Polytope p(1);
  if (d.ambient_dim() == 0) return p;
  const Subspace kernel = kernel_subspace(d.map(0));
  if (kernel.is_zero()) {
    p.add_rank_constraint(RankTuple{d.ambient_dim(), {d.ambient_dim()}},
                          Subspace::full(d.ambient_dim()));
  } else {
    p.add_rank_constraint(RankTuple{kernel.dim(), {0}}, kernel);
  }
  return p;
}

/// Adds the rank constraint of W ∩ ker(phi_j) for every witness W and every
/// j, repeatedly.  The added constraints are genuine, so the polytope inside
/// the box is unchanged; the point is that the list then stays valid under
/// clamping: if s >= 0 satisfies every listed inequality, so does
/// min(s, 1), by induction on dim W.
inline void close_under_kernels(const HblDatum& d, Polytope& p) {
  std::vector<Subspace> kernels;
  for (const auto& m : d.maps()) kernels.push_back(kernel_subspace(m));
  std::set<Subspace> seen;
  std::vector<Subspace> work;
  for (const auto& ineq : p.inequalities())
    if (ineq.witness && seen.insert(*ineq.witness).second) work.push_back(*ineq.witness);
  while (!work.empty()) {
    const Subspace w = std::move(work.back());
    work.pop_back();
    for (const auto& k : kernels) {
      Subspace cut = sum_and_intersection(w, k).intersection;
      if (cut.is_zero() || !seen.insert(cut).second) continue;
      p.add_rank_constraint(rank_tuple(d, cut), cut);
      work.push_back(std::move(cut));
    }
  }
}

struct DecisionOptions {
  std::optional<std::size_t> budget;  ///< bound on N for every polytope computation
  bool record_history = false;        ///< keep P_N snapshots for the top-level call
};

/// Runs the decision procedure with a memo of computed polytopes keyed by
/// the exact serialization of the datum.  The memo is safe for concurrent
/// use; results do not depend on it.
class Decider {
 public:
  explicit Decider(DecisionOptions options = {}) : options_(options) {}

  PolytopeResult compute_polytope(const HblDatum& d) {
    if (options_.record_history) return compute(d, true);
    return *cached(d);
  }

  Membership is_member(const HblDatum& d, std::span<const Rational> s) {
    require_unit_exponents(s, d.num_maps());
    return member(d, s, nullptr);
  }

  /// Decides membership through a critical subspace W with 0 < dim W < d:
  /// s is in P(D) iff it lies in both P(D restricted to W) and P(D / W).
  bool member_with_critical(const HblDatum& d, std::span<const Rational> s, const Subspace& w) {
    require_unit_exponents(s, d.num_maps());
    require_same_ambient(d, w, "member_with_critical");
    if (w.is_zero() || w.is_full()) {
      throw PreconditionError("member_with_critical: W must be a nonzero proper subspace");
    }
    if (classify(d, w, s) != Criticality::critical) {
      throw PreconditionError("member_with_critical: W is not critical for s");
    }
    const auto restricted = cached(restrict_datum(d, w));
    if (!contains(restricted->polytope, s)) return false;
    const auto quotient = cached(quotient_datum(d, w));
    return contains(quotient->polytope, s);
  }

 private:
  std::shared_ptr<const PolytopeResult> cached(const HblDatum& d) {
    const std::string key = d.key();
    {
      std::lock_guard lock(memo_mutex_);
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    auto result = std::make_shared<const PolytopeResult>(compute(d, false));
    std::lock_guard lock(memo_mutex_);
    return memo_.emplace(key, std::move(result)).first->second;
  }

  PolytopeResult compute(const HblDatum& d, bool record_history) {
    PolytopeResult result;
    if (d.num_maps() == 1) {
      result.polytope = base_case_rank_one(d);
      close_under_kernels(d, result.polytope);
      finish(d, result, nullptr);
      return result;
    }

    auto& subspaces = shared_enumerator(d.ambient_dim());
    const detail::SmallMaps small(d);
    Polytope current(d.num_maps());
    std::map<std::vector<Rational>, Membership, detail::LexLess> checked;
    bool changed = true;

    for (std::size_t n = 1;; ++n) {
      if (options_.budget && n > *options_.budget) throw BudgetExhausted(current, n - 1);
      if (!subspaces.ensure(n)) {
        throw std::logic_error("subspace enumeration exhausted before the polytope stabilized");
      }
      const SpanItem item = subspaces.item(n - 1);
      if (item.dim > 0) {
        auto tuple = small.rank_tuple(item.rows, item.dim);
        std::optional<Subspace> w;
        if (!tuple) {
          w = to_subspace(item, d.ambient_dim());
          tuple = rank_tuple(d, *w);
        }
        Inequality ineq;
        for (auto r : tuple->r_sub) ineq.coeffs.emplace_back(static_cast<unsigned long>(r));
        ineq.rhs = static_cast<unsigned long>(tuple->r);
        bool fresh = true;
        for (const auto& have : current.inequalities()) fresh = fresh && !have.same_constraint(ineq);
        if (fresh) {
          ineq.witness = w ? std::move(w) : to_subspace(item, d.ambient_dim());
          current.add(std::move(ineq));
          changed = true;
        }
      }
      // P_N equals P_{N-1}, which already failed the test.
      if (!changed) continue;
      changed = false;
      if (record_history) result.history.push_back({n, current});

      const auto vertices = extreme_points(current);
      bool all_members = true;
      try {
        for (const auto& v : vertices) {
          auto it = checked.find(v.point);
          if (it == checked.end()) it = checked.emplace(v.point, member(d, v.point, &current)).first;
          if (!it->second.member) {
            all_members = false;
            break;
          }
        }
      } catch (const BudgetExhausted&) {
        throw BudgetExhausted(current, n);
      }
      if (all_members) {
        result.polytope = current;
        close_under_kernels(d, result.polytope);
        // Same points; the active sets now include the added constraints.
        result.vertices = extreme_points(result.polytope);
        result.steps_used = n;
        for (const auto& v : result.vertices) result.traces.push_back(checked.at(v.point).trace);
        return result;
      }
    }
  }

  void finish(const HblDatum& d, PolytopeResult& result, const Polytope* candidates) {
    result.vertices = extreme_points(result.polytope);
    for (const auto& v : result.vertices) result.traces.push_back(member(d, v.point, candidates).trace);
  }

  /// Membership with the fixed dispatch order: ambient 0, single map, a unit
  /// exponent, a zero exponent, interior.  For interior points the
  /// inequalities of `candidates` (P_N inside the main loop) are scanned in
  /// enumeration order; with no candidates the datum's own polytope is used.
  Membership member(const HblDatum& d, std::span<const Rational> s, const Polytope* candidates) {
    Membership out;
    TraceNode& node = out.trace;
    node.s.assign(s.begin(), s.end());

    if (d.ambient_dim() == 0) {
      node.kind = TraceNode::Kind::ambient0;
      node.verdict = out.member = true;
      return out;
    }
    if (d.num_maps() == 1) {
      node.kind = TraceNode::Kind::base_m1;
      node.verdict = out.member = contains(base_case_rank_one(d), s);
      return out;
    }
    for (TraceNode::Kind kind : {TraceNode::Kind::one, TraceNode::Kind::zero}) {
      const int target = kind == TraceNode::Kind::one ? 1 : 0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != target) continue;
        const HblDatum reduced =
            kind == TraceNode::Kind::one ? restrict_to_kernel_datum(d, i) : delete_index(d, i);
        const auto hat = without_index(s, i);
        Membership child = member(reduced, hat, nullptr);
        node.kind = kind;
        node.index = i;
        node.verdict = out.member = child.member;
        node.children.push_back(std::move(child.trace));
        return out;
      }
    }

    std::shared_ptr<const PolytopeResult> own;
    if (!candidates) {
      own = cached(d);
      candidates = &own->polytope;
    }
    const auto dim = static_cast<unsigned long>(d.ambient_dim());
    for (const auto& ineq : candidates->inequalities()) {
      if (!ineq.holds(s)) {
        if (!own) throw std::logic_error("vertex of P_N violates one of its own inequalities");
        node.kind = TraceNode::Kind::refuted;
        node.witness = ineq.witness;
        node.verdict = out.member = false;
        return out;
      }
      if (ineq.tight(s) && sgn(ineq.rhs) > 0 && ineq.rhs < dim) {
        const Subspace& w = *ineq.witness;
        const bool verdict = member_with_critical(d, s, w);
        Membership restricted = member(restrict_datum(d, w), s, nullptr);
        Membership quotient = member(quotient_datum(d, w), s, nullptr);
        if ((restricted.member && quotient.member) != verdict) {
          throw std::logic_error("factor memberships disagree with the factor polytopes");
        }
        node.kind = TraceNode::Kind::split;
        node.witness = w;
        node.verdict = out.member = verdict;
        node.children.push_back(std::move(restricted.trace));
        node.children.push_back(std::move(quotient.trace));
        return out;
      }
    }
    if (!own) throw std::logic_error("interior vertex of P_N has no critical proper subspace");
    node.kind = TraceNode::Kind::contained;
    node.verdict = out.member = true;
    return out;
  }

  DecisionOptions options_;
  std::mutex memo_mutex_;
  std::unordered_map<std::string, std::shared_ptr<const PolytopeResult>> memo_;
};

/// The polytope of `d` with witnesses, extreme points and per-vertex
/// membership certificates.  Without a budget this always terminates.
inline PolytopeResult compute_polytope(const HblDatum& d,
                                       std::optional<std::size_t> budget = std::nullopt) {
  Decider decider({budget, false});
  return decider.compute_polytope(d);
}

inline Membership is_member(const HblDatum& d, std::span<const Rational> s) {
  Decider decider;
  return decider.is_member(d, s);
}

inline bool member_with_critical(const HblDatum& d, std::span<const Rational> s,
                                 const Subspace& w) {
  Decider decider;
  return decider.member_with_critical(d, s, w);
}

}  // namespace hbl
