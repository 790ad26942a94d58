#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mcov/budget.hpp"
#include "mcov/family.hpp"
#include "mcov/flats.hpp"

namespace mcov {

__extension__ typedef unsigned __int128 u128;

inline constexpr std::uint64_t kMaxWeight = std::uint64_t{1} << 62;

/// Flats with a weight base d; weight = sum of d^rank. d = 1 makes the
/// weight the plain count.
struct FlatCover {
  std::vector<Subset> flats;
  std::uint64_t d = 1;
};

struct CoverResult {
  std::uint64_t value = 0;
  FlatCover witness;
};

/// d^e, throwing WeightOverflow beyond 2^62.
inline std::uint64_t checked_pow(std::uint64_t d, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (d != 0 && r > kMaxWeight / d)
      throw Error(Errc::WeightOverflow, std::to_string(d) + "^" + std::to_string(e) + " exceeds 2^62");
    r *= d;
  }
  return r;
}

inline std::uint64_t weight(const MinorView& m, const FlatCover& cover) {
  std::uint64_t total = 0;
  for (Subset f : cover.flats) {
    const std::uint64_t w = checked_pow(cover.d, m.rank(f));
    if (total > kMaxWeight - w) throw Error(Errc::WeightOverflow, "cover weight exceeds 2^62");
    total += w;
  }
  return total;
}

inline bool covers_ground(const MinorView& m, const FlatCover& cover) {
  Subset u;
  for (Subset f : cover.flats) u |= f;
  return m.ground().is_subset_of(u);
}

/// Every member lies inside some flat of the cover.
inline bool covers_family(const FlatCover& cover, const SetFamily& fam) {
  return std::all_of(fam.begin(), fam.end(), [&](Subset x) {
    return std::any_of(cover.flats.begin(), cover.flats.end(),
                       [&](Subset f) { return x.is_subset_of(f); });
  });
}

/// Header line plus one flat per line.
inline std::string serialize_cover(const MinorView& m, const FlatCover& cover) {
  std::ostringstream out;
  out << "cover d=" << cover.d << " weight=" << weight(m, cover) << " count=" << cover.flats.size()
      << '\n';
  for (Subset f : cover.flats) out << to_string(f) << '\n';
  return out.str();
}

namespace detail {

// ---- item masks for the cover kernel -------------------------------------

struct WideMask {
  static constexpr int kWords = 4;
  std::array<std::uint64_t, kWords> w{};

  bool operator==(const WideMask&) const = default;
};

inline bool mask_none(std::uint64_t m) { return m == 0; }
inline int mask_lowest(std::uint64_t m) { return std::countr_zero(m); }
inline int mask_count(std::uint64_t m) { return std::popcount(m); }
inline std::uint64_t mask_minus(std::uint64_t a, std::uint64_t b) { return a & ~b; }
inline void mask_set(std::uint64_t& m, int i) { m |= std::uint64_t{1} << i; }
template <class F>
void mask_for_each(std::uint64_t m, F&& f) {
  for (; m; m &= m - 1) f(std::countr_zero(m));
}

inline bool mask_none(const WideMask& m) {
  for (auto x : m.w)
    if (x) return false;
  return true;
}
inline int mask_lowest(const WideMask& m) {
  for (int i = 0; i < WideMask::kWords; ++i)
    if (m.w[i]) return 64 * i + std::countr_zero(m.w[i]);
  return -1;
}
inline int mask_count(const WideMask& m) {
  int c = 0;
  for (auto x : m.w) c += std::popcount(x);
  return c;
}
inline WideMask mask_minus(const WideMask& a, const WideMask& b) {
  WideMask r;
  for (int i = 0; i < WideMask::kWords; ++i) r.w[i] = a.w[i] & ~b.w[i];
  return r;
}
inline void mask_set(WideMask& m, int i) { m.w[i / 64] |= std::uint64_t{1} << (i % 64); }
template <class F>
void mask_for_each(const WideMask& m, F&& f) {
  for (int i = 0; i < WideMask::kWords; ++i)
    for (std::uint64_t x = m.w[i]; x; x &= x - 1) f(64 * i + std::countr_zero(x));
}

// ---- exact weighted set cover --------------------------------------------

/// Universe {0..items-1}; candidate c covers `covers[c]` at `weight[c]`.
struct CoverInstance {
  int items = 0;
  std::vector<std::vector<int>> covers;
  std::vector<std::uint64_t> weight;
};

struct CoverOutcome {
  std::vector<int> chosen;
  std::uint64_t weight = 0;
};

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max()
                                                           : a + b;
}

/**
 * Branch and bound. Branches on the least uncovered item over the candidates
 * containing it, in candidate order. The bound charges every uncovered item
 * the cheapest per-item price w(c)/|c| of a candidate containing it (scaled
 * integers, rounded down, so it never overestimates).
 *
 * The greedy cover seeds the incumbent at weight+1 so the returned witness is
 * always the first optimum in branching order, independent of the greedy.
 */
template <class Mask>
class CoverSolver {
 public:
  CoverSolver(const CoverInstance& inst, std::uint64_t budget)
      : inst_(inst), counter_(budget, "cover search") {
    const int nc = static_cast<int>(inst.covers.size());
    masks_.resize(nc);
    by_item_.resize(inst.items);
    for (int c = 0; c < nc; ++c)
      for (int i : inst.covers[c]) {
        mask_set(masks_[c], i);
        by_item_[i].push_back(c);
      }
    price_.assign(inst.items, std::numeric_limits<std::uint64_t>::max());
    for (int c = 0; c < nc; ++c) {
      const auto sz = inst.covers[c].size();
      if (sz == 0) continue;
      const u128 scaled = (static_cast<u128>(inst.weight[c]) << kScaleBits) / sz;
      const std::uint64_t p = scaled > std::numeric_limits<std::uint64_t>::max()
                                  ? std::numeric_limits<std::uint64_t>::max()
                                  : static_cast<std::uint64_t>(scaled);
      for (int i : inst.covers[c]) price_[i] = std::min(price_[i], p);
    }
    for (int i = 0; i < inst.items; ++i) {
      mask_set(all_, i);
      if (by_item_[i].empty())
        throw Error(Errc::PreconditionViolated, "cover item " + std::to_string(i) + " has no candidate");
    }
  }

  CoverOutcome min_weight() {
    const CoverOutcome greedy = greedy_cover();
    best_ = greedy;
    best_weight_ = greedy.weight + 1;
    std::vector<int> chosen;
    dfs_min(all_, 0, chosen);
    best_.weight = std::min(best_.weight, best_weight_);
    return best_;
  }

  /// Among covers of exactly `target` weight, the first of maximum size.
  CoverOutcome max_count(std::uint64_t target) {
    target_ = target;
    best_count_ = -1;
    std::vector<int> chosen;
    dfs_count(all_, 0, chosen);
    if (best_count_ < 0)
      throw Error(Errc::PreconditionViolated, "no cover of weight " + std::to_string(target));
    return best_;
  }

 private:
  static constexpr int kScaleBits = 20;

  std::uint64_t lower_bound(const Mask& u) const {
    u128 sum = 0;
    mask_for_each(u, [&](int i) { sum += price_[i]; });
    const u128 lb = (sum + ((static_cast<u128>(1) << kScaleBits) - 1)) >> kScaleBits;
    return lb > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                          : static_cast<std::uint64_t>(lb);
  }

  CoverOutcome greedy_cover() const {
    CoverOutcome out;
    Mask u = all_;
    while (!mask_none(u)) {
      int best = -1;
      std::uint64_t best_gain = 0, best_w = 1;
      for (int c = 0; c < static_cast<int>(masks_.size()); ++c) {
        const std::uint64_t gain = mask_count(u) - mask_count(mask_minus(u, masks_[c]));
        if (gain == 0) continue;
        // gain / w > best_gain / best_w
        if (best < 0 || static_cast<u128>(gain) * best_w >
                            static_cast<u128>(best_gain) * inst_.weight[c]) {
          best = c;
          best_gain = gain;
          best_w = inst_.weight[c];
        }
      }
      out.chosen.push_back(best);
      if (out.weight > kMaxWeight - inst_.weight[best])
        throw Error(Errc::WeightOverflow, "cover weight exceeds 2^62");
      out.weight += inst_.weight[best];
      u = mask_minus(u, masks_[best]);
    }
    return out;
  }

  void dfs_min(const Mask& u, std::uint64_t w, std::vector<int>& chosen) {
    counter_.tick();
    if (mask_none(u)) {
      if (w < best_weight_) {
        best_weight_ = w;
        best_.chosen = chosen;
        best_.weight = w;
      }
      return;
    }
    if (sat_add(w, lower_bound(u)) >= best_weight_) return;
    const int item = mask_lowest(u);
    for (int c : by_item_[item]) {
      const std::uint64_t nw = sat_add(w, inst_.weight[c]);
      if (nw >= best_weight_) continue;
      chosen.push_back(c);
      dfs_min(mask_minus(u, masks_[c]), nw, chosen);
      chosen.pop_back();
    }
  }

  void dfs_count(const Mask& u, std::uint64_t w, std::vector<int>& chosen) {
    counter_.tick();
    if (mask_none(u)) {
      if (w == target_ && static_cast<int>(chosen.size()) > best_count_) {
        best_count_ = static_cast<int>(chosen.size());
        best_.chosen = chosen;
        best_.weight = w;
      }
      return;
    }
    if (sat_add(w, lower_bound(u)) > target_) return;
    if (static_cast<int>(chosen.size()) + mask_count(u) <= best_count_) return;
    const int item = mask_lowest(u);
    for (int c : by_item_[item]) {
      const std::uint64_t nw = sat_add(w, inst_.weight[c]);
      if (nw > target_) continue;
      chosen.push_back(c);
      dfs_count(mask_minus(u, masks_[c]), nw, chosen);
      chosen.pop_back();
    }
  }

  const CoverInstance& inst_;
  NodeCounter counter_;
  std::vector<Mask> masks_;
  std::vector<std::vector<int>> by_item_;
  std::vector<std::uint64_t> price_;
  Mask all_{};
  CoverOutcome best_;
  std::uint64_t best_weight_ = 0;
  std::uint64_t target_ = 0;
  int best_count_ = -1;
};

inline CoverOutcome solve_min_cover(const CoverInstance& inst, std::uint64_t budget) {
  if (inst.items == 0) return {};
  if (inst.items <= 64) return CoverSolver<std::uint64_t>(inst, budget).min_weight();
  if (inst.items <= 64 * WideMask::kWords) return CoverSolver<WideMask>(inst, budget).min_weight();
  throw Error(Errc::LatticeTooLarge, "cover universe of " + std::to_string(inst.items) + " items");
}

inline CoverOutcome solve_max_count_cover(const CoverInstance& inst, std::uint64_t target,
                                          std::uint64_t budget) {
  if (inst.items == 0) return {};
  if (inst.items <= 64) return CoverSolver<std::uint64_t>(inst, budget).max_count(target);
  if (inst.items <= 64 * WideMask::kWords)
    return CoverSolver<WideMask>(inst, budget).max_count(target);
  throw Error(Errc::LatticeTooLarge, "cover universe of " + std::to_string(inst.items) + " items");
}

// Ground-set cover by the given flats; items are the nonloops of m.
inline FlatCover cover_nonloops(const MinorView& m, const std::vector<Subset>& flats, std::uint64_t d,
                                std::uint64_t budget) {
  const Subset nonloops = m.ground() - m.loops();
  std::vector<int> item_of(kMaxElements, -1);
  int items = 0;
  for (int e : nonloops) item_of[e] = items++;
  CoverInstance inst;
  inst.items = items;
  std::vector<Subset> used;
  for (Subset f : flats) {
    std::vector<int> cov;
    for (int e : f & nonloops) cov.push_back(item_of[e]);
    if (cov.empty()) continue;
    inst.covers.push_back(std::move(cov));
    inst.weight.push_back(checked_pow(d, m.rank(f)));
    used.push_back(f);
  }
  const CoverOutcome out = solve_min_cover(inst, budget);
  FlatCover cover{{}, d};
  for (int c : out.chosen) cover.flats.push_back(used[c]);
  return cover;
}

// Canonical order for witnesses: rank ascending, then lexicographic.
inline void sort_cover(const MinorView& m, FlatCover& cover) {
  std::stable_sort(cover.flats.begin(), cover.flats.end(), [&](Subset a, Subset b) {
    const int ra = m.rank(a), rb = m.rank(b);
    return ra != rb ? ra < rb : lex_less(a, b);
  });
}

}  // namespace detail

/**
 * tau_a: the least number of rank-<=a sets covering E. Candidates are the
 * rank-a flats (every smaller flat extends to one). Returns 1 when
 * r <= a and 0 for an empty ground set.
 */
inline CoverResult tau_a(const MinorView& m, int a, std::uint64_t budget = default_node_budget()) {
  if (a < 1) throw Error(Errc::PreconditionViolated, "tau_a needs a >= 1");
  if (m.ground().empty()) return {0, {{}, 1}};
  if (m.rank() <= a) return {1, {{m.ground()}, 1}};
  const FlatLattice lat = enumerate_flats(m, a);
  FlatCover cover = detail::cover_nonloops(m, lat.rank(a), 1, budget);
  detail::sort_cover(m, cover);
  return {cover.flats.size(), cover};
}

/// tau^d over a lattice that holds every flat of m.
inline CoverResult tau_weighted(const MinorView& m, const FlatLattice& lat, std::uint64_t d,
                                std::uint64_t budget = default_node_budget()) {
  if (d < 1) throw Error(Errc::PreconditionViolated, "weight base d must be >= 1");
  if (m.ground().empty()) return {0, {{}, d}};
  const Subset loops = m.loops();
  if (loops == m.ground()) return {1, {{loops}, d}};
  FlatCover cover = detail::cover_nonloops(m, lat.all(), d, budget);
  detail::sort_cover(m, cover);
  return {weight(m, cover), cover};
}

/**
 * tau^d: least weight sum d^r(F) of a cover of E. Any cover closes to a flat
 * cover of equal weight, so candidates are all flats. Loops lie in every
 * flat, so the rank-0 flat is only ever chosen when E is all loops.
 */
inline CoverResult tau_weighted(const MinorView& m, std::uint64_t d,
                                std::uint64_t budget = default_node_budget()) {
  if (m.ground().empty()) return {0, {{}, d}};
  return tau_weighted(m, enumerate_flats(m, m.rank()), d, budget);
}

/// d-minimal cover of a family over a lattice that holds every flat of m.
inline FlatCover dmin_cover_family(const MinorView& m, const FlatLattice& lat, const SetFamily& fam,
                                   std::uint64_t d, bool maximize_cardinality = false,
                                   std::uint64_t budget = default_node_budget()) {
  if (fam.empty()) throw Error(Errc::PreconditionViolated, "family must be nonempty");
  check_family(m, fam);
  // Members with equal closure are covered by exactly the same flats.
  std::vector<Subset> targets;
  {
    std::unordered_set<std::uint64_t> seen;
    for (Subset x : fam) {
      const Subset cl = m.closure(x);
      if (seen.insert(cl.bits()).second) targets.push_back(cl);
    }
  }
  detail::CoverInstance inst;
  inst.items = static_cast<int>(targets.size());
  std::vector<Subset> used;
  for (Subset f : lat.all()) {
    std::vector<int> cov;
    for (int i = 0; i < inst.items; ++i)
      if (targets[i].is_subset_of(f)) cov.push_back(i);
    if (cov.empty()) continue;
    inst.covers.push_back(std::move(cov));
    inst.weight.push_back(checked_pow(d, m.rank(f)));
    used.push_back(f);
  }
  detail::CoverOutcome out = detail::solve_min_cover(inst, budget);
  if (maximize_cardinality) out = detail::solve_max_count_cover(inst, out.weight, budget);
  FlatCover cover{{}, d};
  for (int c : out.chosen) cover.flats.push_back(used[c]);
  detail::sort_cover(m, cover);
  return cover;
}

/**
 * A cover of the family of least weight; candidates are the flats holding
 * at least one member. With maximize_cardinality, a second search over
 * covers of exactly the optimal weight returns one with the most flats.
 */
inline FlatCover dmin_cover_family(const MinorView& m, const SetFamily& fam, std::uint64_t d,
                                   bool maximize_cardinality = false,
                                   std::uint64_t budget = default_node_budget()) {
  return dmin_cover_family(m, enumerate_flats(m, m.rank()), fam, d, maximize_cardinality, budget);
}

namespace detail {

inline void push_unique(std::vector<Subset>& out, std::unordered_set<std::uint64_t>& seen, Subset f) {
  if (seen.insert(f.bits()).second) out.push_back(f);
}

// Rank a+1 base case. Grows X from a greedy basis so every (a+1)-subset of X
// stays independent; stops with an error once |X| reaches b.
inline std::vector<Subset> kdensity_base(const MinorView& m, int a, int b) {
  Subset x = greedy_basis(m);
  for (int e : m.ground() - x) {
    if (m.is_loop(e)) continue;
    bool free = true;
    for_each_k_subset(x, a, [&](Subset s) {
      if (free && m.rank(s.with(e)) <= a) free = false;
    });
    if (!free) continue;
    x = x.with(e);
    if (x.size() >= b)
      throw Error(Errc::PreconditionViolated,
                  "U_{" + std::to_string(a + 1) + "," + std::to_string(b) +
                      "} restriction: contract {" + to_string(m.contracted()) + "} arc {" +
                      to_string(x) + "}");
  }
  std::vector<Subset> out;
  std::unordered_set<std::uint64_t> seen;
  for_each_k_subset(x, a, [&](Subset s) { push_unique(out, seen, m.closure(s)); });
  return out;
}

}  // namespace detail

/**
 * Cover by rank-<=a flats of size at most C(b-1,a)^(r-a), for m without a
 * U_{a+1,b}-minor and r(m) > a. Rank a+1 uses the arc construction above;
 * higher rank contracts the first nonloop e, covers m/e recursively, and
 * refines each lifted rank-(a+1) flat cl(F + e) by the base case.
 */
inline FlatCover kdensity_cover(const MinorView& m, int a, int b) {
  if (a < 1 || b <= a) throw Error(Errc::PreconditionViolated, "kdensity_cover needs 1 <= a < b");
  const int r = m.rank();
  if (r <= a) throw Error(Errc::PreconditionViolated, "kdensity_cover needs r > a");
  if (r == a + 1) return {detail::kdensity_base(m, a, b), 1};
  const int e = (m.ground() - m.loops()).lowest();
  const FlatCover lower = kdensity_cover(m.contract(Subset::singleton(e)), a, b);
  std::vector<Subset> out;
  std::unordered_set<std::uint64_t> seen;
  for (Subset f : lower.flats) {
    const Subset g = m.closure(f.with(e));
    if (m.rank(g) <= a) {
      detail::push_unique(out, seen, g);
      continue;
    }
    for (Subset h : detail::kdensity_base(m.restrict_to(g), a, b))
      detail::push_unique(out, seen, m.closure(h));
  }
  return {out, 1};
}

}  // namespace mcov
