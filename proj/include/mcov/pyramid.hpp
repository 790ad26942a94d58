#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "mcov/io.hpp"
#include "mcov/structure.hpp"

namespace mcov {

/// (M, S; e_1..e_h) with parameters (a, q, h, d). q is the number of
/// witnesses demanded at each level, stored as given.
struct Pyramid {
  MinorView ctx;
  SetFamily family;
  std::vector<int> spine;
  int a = 1;
  int q = 1;
  int h = 0;
  std::uint64_t d = 1;

  Subset spine_set(int upto = -1) const {
    Subset s;
    const int k = upto < 0 ? static_cast<int>(spine.size()) : upto;
    for (int i = 0; i < k; ++i) s = s.with(spine[i]);
    return s;
  }
  /// M_i = M / {e_1..e_i}
  MinorView level(int i) const { return ctx.contract(spine_set(i)); }
};

struct PyramidVerdict {
  bool ok = true;
  int condition = 0;  // 1: spine/rank/skew, 2: level witnesses, 3: thickness
  int level = -1;
  int member = -1;
  std::string message;

  explicit operator bool() const { return ok; }
};

namespace detail {

inline PyramidVerdict pyramid_fail(int condition, int level, int member, std::string msg) {
  return {false, condition, level, member, std::move(msg)};
}

}  // namespace detail

/**
 * Checks the three pyramid conditions. Condition 2 holds at level i for S
 * iff the members similar to S in M_{i+1} fall into at least q distinct
 * similarity classes of M_i.
 */
inline PyramidVerdict verify_pyramid(const Pyramid& p, std::uint64_t budget = default_node_budget()) {
  using detail::pyramid_fail;
  const MinorView& m = p.ctx;
  if (static_cast<int>(p.spine.size()) != p.h)
    return pyramid_fail(1, -1, -1, "spine has " + std::to_string(p.spine.size()) + " elements, h = " +
                                       std::to_string(p.h));
  if (p.a < 1 || p.q < 1 || p.d < 1 || p.h < 0)
    return pyramid_fail(1, -1, -1, "parameters out of range");
  const Subset spine = p.spine_set();
  if (spine.size() != p.h || !spine.is_subset_of(m.ground()))
    return pyramid_fail(1, -1, -1, "spine elements repeated or outside the ground set");
  if (!m.is_independent(spine)) return pyramid_fail(1, -1, -1, "spine is dependent");
  if (p.family.empty()) return pyramid_fail(1, -1, -1, "family is empty");
  for (std::size_t j = 0; j < p.family.size(); ++j) {
    const Subset s = p.family[j];
    const int ij = static_cast<int>(j);
    if (!s.is_subset_of(m.ground())) return pyramid_fail(1, -1, ij, "member outside the ground set");
    if (m.rank(s) != p.a)
      return pyramid_fail(1, -1, ij, "member {" + to_string(s) + "} has rank " +
                                         std::to_string(m.rank(s)));
    if (!is_skew(m, s, spine))
      return pyramid_fail(1, -1, ij, "member {" + to_string(s) + "} not skew to the spine");
  }
  std::vector<std::vector<Subset>> cl(p.h + 1);
  for (int i = 0; i <= p.h; ++i) {
    const MinorView mi = p.level(i);
    for (Subset s : p.family) cl[i].push_back(mi.closure(s));
  }
  for (int i = 0; i < p.h; ++i) {
    std::map<std::uint64_t, std::vector<std::uint64_t>> split;
    for (std::size_t j = 0; j < p.family.size(); ++j) split[cl[i + 1][j].bits()].push_back(cl[i][j].bits());
    for (auto& [key, v] : split) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    for (std::size_t j = 0; j < p.family.size(); ++j) {
      const auto& v = split[cl[i + 1][j].bits()];
      if (static_cast<int>(v.size()) < p.q)
        return pyramid_fail(2, i, static_cast<int>(j),
                            "member {" + to_string(p.family[j]) + "} has " + std::to_string(v.size()) +
                                " dissimilar lifts at level " + std::to_string(i) + ", need " +
                                std::to_string(p.q));
    }
  }
  std::unordered_map<std::uint64_t, bool> thick;
  for (std::size_t j = 0; j < p.family.size(); ++j) {
    const Subset s = p.family[j];
    auto it = thick.find(s.bits());
    if (it == thick.end())
      it = thick.emplace(s.bits(), s.empty() || thickness(m, s, budget).at_least(p.d)).first;
    if (!it->second)
      return pyramid_fail(3, -1, static_cast<int>(j),
                          "member {" + to_string(s) + "} is not " + std::to_string(p.d) + "-thick");
  }
  return {};
}

inline void require_valid(const Pyramid& p, const char* what) {
  const PyramidVerdict v = verify_pyramid(p);
  if (!v) throw Error(Errc::ConstructionFailed, std::string(what) + ": condition " +
                                                    std::to_string(v.condition) + ": " + v.message);
}

/**
 * Pyramid in PG(h, q): spine = the first h coordinate points, family = the
 * points with last coordinate 1. The q points differing from S only in
 * coordinate i+1 witness level i.
 */
inline Pyramid pg_pyramid(int q, int h, std::uint64_t d = 2) {
  if (h < 0) throw Error(Errc::InvalidIndices, "height must be >= 0");
  const InstancePtr pg = make_pg(h + 1, q);
  const auto points = projective_points(h + 1, q);
  Pyramid p;
  p.ctx = MinorView(pg);
  p.a = 1;
  p.q = q;
  p.h = h;
  p.d = d;
  for (int k = 0; k < h; ++k) {
    for (std::size_t idx = 0; idx < points.size(); ++idx) {
      const auto& v = points[idx];
      bool unit = v[k] == 1;
      for (int c = 0; c <= h && unit; ++c)
        if (c != k && v[c] != 0) unit = false;
      if (unit) p.spine.push_back(static_cast<int>(idx));
    }
  }
  for (std::size_t idx = 0; idx < points.size(); ++idx)
    if (points[idx][h] == 1) p.family.push_back(Subset::singleton(static_cast<int>(idx)));
  return p;
}

/// Contract e_{i+1}..e_j.
inline Pyramid shrink_pyramid(const Pyramid& p, int i, int j) {
  if (i < 0 || i > j || j > p.h)
    throw Error(Errc::InvalidIndices, "need 0 <= i <= j <= h, got i=" + std::to_string(i) +
                                          " j=" + std::to_string(j) + " h=" + std::to_string(p.h));
  Pyramid out = p;
  Subset c;
  out.spine.clear();
  for (int k = 0; k < p.h; ++k) {
    if (k >= i && k < j) c = c.with(p.spine[k]);
    else out.spine.push_back(p.spine[k]);
  }
  out.ctx = p.ctx.contract(c);
  out.h = p.h - (j - i);
  require_valid(out, "shrink_pyramid");
  return out;
}

inline std::size_t member_index(const Pyramid& p, Subset s) {
  const auto it = std::find(p.family.begin(), p.family.end(), s);
  if (it == p.family.end())
    throw Error(Errc::MemberNotInFamily, "{" + to_string(s) + "} is not a pyramid member");
  return static_cast<std::size_t>(it - p.family.begin());
}

/// Restriction to cl(S u spine) with the members similar to S in M_h.
inline Pyramid restrict_pyramid(const Pyramid& p, Subset s) {
  member_index(p, s);
  const MinorView mh = p.level(p.h);
  const Subset cls = mh.closure(s);
  Pyramid out = p;
  out.ctx = p.ctx.restrict_to(p.ctx.closure(s | p.spine_set()));
  out.family.clear();
  for (Subset x : p.family)
    if (mh.closure(x) == cls) out.family.push_back(x);
  require_valid(out, "restrict_pyramid");
  if (out.ctx.rank() != p.a + p.h)
    throw Error(Errc::ConstructionFailed, "restriction has rank " + std::to_string(out.ctx.rank()));
  return out;
}

struct EpsilonCheck {
  std::uint64_t eps = 0;      // eps_M(S)
  std::uint64_t eps_top = 0;  // eps_{M_h}(S)
  std::uint64_t bound = 0;    // q^h eps_{M_h}(S)
  bool holds = false;
  bool equality = false;
};

/// eps_M(S) >= q^h eps_{M_h}(S)
inline EpsilonCheck pyramid_epsilon_check(const Pyramid& p) {
  EpsilonCheck c;
  c.eps = static_cast<std::uint64_t>(epsilon(p.ctx, p.family));
  c.eps_top = static_cast<std::uint64_t>(epsilon(p.level(p.h), p.family));
  c.bound = checked_pow(static_cast<std::uint64_t>(p.q), p.h) * c.eps_top;
  c.holds = c.eps >= c.bound;
  c.equality = c.eps == c.bound;
  return c;
}

/**
 * Rank-(a+h') restriction with spine e_1..e_h'. Truncating the spine keeps
 * a pyramid; restricting to cl(S u {e_1..e_h'}) keeps the members similar
 * to S in M_h'.
 */
inline Pyramid bound_pyramid(const Pyramid& p, int hp) {
  if (hp < 0 || hp > p.h)
    throw Error(Errc::InvalidIndices, "need 0 <= h' <= h, got " + std::to_string(hp));
  Pyramid t = p;
  t.spine.resize(hp);
  t.h = hp;
  Pyramid out = restrict_pyramid(t, p.family.front());
  if (out.ctx.rank() != p.a + hp)
    throw Error(Errc::ConstructionFailed, "bound_pyramid rank " + std::to_string(out.ctx.rank()));
  const auto need = checked_pow(static_cast<std::uint64_t>(p.q), hp);
  if (static_cast<std::uint64_t>(epsilon(out.ctx, out.family)) < need)
    throw Error(Errc::ConstructionFailed, "bound_pyramid eps below q^h'");
  return out;
}

namespace detail {

// Members of `fam` that keep condition 2 with respect to the surviving set,
// iterated to a fixpoint.
inline SetFamily prune_level_condition(const Pyramid& shape, SetFamily fam) {
  while (!fam.empty()) {
    Pyramid p = shape;
    p.family = fam;
    std::vector<char> keep(fam.size(), 1);
    for (int i = 0; i < p.h; ++i) {
      const MinorView mi = p.level(i), mn = p.level(i + 1);
      std::map<std::uint64_t, std::vector<std::uint64_t>> split;
      std::vector<std::uint64_t> up(fam.size());
      for (std::size_t j = 0; j < fam.size(); ++j) {
        up[j] = mn.closure(fam[j]).bits();
        split[up[j]].push_back(mi.closure(fam[j]).bits());
      }
      for (auto& [k, v] : split) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
      }
      for (std::size_t j = 0; j < fam.size(); ++j)
        if (static_cast<int>(split[up[j]].size()) < p.q) keep[j] = 0;
    }
    SetFamily next;
    for (std::size_t j = 0; j < fam.size(); ++j)
      if (keep[j]) next.push_back(fam[j]);
    if (next.size() == fam.size()) return fam;
    fam = std::move(next);
  }
  return fam;
}

}  // namespace detail

/**
 * Given a minor N of M/{e_1..e_h} (a view of the same base) and members Y of
 * rank a in N, contracts in M a minimal part of N's extra contraction that
 * still reproduces N on the union of Y. Deletions never change N|Y and are
 * not applied. The family is then pruned to the members that keep every
 * condition; Y must survive.
 */
inline Pyramid minor_project_pyramid(const Pyramid& p, const MinorView& n, const SetFamily& ys) {
  const MinorView top = p.level(p.h);
  if (!top.has_minor(n)) throw Error(Errc::PreconditionViolated, "N is not a minor of M/spine");
  if (ys.empty()) throw Error(Errc::PreconditionViolated, "Y must be nonempty");
  for (Subset y : ys) {
    member_index(p, y);
    n.check(y);
    if (n.rank(y) != p.a) throw Error(Errc::PreconditionViolated, "member of Y without rank a in N");
  }
  const Subset u = family_union(ys);
  Subset c = greedy_basis(top, n.contracted() - top.contracted());
  // c can go when it is a coloop of top|(U u C): contracting it leaves N|U alone.
  for (int e : c) {
    const Subset rest = c.without(e);
    if (top.rank(u | c) == top.rank(u | rest) + 1) c = rest;
  }
  Pyramid out = p;
  out.ctx = p.ctx.contract(c);
  SetFamily fam;
  const Subset spine = p.spine_set();
  for (Subset s : p.family) {
    if (!s.is_subset_of(out.ctx.ground())) continue;
    if (out.ctx.rank(s) != p.a || !is_skew(out.ctx, s, spine)) continue;
    if (!s.empty() && !thickness(out.ctx, s).at_least(p.d)) continue;
    fam.push_back(s);
  }
  out.family = detail::prune_level_condition(out, fam);
  for (Subset y : ys)
    if (std::find(out.family.begin(), out.family.end(), y) == out.family.end())
      throw Error(Errc::ConstructionFailed, "member {" + to_string(y) + "} of Y lost in pruning");
  require_valid(out, "minor_project_pyramid");
  return out;
}

/// Members X of fam with more than q members of fam similar to X in M/e.
inline SetFamily family_above(const MinorView& m, int e, const SetFamily& fam, int q) {
  const MinorView me = m.contract(Subset::singleton(e));
  SetFamily live;
  for (Subset x : fam)
    if (!x.contains(e)) live.push_back(x);
  SetFamily out;
  for (const auto& c : similarity_classes(me, live))
    if (static_cast<int>(c.members.size()) > q)
      for (std::size_t i : c.members) out.push_back(live[i]);
  std::vector<Subset> ordered;
  for (Subset x : live)
    if (std::find(out.begin(), out.end(), x) != out.end()) ordered.push_back(x);
  return ordered;
}

/**
 * Adds e as the new first spine element. P is an (a, q+1, h, d)-pyramid on a
 * minor of M/e whose members come from fam_{>q}. Each member S of P is
 * replaced by q+1 members of [S]_{M/e} n fam that are dissimilar in the new
 * context, of rank a, skew to the new spine and d-thick; elements of the
 * chosen lifts are no longer deleted.
 */
inline Pyramid augment_pyramid(const MinorView& m, int e, const SetFamily& fam, int q,
                               const Pyramid& p) {
  if (!m.ground().contains(e) || m.is_loop(e))
    throw Error(Errc::PreconditionViolated, "e must be a nonloop of M");
  if (p.q != q + 1) throw Error(Errc::PreconditionViolated, "P must have q+1 witnesses per level");
  const MinorView me = m.contract(Subset::singleton(e));
  if (!me.has_minor(p.ctx)) throw Error(Errc::PreconditionViolated, "P is not on a minor of M/e");
  if (!is_simple(m, fam)) throw Error(Errc::PreconditionViolated, "family must be simple in M");
  const SetFamily above = family_above(m, e, fam, q);
  for (Subset s : p.family)
    if (std::find(above.begin(), above.end(), s) == above.end())
      throw Error(Errc::PreconditionViolated, "P member {" + to_string(s) + "} not in fam_{>q}");
  require_valid(p, "augment_pyramid input");

  Pyramid out;
  out.a = p.a;
  out.q = q + 1;
  out.h = p.h + 1;
  out.d = p.d;
  out.spine.push_back(e);
  out.spine.insert(out.spine.end(), p.spine.begin(), p.spine.end());
  const Subset c = p.ctx.contracted() - m.contracted() - Subset::singleton(e);
  Subset del = p.ctx.deleted() - m.deleted();
  // Undelete every candidate first, so that rank checks see the final context.
  for (Subset x : fam)
    if (!x.intersects(c) && !x.contains(e)) del -= x;
  out.ctx = m.minor(c, del);
  const MinorView ctx_e = out.ctx.contract(Subset::singleton(e));
  const Subset spine = out.spine_set();
  std::vector<char> used(fam.size(), 0);
  for (Subset s : p.family) {
    const Subset cls = me.closure(s);
    std::vector<Subset> picked;
    std::vector<Subset> picked_cl;
    for (std::size_t j = 0; j < fam.size() && static_cast<int>(picked.size()) < q + 1; ++j) {
      const Subset x = fam[j];
      if (x.contains(e) || me.closure(x) != cls) continue;
      if (!x.is_subset_of(out.ctx.ground())) continue;
      if (out.ctx.rank(x) != p.a || !is_skew(out.ctx, x, spine)) continue;
      if (ctx_e.closure(x) != ctx_e.closure(s)) continue;
      const Subset xc = out.ctx.closure(x);
      if (std::find(picked_cl.begin(), picked_cl.end(), xc) != picked_cl.end()) continue;
      if (!x.empty() && !thickness(out.ctx, x).at_least(p.d)) continue;
      picked.push_back(x);
      picked_cl.push_back(xc);
    }
    if (static_cast<int>(picked.size()) < q + 1)
      throw Error(Errc::ConstructionFailed, "member {" + to_string(s) + "} has only " +
                                                std::to_string(picked.size()) + " usable lifts");
    for (Subset x : picked) used[std::find(fam.begin(), fam.end(), x) - fam.begin()] = 1;
  }
  for (std::size_t j = 0; j < fam.size(); ++j)
    if (used[j]) out.family.push_back(fam[j]);
  require_valid(out, "augment_pyramid");
  return out;
}

// ---- climbing a height-1 pyramid ------------------------------------------

struct ClimbResult {
  enum class Kind { FirmUp, Lifted } kind = Kind::Lifted;
  SetFamily firm_up;
  std::vector<SetFamily> lifted;
  int element = -1;
};

/**
 * Exhaustive search for a d-firm subfamily of rank a+1 among the members of
 * P. Per rank-(a+1) flat F, only the number of members taken from each
 * M-similarity class inside F matters; every count vector is tried.
 */
inline std::optional<SetFamily> search_firm_up(const MinorView& m, const SetFamily& members, int a,
                                               std::uint64_t d,
                                               std::uint64_t budget = default_node_budget()) {
  NodeCounter counter(budget, "firm subfamily search");
  const FlatLattice lat = enumerate_flats(m, a + 1);
  if (lat.max_rank() < a + 1) return std::nullopt;
  const auto classes = similarity_classes(m, members);
  for (Subset f : lat.rank(a + 1)) {
    std::vector<std::size_t> inside;
    for (std::size_t k = 0; k < classes.size(); ++k)
      if (classes[k].closure.is_subset_of(f)) inside.push_back(k);
    if (inside.size() < 2) continue;
    const MinorView mf = m.restrict_to(f);
    const FlatLattice sub = enumerate_flats(mf, a);
    std::vector<std::vector<std::size_t>> hyper_classes;  // per hyperplane: positions in `inside`
    for (Subset hpl : sub.rank(a)) {
      std::vector<std::size_t> in;
      for (std::size_t t = 0; t < inside.size(); ++t)
        if (classes[inside[t]].closure.is_subset_of(hpl)) in.push_back(t);
      if (!in.empty()) hyper_classes.push_back(std::move(in));
    }
    std::vector<std::size_t> count(inside.size(), 0);
    std::optional<SetFamily> found;
    auto leaf = [&]() {
      std::size_t total = 0;
      Subset u;
      for (std::size_t t = 0; t < inside.size(); ++t)
        if (count[t]) {
          total += count[t];
          u |= classes[inside[t]].closure;
        }
      if (total == 0 || m.rank(u) != a + 1) return false;
      for (const auto& hc : hyper_classes) {
        std::size_t c = 0;
        for (std::size_t t : hc) c += count[t];
        if (c * d > total) return false;
      }
      return true;
    };
    auto dfs = [&](auto&& self, std::size_t t) -> bool {
      counter.tick();
      if (t == inside.size()) return leaf();
      const std::size_t cap = classes[inside[t]].members.size();
      for (std::size_t c = cap + 1; c-- > 0;) {
        count[t] = c;
        if (self(self, t + 1)) return true;
      }
      count[t] = 0;
      return false;
    };
    if (dfs(dfs, 0)) {
      SetFamily y;
      for (std::size_t t = 0; t < inside.size(); ++t)
        for (std::size_t k = 0; k < count[t]; ++k) y.push_back(members[classes[inside[t]].members[k]]);
      return y;
    }
  }
  return std::nullopt;
}

/// Every invariant of a Lifted outcome; returns the first failure or "".
inline std::string check_lifted(const MinorView& m, int e, const SetFamily& x,
                                const std::vector<SetFamily>& lifted, int a, std::uint64_t d) {
  const MinorView me = m.contract(Subset::singleton(e));
  const Subset target = family_closure(me, x);
  std::vector<Subset> closures;
  for (std::size_t j = 0; j < lifted.size(); ++j) {
    const SetFamily& xj = lifted[j];
    const std::string tag = "family " + std::to_string(j + 1) + ": ";
    if (xj.empty()) return tag + "empty";
    if (family_rank(m, xj) != a) return tag + "rank " + std::to_string(family_rank(m, xj));
    if (!is_d_firm(m, xj, d).firm) return tag + "not d-firm";
    if (!is_skew(m, family_union(xj), Subset::singleton(e))) return tag + "not skew to e";
    if (family_closure(me, xj) != target) return tag + "not similar to X in M/e";
    const Subset cl = family_closure(m, xj);
    if (std::find(closures.begin(), closures.end(), cl) != closures.end())
      return tag + "similar to an earlier family";
    closures.push_back(cl);
  }
  return "";
}

/**
 * Height-1 pyramid (M, S; e) with q witnesses, and X within S that is
 * d^(q+2)-firm in M/e with r_{M/e}(X) = a. Follows the lifting argument:
 * witness lists X^i_1..X^i_q, then at step j either the list has rank <= a,
 * or it has rank a+1 and is d-firm (a FirmUp outcome), or the members inside
 * its heaviest hyperplane carry on.
 */
inline ClimbResult climb_inductive(const Pyramid& p, const SetFamily& x, int a, std::uint64_t d,
                                   std::uint64_t budget = default_node_budget()) {
  if (p.h != 1) throw Error(Errc::PreconditionViolated, "climb needs a height-1 pyramid");
  if (d < 2 || p.q < 2) throw Error(Errc::PreconditionViolated, "climb needs d, q >= 2");
  if (x.empty()) throw Error(Errc::PreconditionViolated, "X must be nonempty");
  require_valid(p, "climb_inductive input");
  for (Subset s : x) member_index(p, s);
  const int e = p.spine[0];
  const MinorView me = p.ctx.contract(Subset::singleton(e));
  if (family_rank(me, x) != a)
    throw Error(Errc::PreconditionViolated, "r_{M/e}(X) = " + std::to_string(family_rank(me, x)) +
                                                ", expected " + std::to_string(a));
  if (!is_d_firm(me, x, checked_pow(d, p.q + 2)).firm)
    throw Error(Errc::PreconditionViolated, "X is not d^(q+2)-firm in M/e");

  const MinorView& m = p.ctx;
  ClimbResult res;
  res.element = e;
  // X^i_j: first member of the j-th distinct M-class among members similar to X^i in M/e.
  std::vector<std::vector<Subset>> wit(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Subset target = me.closure(x[i]);
    std::vector<Subset> seen;
    for (Subset s : p.family) {
      if (me.closure(s) != target) continue;
      const Subset cl = m.closure(s);
      if (std::find(seen.begin(), seen.end(), cl) != seen.end()) continue;
      seen.push_back(cl);
      wit[i].push_back(s);
      if (static_cast<int>(wit[i].size()) == p.q) break;
    }
    if (static_cast<int>(wit[i].size()) < p.q)
      throw Error(Errc::PreconditionViolated, "member without q witnesses");
  }
  std::vector<std::size_t> idx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) idx[i] = i;
  for (int j = 0; j < p.q; ++j) {
    SetFamily list;
    for (std::size_t i : idx) list.push_back(wit[i][j]);
    if (family_rank(m, list) > a) {
      const FirmnessResult fr = is_d_firm(m, list, d);
      if (fr.firm && family_rank(m, list) == a + 1) {
        res.kind = ClimbResult::Kind::FirmUp;
        res.firm_up = list;
        return res;
      }
      if (fr.firm) break;  // rank above a+1: X did not satisfy the rank hypothesis
      std::vector<std::size_t> next;
      SetFamily kept;
      for (std::size_t t : fr.violating) {
        next.push_back(idx[t]);
        kept.push_back(list[t]);
      }
      idx = std::move(next);
      list = std::move(kept);
    }
    res.lifted.push_back(list);
  }
  if (static_cast<int>(res.lifted.size()) == p.q && check_lifted(m, e, x, res.lifted, a, d).empty()) {
    res.kind = ClimbResult::Kind::Lifted;
    return res;
  }
  if (auto y = search_firm_up(m, p.family, a, d, budget)) {
    res.kind = ClimbResult::Kind::FirmUp;
    res.firm_up = *y;
    res.lifted.clear();
    return res;
  }
  const std::string why = static_cast<int>(res.lifted.size()) == p.q
                              ? check_lifted(m, e, x, res.lifted, a, d)
                              : "lifted list exceeded rank a+1";
  throw Error(Errc::ConstructionFailed, "climb: " + why);
}

// ---- serialization ---------------------------------------------------------

namespace detail {

inline std::string join_commas(Subset s) {
  std::string out;
  for (int e : s) {
    if (!out.empty()) out += ',';
    out += std::to_string(e);
  }
  return out;
}

}  // namespace detail

/// Header, family, blank line, then `matroid-file <path>` naming the base.
inline void write_pyramid(std::ostream& out, const Pyramid& p, const std::string& matroid_path) {
  out << "pyramid a=" << p.a << " q=" << p.q << " h=" << p.h << " d=" << p.d << " spine=";
  for (std::size_t i = 0; i < p.spine.size(); ++i) out << (i ? "," : "") << p.spine[i];
  if (!p.ctx.contracted().empty()) out << " contract=" << detail::join_commas(p.ctx.contracted());
  if (!p.ctx.deleted().empty()) out << " delete=" << detail::join_commas(p.ctx.deleted());
  out << '\n';
  write_family(out, p.family);
  out << '\n' << "matroid-file " << matroid_path << '\n';
}

inline Pyramid read_pyramid(std::istream& in, const std::filesystem::path& base_dir = {}) {
  std::string line;
  if (!detail::next_content_line(in, line)) throw Error(Errc::ParseError, "empty pyramid file");
  std::istringstream hs(line);
  std::string word;
  hs >> word;
  if (word != "pyramid") throw Error(Errc::ParseError, "expected 'pyramid' header");
  std::map<std::string, std::string> kv;
  while (hs >> word) {
    const auto eq = word.find('=');
    if (eq == std::string::npos) throw Error(Errc::ParseError, "bad header field '" + word + "'");
    kv[word.substr(0, eq)] = word.substr(eq + 1);
  }
  auto num = [&](const std::string& key) -> long long {
    const auto it = kv.find(key);
    if (it == kv.end()) throw Error(Errc::ParseError, "missing header field " + key);
    try {
      return std::stoll(it->second);
    } catch (const std::exception&) {
      throw Error(Errc::ParseError, "bad value for " + key);
    }
  };
  auto list = [&](const std::string& key) {
    std::vector<long long> v;
    const auto it = kv.find(key);
    if (it == kv.end() || it->second.empty()) return v;
    std::string s = it->second;
    std::replace(s.begin(), s.end(), ',', ' ');
    return detail::parse_ints(s);
  };
  Pyramid p;
  p.a = static_cast<int>(num("a"));
  p.q = static_cast<int>(num("q"));
  p.h = static_cast<int>(num("h"));
  p.d = static_cast<std::uint64_t>(num("d"));
  std::vector<std::string> fam_lines;
  while (std::getline(in, line)) {
    const std::string body = detail::strip_comment(line);
    if (body.find_first_not_of(" \t\r") == std::string::npos) {
      if (line.find('#') != std::string::npos) continue;
      break;
    }
    fam_lines.push_back(body);
  }
  if (!detail::next_content_line(in, line)) throw Error(Errc::ParseError, "missing matroid-file line");
  std::istringstream ms(line);
  std::string key, path;
  ms >> key >> path;
  if (key != "matroid-file" || path.empty()) throw Error(Errc::ParseError, "expected matroid-file <path>");
  std::filesystem::path mp(path);
  if (mp.is_relative() && !base_dir.empty()) mp = base_dir / mp;
  const InstancePtr base = read_matroid_file(mp.string());
  const int n = base->size();
  p.ctx = MinorView::of(base, detail::subset_from_ints(list("contract"), n), detail::subset_from_ints(list("delete"), n));
  for (long long e : list("spine")) {
    if (e < 0 || e >= n) throw Error(Errc::ElementOutOfRange, "spine element out of range");
    p.spine.push_back(static_cast<int>(e));
  }
  for (const auto& l : fam_lines) p.family.push_back(detail::subset_from_ints(detail::parse_ints(l), n));
  return p;
}

inline Pyramid read_pyramid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path);
  return read_pyramid(in, std::filesystem::path(path).parent_path());
}

}  // namespace mcov
