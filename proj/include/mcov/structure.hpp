#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcov/budget.hpp"
#include "mcov/cover.hpp"
#include "mcov/family.hpp"
#include "mcov/flats.hpp"

namespace mcov {

// ---- thickness -------------------------------------------------------------

/// tau_{r-1}(M|X), or Unbounded when r(X) <= 1. Unbounded exceeds every integer.
struct ThicknessValue {
  bool unbounded = false;
  std::uint64_t value = 0;

  static ThicknessValue infinite() { return {true, 0}; }
  bool at_least(std::uint64_t d) const { return unbounded || value >= d; }

  friend bool operator==(const ThicknessValue&, const ThicknessValue&) = default;
  friend auto operator<=>(const ThicknessValue& x, const ThicknessValue& y) {
    if (x.unbounded != y.unbounded) return x.unbounded <=> y.unbounded;
    return x.value <=> y.value;
  }
};

inline std::string to_string(const ThicknessValue& t) {
  return t.unbounded ? "unbounded" : std::to_string(t.value);
}

inline ThicknessValue thickness(const MinorView& m, Subset x,
                                std::uint64_t budget = default_node_budget()) {
  if (x.empty()) throw Error(Errc::EmptySet, "thickness of the empty set");
  const MinorView r = m.restrict_to(x);
  const int rk = r.rank();
  if (rk <= 1) return ThicknessValue::infinite();
  return {false, tau_a(r, rk - 1, budget).value};
}

inline bool is_d_thick(const MinorView& m, Subset x, std::uint64_t d) {
  return thickness(m, x).at_least(d);
}

// ---- firmness --------------------------------------------------------------

struct FirmnessResult {
  bool firm = true;
  /// On failure: indices of the members inside one proper flat, more than |fam|/d of them.
  std::vector<std::size_t> violating;
  Subset flat;
};

/**
 * d-firmness by hyperplane scan: a subfamily of deficient rank spans a proper
 * flat of M|cl(union), which extends to a hyperplane holding at least as many
 * members. So the family is firm iff every hyperplane holds at most |fam|/d.
 */
inline FirmnessResult is_d_firm(const MinorView& m, const SetFamily& fam, std::uint64_t d) {
  if (d < 1) throw Error(Errc::PreconditionViolated, "firmness parameter must be >= 1");
  FirmnessResult res;
  if (fam.empty()) return res;
  const Subset top = family_closure(m, fam);
  const MinorView sub = m.restrict_to(top);
  const int r = sub.rank();
  if (r == 0) return res;
  const FlatLattice lat = enumerate_flats(sub, r - 1);
  std::size_t best = 0;
  Subset best_flat;
  for (Subset h : lat.rank(r - 1)) {
    std::size_t count = 0;
    for (Subset x : fam)
      if (x.is_subset_of(h)) ++count;
    if (count > best) {
      best = count;
      best_flat = h;
    }
  }
  if (best * d > fam.size()) {
    res.firm = false;
    res.flat = best_flat;
    for (std::size_t i = 0; i < fam.size(); ++i)
      if (fam[i].is_subset_of(best_flat)) res.violating.push_back(i);
  }
  return res;
}

inline SetFamily pick_members(const SetFamily& fam, const std::vector<std::size_t>& idx) {
  SetFamily out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(fam[i]);
  return out;
}

// ---- scatteredness ---------------------------------------------------------

/// Every member d-thick, and the distinct member closures form a d-minimal cover.
inline bool is_d_scattered(const MinorView& m, const SetFamily& fam, std::uint64_t d,
                           std::uint64_t budget = default_node_budget()) {
  if (fam.empty()) throw Error(Errc::PreconditionViolated, "family must be nonempty");
  for (Subset x : fam)
    if (!x.empty() && !thickness(m, x, budget).at_least(d)) return false;
  FlatCover own{{}, d};
  for (const auto& c : similarity_classes(m, fam)) own.flats.push_back(c.closure);
  const FlatCover best = dmin_cover_family(m, fam, d, false, budget);
  return weight(m, own) == weight(m, best);
}

// ---- uniform minors --------------------------------------------------------

/// M/C restricted to X is U_{a+1,b}; C independent.
struct UniformMinorWitness {
  Subset contract;
  Subset arc;
  int a = 0;
  int b = 0;
};

/// Every (a+1)-subset of X independent in m and r(X) = a+1 (|X| = b > a).
inline bool is_uniform_arc(const MinorView& m, Subset x, int a) {
  if (m.rank(x) != a + 1) return false;
  bool ok = true;
  for_each_k_subset(x, a + 1, [&](Subset s) {
    if (ok && m.rank(s) != a + 1) ok = false;
  });
  return ok;
}

namespace detail {

class ArcSearch {
 public:
  ArcSearch(const MinorView& m, int a, int b, NodeCounter& counter)
      : m_(m), a_(a), b_(b), counter_(counter) {}

  std::optional<Subset> run() {
    const Subset live = m_.ground() - m_.loops();
    if (live.size() < b_) return std::nullopt;
    std::vector<int> elems = live.elements();
    std::vector<int> chosen;
    if (extend(elems, 0, chosen, Subset{})) return Subset::of(chosen);
    return std::nullopt;
  }

 private:
  // forbidden: union of closures of the a-subsets of the chosen set (or the
  // closure of the chosen set while it is smaller than a).
  bool extend(const std::vector<int>& elems, std::size_t from, std::vector<int>& chosen,
              Subset forbidden) {
    counter_.tick();
    if (static_cast<int>(chosen.size()) == b_) return true;
    int avail = 0;
    for (std::size_t i = from; i < elems.size(); ++i)
      if (!forbidden.contains(elems[i])) ++avail;
    if (static_cast<int>(chosen.size()) + avail < b_) return false;
    for (std::size_t i = from; i < elems.size(); ++i) {
      const int y = elems[i];
      if (forbidden.contains(y)) continue;
      chosen.push_back(y);
      Subset next = forbidden;
      const Subset cur = Subset::of(chosen);
      if (static_cast<int>(chosen.size()) <= a_) {
        next = m_.closure(cur);
      } else {
        for_each_k_subset(cur.without(y), a_ - 1,
                          [&](Subset s) { next |= m_.closure(s.with(y)); });
      }
      if (extend(elems, i + 1, chosen, next)) return true;
      chosen.pop_back();
    }
    return false;
  }

  const MinorView& m_;
  int a_, b_;
  NodeCounter& counter_;
};

}  // namespace detail

/**
 * Searches for a U_{a+1,b}-minor. The contract set can be taken to span a
 * flat F of rank r-a-1 (extra contracted elements outside cl(X u C) change
 * nothing), and M/F depends only on F, so each such flat is tried in turn
 * with an arc search in the rank-(a+1) matroid M/F. Exceeding the node
 * budget throws; a "none" answer is always exhaustive.
 */
inline std::optional<UniformMinorWitness> has_uniform_minor(
    const MinorView& m, int a, int b, std::uint64_t budget = default_node_budget()) {
  if (a < 1 || b <= a) throw Error(Errc::PreconditionViolated, "uniform minor needs 1 <= a < b");
  const int r = m.rank();
  if (r < a + 1) return std::nullopt;
  NodeCounter counter(budget, "uniform minor search");
  const FlatLattice lat = enumerate_flats(m, r - a - 1);
  for (Subset f : lat.rank(r - a - 1)) {
    counter.tick();
    const Subset c = greedy_basis(m, f);
    const MinorView mf = m.minor(c, f - c);
    detail::ArcSearch search(mf, a, b, counter);
    if (auto x = search.run()) return UniformMinorWitness{c, *x, a, b};
  }
  return std::nullopt;
}

inline bool validate_uniform_witness(const MinorView& m, const UniformMinorWitness& w) {
  if (!m.is_independent(w.contract) || w.arc.intersects(w.contract)) return false;
  if (w.arc.size() != w.b) return false;
  return is_uniform_arc(m.contract(w.contract), w.arc, w.a);
}

// ---- lemma verdicts --------------------------------------------------------

enum class Verdict { Pass, Fail, Vacuous, BudgetExceeded };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Vacuous: return "vacuous";
    case Verdict::BudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

inline std::uint64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

/// binom(b,a)-thick with r > a must carry a U_{a+1,b}-minor.
inline Verdict check_thickuniform(const MinorView& m, int a, int b,
                                  std::uint64_t budget = default_node_budget()) {
  if (m.rank() <= a || m.ground().empty()) return Verdict::Vacuous;
  if (!thickness(m, m.ground(), budget).at_least(binom(b, a))) return Verdict::Vacuous;
  return has_uniform_minor(m, a, b, budget) ? Verdict::Pass : Verdict::Fail;
}

// ---- firm subfamilies ------------------------------------------------------

/**
 * A d-firm subfamily of rank > a, given eps(fam) >= d^(r-a), members of rank
 * a, r > a and d >= 2. Simplifies, then repeatedly passes to the members of
 * a violating hyperplane inside the restriction to its closure.
 */
inline SetFamily firm_extract(const MinorView& m, const SetFamily& fam, int a, std::uint64_t d) {
  const int r = m.rank();
  if (d < 2) throw Error(Errc::PreconditionViolated, "firm_extract needs d >= 2");
  if (a < 1 || r <= a) throw Error(Errc::PreconditionViolated, "firm_extract needs r > a >= 1");
  check_family(m, fam);
  if (!all_rank(m, fam, a)) throw Error(Errc::PreconditionViolated, "members must have rank a");
  const std::uint64_t need = checked_pow(d, r - a);
  if (static_cast<std::uint64_t>(epsilon(m, fam)) < need)
    throw Error(Errc::PreconditionViolated,
                "eps = " + std::to_string(epsilon(m, fam)) + " < d^(r-a) = " + std::to_string(need));
  SetFamily cur = simplify(m, fam);
  MinorView ctx = m;
  while (true) {
    const FirmnessResult fr = is_d_firm(ctx, cur, d);
    if (fr.firm) break;
    cur = pick_members(cur, fr.violating);
    ctx = ctx.restrict_to(fr.flat);
  }
  if (family_rank(m, cur) <= a)
    throw Error(Errc::ConstructionFailed, "extracted family has rank <= a");
  return cur;
}

/**
 * Relative version: eps_M(fam) > d^(r(M)-r(N)) eps_N(fam) for a minor N.
 * Some N-class holds more than d^(r(M)-r(N)) M-classes; those live in
 * cl_M(X u C) and firm_extract runs there.
 */
inline SetFamily firm_extract_relative(const MinorView& m, const MinorView& n, const SetFamily& fam,
                                       int a, std::uint64_t d) {
  if (!m.has_minor(n)) throw Error(Errc::PreconditionViolated, "N is not a minor of M");
  if (d < 2) throw Error(Errc::PreconditionViolated, "firm_extract needs d >= 2");
  check_family(n, fam);
  if (!all_rank(m, fam, a) || !all_rank(n, fam, a))
    throw Error(Errc::PreconditionViolated, "members must have rank a in M and N");
  const std::uint64_t k = checked_pow(d, m.rank() - n.rank());
  const auto eps_m = static_cast<std::uint64_t>(epsilon(m, fam));
  const auto eps_n = static_cast<std::uint64_t>(epsilon(n, fam));
  if (eps_m <= k * eps_n)
    throw Error(Errc::PreconditionViolated, "eps_M = " + std::to_string(eps_m) +
                                                " not above d^(r(M)-r(N)) eps_N = " +
                                                std::to_string(k * eps_n));
  const Subset c = n.contracted() - m.contracted();
  for (const auto& cls : similarity_classes(n, fam)) {
    const SetFamily members = pick_members(fam, cls.members);
    if (static_cast<std::uint64_t>(epsilon(m, members)) <= k) continue;
    const Subset span = m.closure(members.front() | c);
    return firm_extract(m.restrict_to(span), members, a, d);
  }
  throw Error(Errc::ConstructionFailed, "no N-class exceeds the majority bound");
}

// ---- pickcontract ----------------------------------------------------------

struct PickContractResult {
  int element = -1;
  int survivors = 0;  // eps_M of the members still of rank a in M/e
  int eps = 0;        // eps_M(fam)
  int rank = 0;       // r(M)
  /// survivors >= (1 - a/r) eps, compared as survivors*r >= (r-a)*eps.
  bool bound_holds = false;
};

inline PickContractResult pick_contract(const MinorView& m, const SetFamily& fam, int a) {
  const int r = m.rank();
  if (r < 1) throw Error(Errc::AllLoops, "every element is a loop");
  check_family(m, fam);
  const SetFamily simple = simplify(m, fam);
  std::vector<Subset> closures;
  for (Subset x : simple) closures.push_back(m.closure(x));
  int best = -1, best_count = 0;
  for (int f : greedy_basis(m)) {
    int count = 0;
    for (Subset cl : closures)
      if (cl.contains(f)) ++count;
    if (best < 0 || count < best_count) {
      best = f;
      best_count = count;
    }
  }
  PickContractResult res;
  res.element = best;
  res.rank = r;
  res.eps = epsilon(m, fam);
  SetFamily surviving;
  for (Subset x : fam)
    if (!m.closure(x).contains(best)) surviving.push_back(x);
  res.survivors = epsilon(m, surviving);
  res.bound_holds = static_cast<long long>(res.survivors) * r >=
                    static_cast<long long>(r - a) * res.eps;
  return res;
}

// ---- findskew --------------------------------------------------------------

struct SkewExtractionResult {
  enum class Kind { SkewFamily, Concentration } kind = Kind::SkewFamily;
  SetFamily skew;       // SkewFamily: t mutually skew members
  MinorView minor;      // Concentration: N
  SetFamily concentrated;  // Concentration: Y
  int element = -1;     // Concentration: e
};

/// Greedy maximal mutually skew subfamily, scanning in family order.
inline SetFamily greedy_skew(const MinorView& m, const SetFamily& fam) {
  SetFamily w;
  Subset u;
  int sum = 0;
  for (Subset x : fam) {
    const int rx = m.rank(x);
    if (m.rank(u | x) == sum + rx) {
      w.push_back(x);
      u |= x;
      sum += rx;
    }
  }
  return w;
}

/**
 * Either t mutually skew members, or a contraction N = M/{e_1..e_{i-1}} along
 * a basis of the maximal skew family, with the members that first lose rank
 * at e_i (a plurality) and e = e_i spanned by each of them in N.
 */
inline SkewExtractionResult find_skew(const MinorView& m, const SetFamily& fam, int a, int t) {
  if (t < 1 || a < 1) throw Error(Errc::PreconditionViolated, "find_skew needs a, t >= 1");
  if (fam.empty()) throw Error(Errc::PreconditionViolated, "family must be nonempty");
  check_family(m, fam);
  if (!all_rank(m, fam, a)) throw Error(Errc::PreconditionViolated, "members must have rank a");
  SkewExtractionResult res;
  const SetFamily w = greedy_skew(m, fam);
  if (static_cast<int>(w.size()) >= t) {
    res.kind = SkewExtractionResult::Kind::SkewFamily;
    res.skew.assign(w.begin(), w.begin() + t);
    return res;
  }
  const std::vector<int> chain = greedy_basis(m, family_union(w)).elements();
  const int k = static_cast<int>(chain.size());
  // first index i (1-based) with r_{M/{e_1..e_i}}(X) < a
  std::vector<int> first_drop(fam.size(), 0);
  std::vector<int> count(k + 1, 0);
  for (std::size_t j = 0; j < fam.size(); ++j) {
    Subset prefix;
    for (int i = 1; i <= k; ++i) {
      prefix = prefix.with(chain[i - 1]);
      if (m.rank(fam[j] | prefix) - i < a) {
        first_drop[j] = i;
        break;
      }
    }
    if (first_drop[j] == 0)
      throw Error(Errc::ConstructionFailed, "member keeps rank a after the whole chain");
    ++count[first_drop[j]];
  }
  int i0 = 1;
  for (int i = 2; i <= k; ++i)
    if (count[i] > count[i0]) i0 = i;
  Subset c;
  for (int i = 0; i < i0 - 1; ++i) c = c.with(chain[i]);
  res.kind = SkewExtractionResult::Kind::Concentration;
  res.minor = m.contract(c);
  res.element = chain[i0 - 1];
  for (std::size_t j = 0; j < fam.size(); ++j)
    if (first_drop[j] == i0) res.concentrated.push_back(fam[j]);
  return res;
}

}  // namespace mcov
