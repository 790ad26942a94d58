#pragma once

#include <algorithm>
#include <cstddef>
#include <unordered_map>
#include <vector>

#include "mcov/matroid.hpp"

namespace mcov {

/// Ordered list of subsets of a ground set. Duplicates are allowed and kept;
/// operations never reorder members.
using SetFamily = std::vector<Subset>;

struct SimilarityClass {
  Subset closure;
  std::vector<std::size_t> members;  // indices into the family
};

inline Subset family_union(const SetFamily& fam) {
  Subset u;
  for (Subset x : fam) u |= x;
  return u;
}

/// r_M(union of the family)
inline int family_rank(const MinorView& m, const SetFamily& fam) {
  return m.rank(family_union(fam));
}

inline Subset family_closure(const MinorView& m, const SetFamily& fam) {
  return m.closure(family_union(fam));
}

/// Partition by equal closure; classes ordered by first member.
inline std::vector<SimilarityClass> similarity_classes(const MinorView& m, const SetFamily& fam) {
  std::vector<SimilarityClass> classes;
  std::unordered_map<std::uint64_t, std::size_t> index;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const Subset cl = m.closure(fam[i]);
    auto [it, inserted] = index.emplace(cl.bits(), classes.size());
    if (inserted) classes.push_back({cl, {}});
    classes[it->second].members.push_back(i);
  }
  return classes;
}

/// Maximum size of a simple subfamily = number of distinct closures.
inline int epsilon(const MinorView& m, const SetFamily& fam) {
  std::vector<std::uint64_t> seen;
  seen.reserve(fam.size());
  for (Subset x : fam) seen.push_back(m.closure(x).bits());
  std::sort(seen.begin(), seen.end());
  return static_cast<int>(std::unique(seen.begin(), seen.end()) - seen.begin());
}

/// First member of every similarity class, in family order.
inline SetFamily simplify(const MinorView& m, const SetFamily& fam) {
  SetFamily out;
  for (const auto& c : similarity_classes(m, fam)) out.push_back(fam[c.members.front()]);
  return out;
}

inline bool is_simple(const MinorView& m, const SetFamily& fam) {
  return epsilon(m, fam) == static_cast<int>(fam.size());
}

inline bool mutually_skew(const MinorView& m, const SetFamily& fam) {
  int sum = 0;
  for (Subset x : fam) sum += m.rank(x);
  return family_rank(m, fam) == sum;
}

/// Members of `fam` of rank exactly a.
inline SetFamily rank_filter(const MinorView& m, const SetFamily& fam, int a) {
  SetFamily out;
  for (Subset x : fam)
    if (m.rank(x) == a) out.push_back(x);
  return out;
}

inline bool all_rank(const MinorView& m, const SetFamily& fam, int a) {
  return std::all_of(fam.begin(), fam.end(), [&](Subset x) { return m.rank(x) == a; });
}

/// Two families are similar when their unions have equal closure.
inline bool families_similar(const MinorView& m, const SetFamily& x, const SetFamily& y) {
  return family_closure(m, x) == family_closure(m, y);
}

inline void check_family(const MinorView& m, const SetFamily& fam) {
  for (Subset x : fam) m.check(x);
}

}  // namespace mcov
