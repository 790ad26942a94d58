#pragma once

#include <algorithm>
#include <cstddef>
#include <unordered_set>
#include <vector>

#include "mcov/matroid.hpp"

namespace mcov {

inline constexpr std::size_t kMaxLatticeSize = std::size_t{1} << 20;

/// Flats of a view grouped by rank. Within a rank, flats are in lex_less order.
struct FlatLattice {
  std::vector<std::vector<Subset>> by_rank;

  std::size_t size() const {
    std::size_t s = 0;
    for (const auto& level : by_rank) s += level.size();
    return s;
  }
  int max_rank() const { return static_cast<int>(by_rank.size()) - 1; }
  const std::vector<Subset>& rank(int k) const { return by_rank.at(k); }

  /// All flats, rank-ascending then lexicographic.
  std::vector<Subset> all() const {
    std::vector<Subset> out;
    for (const auto& level : by_rank) out.insert(out.end(), level.begin(), level.end());
    return out;
  }
};

/**
 * All flats of rank <= max_rank, by breadth-first extension of cl({}):
 * every rank-(k+1) flat is cl(F + e) for some rank-k flat F and e outside F.
 */
inline FlatLattice enumerate_flats(const MinorView& m, int max_rank,
                                   std::size_t cap = kMaxLatticeSize) {
  const int r = m.rank();
  if (max_rank > r) max_rank = r;
  if (max_rank < 0) max_rank = 0;
  const Subset ground = m.ground();
  FlatLattice lat;
  lat.by_rank.push_back({m.closure(Subset{})});
  std::size_t total = 1;
  for (int k = 0; k < max_rank; ++k) {
    std::unordered_set<std::uint64_t> seen;
    std::vector<Subset> next;
    for (Subset f : lat.by_rank[k]) {
      Subset todo = ground - f;
      while (!todo.empty()) {
        const int e = todo.lowest();
        const Subset g = m.closure(f.with(e));
        todo -= g;
        if (seen.insert(g.bits()).second) {
          next.push_back(g);
          if (++total > cap)
            throw Error(Errc::LatticeTooLarge, "flat lattice exceeds " + std::to_string(cap) + " flats");
        }
      }
    }
    std::sort(next.begin(), next.end(), lex_less);
    lat.by_rank.push_back(std::move(next));
  }
  return lat;
}

}  // namespace mcov
