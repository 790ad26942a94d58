#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "mcov/family.hpp"
#include "mcov/structure.hpp"

// Exhaustive reference implementations, for cross-checking the fast paths
// on small inputs.
namespace mcov::oracle {

/// Definitional firmness over all 2^|fam| subfamilies (|fam| <= 24).
inline bool firm(const MinorView& m, const SetFamily& fam, std::uint64_t d) {
  const std::size_t k = fam.size();
  if (k > 24) throw Error(Errc::PreconditionViolated, "brute-force firmness needs |fam| <= 24");
  const int r = family_rank(m, fam);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
    const auto size = static_cast<std::uint64_t>(std::popcount(mask));
    if (size * d <= k) continue;
    Subset u;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) u |= fam[i];
    if (m.rank(u) < r) return false;
  }
  return true;
}

/// Every independent C and every b-subset X of E - C.
inline std::optional<UniformMinorWitness> uniform_minor(const MinorView& m, int a, int b) {
  const Subset ground = m.ground();
  for (std::uint64_t cw = 0; cw < (std::uint64_t{1} << ground.size()); ++cw) {
    Subset c;
    int bit = 0;
    for (int e : ground) {
      if (cw >> bit & 1) c = c.with(e);
      ++bit;
    }
    if (!m.is_independent(c)) continue;
    const MinorView mc = m.contract(c);
    std::optional<Subset> hit;
    for_each_k_subset(ground - c, b, [&](Subset x) {
      if (!hit && is_uniform_arc(mc, x, a)) hit = x;
    });
    if (hit) return UniformMinorWitness{c, *hit, a, b};
  }
  return std::nullopt;
}

/// Least number of rank-<=a sets covering E, by trying every k-subset of the
/// rank-a flats for increasing k.
inline std::uint64_t tau_a(const MinorView& m, int a) {
  if (m.ground().empty()) return 0;
  if (m.rank() <= a) return 1;
  const std::vector<Subset> flats = enumerate_flats(m, a).rank(a);
  const Subset target = m.ground();
  const auto nf = static_cast<int>(flats.size());
  for (int k = 1; k <= nf; ++k) {
    bool found = false;
    std::vector<int> pick(k);
    auto rec = [&](auto&& self, int pos, int from, Subset u) -> void {
      if (found) return;
      if (pos == k) {
        found = target.is_subset_of(u);
        return;
      }
      for (int i = from; i <= nf - (k - pos) && !found; ++i) self(self, pos + 1, i + 1, u | flats[i]);
    };
    rec(rec, 0, 0, Subset{});
    if (found) return static_cast<std::uint64_t>(k);
  }
  return static_cast<std::uint64_t>(nf);
}

}  // namespace mcov::oracle
