#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "mcov/subset.hpp"

namespace mcov {

/// Seeded generator with platform-independent output. The engine sequence of
/// mt19937_64 is fixed by the standard; the std distributions are not, so
/// ranges are reduced by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [lo, hi].
  int uniform(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
  }

  bool coin(int num = 1, int den = 2) { return uniform(0, den - 1) < num; }

  /// Each element of `from` kept independently with probability num/den.
  Subset subset(Subset from, int num = 1, int den = 2) {
    Subset s;
    for (int e : from)
      if (coin(num, den)) s = s.with(e);
    return s;
  }

  /// Uniformly random k-subset of `from` (k clamped to |from|).
  Subset k_subset(Subset from, int k) {
    std::vector<int> elems = from.elements();
    Subset s;
    const int n = static_cast<int>(elems.size());
    for (int i = 0; i < k && i < n; ++i) {
      const int j = uniform(i, n - 1);
      std::swap(elems[i], elems[j]);
      s = s.with(elems[i]);
    }
    return s;
  }

  int pick(Subset from) {
    const std::vector<int> elems = from.elements();
    return elems[uniform(0, static_cast<int>(elems.size()) - 1)];
  }

 private:
  std::mt19937_64 engine_;
};

/// Derives an independent stream seed from a base seed and a label.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_label(const std::string_view label) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : label) h = (h ^ c) * 1099511628211ULL;
  return h;
}

}  // namespace mcov
