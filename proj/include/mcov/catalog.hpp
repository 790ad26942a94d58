#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mcov/matroid.hpp"
#include "mcov/rng.hpp"

namespace mcov {

struct CatalogEntry {
  std::string id;
  InstancePtr matroid;
};

/// Sizes for the seeded random-linear catalog.
struct RandomLinearOptions {
  int count = 12;
  int min_rows = 2;
  int max_rows = 5;
  int max_cols = 13;
  std::vector<int> fields = {2, 3, 4};
};

inline const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {"small-uniform", "small-pg", "small-graphic",
                                                 "random-linear"};
  return names;
}

namespace detail {

inline std::string pad2(int v) { return (v < 10 ? "0" : "") + std::to_string(v); }

inline std::vector<CatalogEntry> small_uniform() {
  std::vector<CatalogEntry> out;
  for (int n = 1; n <= 8; ++n)
    for (int r = 0; r <= n; ++r)
      out.push_back({"uniform-" + std::to_string(r) + "-" + std::to_string(n), make_uniform(r, n)});
  return out;
}

inline std::vector<CatalogEntry> small_pg() {
  // PG(rank-1, q) with rank <= 4, q <= 4, at most 24 points.
  const std::pair<int, int> cells[] = {{2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}, {3, 4}, {4, 2}};
  std::vector<CatalogEntry> out;
  for (auto [rank, q] : cells)
    out.push_back({"pg-" + std::to_string(rank - 1) + "-" + std::to_string(q), make_pg(rank, q)});
  return out;
}

inline std::vector<std::pair<int, int>> cycle_edges(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return e;
}

inline std::vector<CatalogEntry> small_graphic() {
  std::vector<CatalogEntry> out;
  for (int n = 3; n <= 6; ++n)
    out.push_back({"graphic-C" + std::to_string(n), make_graphic(n, cycle_edges(n))});
  for (int spokes = 3; spokes <= 5; ++spokes) {
    // Rim on vertices 0..spokes-1, hub = spokes.
    auto e = cycle_edges(spokes);
    for (int i = 0; i < spokes; ++i) e.emplace_back(i, spokes);
    out.push_back({"graphic-W" + std::to_string(spokes), make_graphic(spokes + 1, e)});
  }
  for (int n : {4, 5}) {
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
    out.push_back({"graphic-K" + std::to_string(n), make_graphic(n, e)});
  }
  return out;
}

inline std::vector<CatalogEntry> random_linear(std::uint64_t seed, const RandomLinearOptions& opt) {
  std::vector<CatalogEntry> out;
  Rng rng(mix_seed(seed, hash_label("random-linear")));
  for (int i = 0; i < opt.count; ++i) {
    const int q = opt.fields[rng.uniform(0, static_cast<int>(opt.fields.size()) - 1)];
    const int rows = rng.uniform(opt.min_rows, opt.max_rows);
    const int cols = rng.uniform(rows + 1, opt.max_cols);
    std::vector<std::vector<int>> m(rows, std::vector<int>(cols));
    for (auto& row : m)
      for (int& x : row) x = rng.uniform(0, q - 1);
    out.push_back({"linear-" + pad2(i), make_linear(GaloisField::make(q), m)});
  }
  return out;
}

}  // namespace detail

/// Deterministic catalog for a name and seed. "all" concatenates the four.
inline std::vector<CatalogEntry> catalog_generate(const std::string& name, std::uint64_t seed,
                                                  const RandomLinearOptions& opt = {}) {
  if (name == "small-uniform") return detail::small_uniform();
  if (name == "small-pg") return detail::small_pg();
  if (name == "small-graphic") return detail::small_graphic();
  if (name == "random-linear") return detail::random_linear(seed, opt);
  if (name == "all") {
    std::vector<CatalogEntry> out;
    for (const auto& n : catalog_names()) {
      auto part = catalog_generate(n, seed, opt);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  throw Error(Errc::UnknownCatalog, "unknown catalog '" + name + "'");
}

}  // namespace mcov
