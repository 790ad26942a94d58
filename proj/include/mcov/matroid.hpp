#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "mcov/error.hpp"
#include "mcov/gf.hpp"
#include "mcov/subset.hpp"

namespace mcov {

enum class MatroidKind { Uniform, Linear, Graphic, ProjectiveGeometry, ExplicitBases };

struct UniformData {
  int rank = 0;
};

/// Column matrix over GF(q); element e is column e.
struct LinearData {
  std::shared_ptr<const GaloisField> field;
  int rows = 0;
  std::vector<std::vector<int>> columns;
};

struct GraphicData {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;
};

struct BasesData {
  std::vector<Subset> bases;
};

namespace detail {

// Thread-safe monotone memo. Dense atomic table for small ground sets, a
// locked hash map otherwise. Values are idempotent so races are benign.
class RankMemo {
 public:
  static constexpr int kDenseLimit = 20;

  explicit RankMemo(int n) : n_(n) {
    if (n_ >= 0 && n_ <= kDenseLimit) {
      const std::size_t size = std::size_t{1} << n_;
      dense_ = std::make_unique<std::atomic<std::int8_t>[]>(size);
      for (std::size_t i = 0; i < size; ++i) dense_[i].store(-1, std::memory_order_relaxed);
    }
  }

  int find(Subset x) const {
    if (dense_) return dense_[x.bits()].load(std::memory_order_relaxed);
    std::shared_lock lock(mutex_);
    auto it = sparse_.find(x.bits());
    return it == sparse_.end() ? -1 : it->second;
  }

  void store(Subset x, int r) const {
    if (dense_) {
      dense_[x.bits()].store(static_cast<std::int8_t>(r), std::memory_order_relaxed);
      return;
    }
    std::unique_lock lock(mutex_);
    sparse_.emplace(x.bits(), static_cast<std::int8_t>(r));
  }

 private:
  int n_;
  std::unique_ptr<std::atomic<std::int8_t>[]> dense_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::uint64_t, std::int8_t> sparse_;
};

inline int linear_rank(const LinearData& d, Subset x) {
  const GaloisField& f = *d.field;
  if (f.order() == 2 && d.rows <= 64) {
    // Packed XOR elimination with pivots at lowest set bit.
    std::uint64_t basis[64];
    int rank = 0;
    for (int e : x) {
      std::uint64_t v = 0;
      for (int r = 0; r < d.rows; ++r)
        if (d.columns[e][r]) v |= std::uint64_t{1} << r;
      for (int i = 0; i < rank && v; ++i)
        if ((v >> std::countr_zero(basis[i])) & 1U) v ^= basis[i];
      if (v) {
        // Keep the basis reduced so each pivot bit appears only in its row.
        const int pivot = std::countr_zero(v);
        for (int i = 0; i < rank; ++i)
          if ((basis[i] >> pivot) & 1U) basis[i] ^= v;
        basis[rank++] = v;
        if (rank == d.rows) break;
      }
    }
    return rank;
  }
  std::vector<std::vector<int>> basis;
  std::vector<int> pivots;
  for (int e : x) {
    std::vector<int> v = d.columns[e];
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const int c = v[pivots[i]];
      if (c == 0) continue;
      for (int r = 0; r < d.rows; ++r) v[r] = f.sub(v[r], f.mul(c, basis[i][r]));
    }
    int pivot = -1;
    for (int r = 0; r < d.rows; ++r)
      if (v[r] != 0) { pivot = r; break; }
    if (pivot < 0) continue;
    const int s = f.inv(v[pivot]);
    for (int r = 0; r < d.rows; ++r) v[r] = f.mul(v[r], s);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const int c = basis[i][pivot];
      if (c == 0) continue;
      for (int r = 0; r < d.rows; ++r) basis[i][r] = f.sub(basis[i][r], f.mul(c, v[r]));
    }
    basis.push_back(std::move(v));
    pivots.push_back(pivot);
    if (static_cast<int>(basis.size()) == d.rows) break;
  }
  return static_cast<int>(basis.size());
}

// r(X) = (vertices touched by X) - (components of the subgraph X).
inline int graphic_rank(const GraphicData& g, Subset x) {
  std::vector<int> parent(g.vertices);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  int rank = 0;
  for (int e : x) {
    auto [u, v] = g.edges[e];
    const int ru = find(u), rv = find(v);
    if (ru != rv) { parent[ru] = rv; ++rank; }
  }
  return rank;
}

inline int bases_rank(const BasesData& b, Subset x) {
  int best = 0;
  for (Subset basis : b.bases) best = std::max(best, (basis & x).size());
  return best;
}

}  // namespace detail

/**
 * A concrete matroid: ground set {0..n-1} plus a memoized rank oracle.
 * Immutable after construction apart from the memo; always held through
 * shared_ptr<const MatroidInstance>.
 */
class MatroidInstance {
 public:
  using Oracle = std::variant<UniformData, LinearData, GraphicData, BasesData>;

  MatroidInstance(MatroidKind kind, int n, Oracle oracle)
      : kind_(kind), n_(n), oracle_(std::move(oracle)), memo_(n) {
    if (n < 0 || n > kMaxElements)
      throw Error(Errc::GroundSetTooLarge, "ground set of size " + std::to_string(n) +
                                               " exceeds " + std::to_string(kMaxElements));
  }

  MatroidKind kind() const { return kind_; }
  int size() const { return n_; }
  Subset ground() const { return Subset::prefix(n_); }
  const Oracle& oracle() const { return oracle_; }

  /// Rank of X in the full instance (X within 0..n-1).
  int rank(Subset x) const {
    if (!x.is_subset_of(ground()))
      throw Error(Errc::ElementOutOfRange, "subset {" + to_string(x) + "} outside ground set");
    if (const auto* u = std::get_if<UniformData>(&oracle_)) return std::min(x.size(), u->rank);
    const int cached = memo_.find(x);
    if (cached >= 0) return cached;
    const int r = std::visit(
        [&](const auto& d) -> int {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, LinearData>) return detail::linear_rank(d, x);
          else if constexpr (std::is_same_v<T, GraphicData>) return detail::graphic_rank(d, x);
          else if constexpr (std::is_same_v<T, BasesData>) return detail::bases_rank(d, x);
          else return std::min(x.size(), d.rank);
        },
        oracle_);
    memo_.store(x, r);
    return r;
  }

  /// For Linear and ProjectiveGeometry kinds.
  const LinearData* linear() const { return std::get_if<LinearData>(&oracle_); }

 private:
  MatroidKind kind_;
  int n_;
  Oracle oracle_;
  detail::RankMemo memo_;
};

using InstancePtr = std::shared_ptr<const MatroidInstance>;

inline InstancePtr make_uniform(int r, int n) {
  if (r < 0 || r > n) throw Error(Errc::PreconditionViolated, "uniform matroid needs 0 <= r <= n");
  return std::make_shared<const MatroidInstance>(MatroidKind::Uniform, n, UniformData{r});
}

/// `matrix` is row-major, rows x cols, entries in [0, q).
/// With zero rows every column is a loop; pass `cols` explicitly then.
inline InstancePtr make_linear(std::shared_ptr<const GaloisField> field,
                               const std::vector<std::vector<int>>& matrix, int cols = -1) {
  const int rows = static_cast<int>(matrix.size());
  if (cols < 0) cols = rows ? static_cast<int>(matrix[0].size()) : 0;
  LinearData d{std::move(field), rows, std::vector<std::vector<int>>(cols, std::vector<int>(rows))};
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(matrix[r].size()) != cols)
      throw Error(Errc::ParseError, "ragged matrix");
    for (int c = 0; c < cols; ++c) {
      if (matrix[r][c] < 0 || matrix[r][c] >= d.field->order())
        throw Error(Errc::ElementOutOfRange, "matrix entry outside field");
      d.columns[c][r] = matrix[r][c];
    }
  }
  return std::make_shared<const MatroidInstance>(MatroidKind::Linear, cols, std::move(d));
}

inline InstancePtr make_graphic(int vertices, std::vector<std::pair<int, int>> edges) {
  for (auto [u, v] : edges)
    if (u < 0 || v < 0 || u >= vertices || v >= vertices)
      throw Error(Errc::ElementOutOfRange, "edge endpoint outside vertex range");
  const int n = static_cast<int>(edges.size());
  return std::make_shared<const MatroidInstance>(MatroidKind::Graphic, n,
                                                 GraphicData{vertices, std::move(edges)});
}

inline InstancePtr make_bases(int n, std::vector<Subset> bases) {
  if (bases.empty()) throw Error(Errc::PreconditionViolated, "a matroid has at least one basis");
  for (Subset b : bases)
    if (!b.is_subset_of(Subset::prefix(n)))
      throw Error(Errc::ElementOutOfRange, "basis element outside ground set");
  return std::make_shared<const MatroidInstance>(MatroidKind::ExplicitBases, n,
                                                 BasesData{std::move(bases)});
}

/// Canonical projective points of GF(q)^rank: last nonzero coordinate is 1,
/// sorted lexicographically by coordinate vector.
inline std::vector<std::vector<int>> projective_points(int rank, int q) {
  std::vector<std::vector<int>> points;
  std::vector<int> v(rank, 0);
  long long total = 1;
  for (int i = 0; i < rank; ++i) total *= q;
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    for (int i = rank - 1; i >= 0; --i) { v[i] = static_cast<int>(c % q); c /= q; }
    int last = -1;
    for (int i = rank - 1; i >= 0; --i)
      if (v[i] != 0) { last = i; break; }
    if (last >= 0 && v[last] == 1) points.push_back(v);
  }
  return points;
}

/// PG(rank-1, q) as a linear matroid on its canonical points.
inline InstancePtr make_pg(int rank, int q) {
  auto field = GaloisField::make(q);
  long long count = 1, pw = 1;
  for (int i = 1; i < rank; ++i) { pw *= q; count += pw; }
  if (rank < 1 || count > kMaxElements)
    throw Error(Errc::SizeCapExceeded, "PG(" + std::to_string(rank - 1) + "," + std::to_string(q) +
                                           ") exceeds the ground set cap");
  const auto points = projective_points(rank, q);
  LinearData d{std::move(field), rank, points};
  return std::make_shared<const MatroidInstance>(MatroidKind::ProjectiveGeometry,
                                                 static_cast<int>(points.size()), std::move(d));
}

/**
 * A minor M / C \ D of a base instance. Every operation in the library takes
 * one of these; a plain instance is the view with C = D = {}. Views of views
 * flatten to one (C, D) pair against the base.
 */
class MinorView {
 public:
  MinorView() = default;
  MinorView(InstancePtr base) : base_(std::move(base)) {}  // NOLINT: implicit by design of the API

  static MinorView of(InstancePtr base, Subset contracted, Subset deleted) {
    if (contracted.intersects(deleted))
      throw Error(Errc::OverlappingSets, "contract and delete sets overlap");
    if (!(contracted | deleted).is_subset_of(base->ground()))
      throw Error(Errc::ElementOutOfRange, "minor sets outside ground set");
    MinorView v(std::move(base));
    v.contracted_ = contracted;
    v.deleted_ = deleted;
    v.base_rank_c_ = v.base_->rank(contracted);
    return v;
  }

  const InstancePtr& base() const { return base_; }
  Subset contracted() const { return contracted_; }
  Subset deleted() const { return deleted_; }

  /// Live ground set E(M) - (C u D), in base indices.
  Subset ground() const { return base_->ground() - contracted_ - deleted_; }
  int size() const { return ground().size(); }

  int rank(Subset x) const {
    check(x);
    return base_->rank(x | contracted_) - base_rank_c_;
  }
  int rank() const { return rank(ground()); }

  Subset closure(Subset x) const {
    check(x);
    const int base_r = base_->rank(x | contracted_);
    Subset cl = x;
    for (int e : ground() - x)
      if (base_->rank(x.with(e) | contracted_) == base_r) cl = cl.with(e);
    return cl;
  }

  Subset loops() const { return closure(Subset{}); }
  bool is_loop(int e) const { return rank(Subset::singleton(e)) == 0; }
  bool is_flat(Subset x) const { return closure(x) == x; }
  bool is_independent(Subset x) const { return rank(x) == x.size(); }

  /// M / C \ D of this view (C, D within the live ground set).
  MinorView minor(Subset c, Subset d) const {
    if (c.intersects(d)) throw Error(Errc::OverlappingSets, "contract and delete sets overlap");
    check(c | d);
    return of(base_, contracted_ | c, deleted_ | d);
  }
  MinorView contract(Subset c) const { return minor(c, {}); }
  MinorView remove(Subset d) const { return minor({}, d); }
  /// M | X
  MinorView restrict_to(Subset x) const {
    check(x);
    return minor({}, ground() - x);
  }

  /// True when `other` is a minor of this view over the same base.
  bool has_minor(const MinorView& other) const {
    return other.base_ == base_ && contracted_.is_subset_of(other.contracted_) &&
           deleted_.is_subset_of(other.deleted_);
  }

  bool same_view(const MinorView& o) const {
    return base_ == o.base_ && contracted_ == o.contracted_ && deleted_ == o.deleted_;
  }

  void check(Subset x) const {
    if (!x.is_subset_of(ground()))
      throw Error(Errc::ElementOutOfRange, "subset {" + to_string(x) + "} not within live ground set");
  }

 private:
  InstancePtr base_;
  Subset contracted_;
  Subset deleted_;
  int base_rank_c_ = 0;
};

/// Greedy basis of X scanning elements in increasing index order.
inline Subset greedy_basis(const MinorView& m, Subset x) {
  Subset b;
  int r = 0;
  for (int e : x) {
    if (m.rank(b.with(e)) > r) { b = b.with(e); ++r; }
  }
  return b;
}

inline Subset greedy_basis(const MinorView& m) { return greedy_basis(m, m.ground()); }

/// All bases of the view, in increasing word order. Exponential; small n only.
inline std::vector<Subset> enumerate_bases(const MinorView& m) {
  std::vector<Subset> out;
  const int r = m.rank();
  for_each_k_subset(m.ground(), r, [&](Subset s) {
    if (m.rank(s) == r) out.push_back(s);
  });
  return out;
}

inline bool is_skew(const MinorView& m, Subset x, Subset y) {
  return m.rank(x | y) == m.rank(x) + m.rank(y);
}

inline bool similar(const MinorView& m, Subset x, Subset y) {
  return m.closure(x) == m.closure(y);
}

}  // namespace mcov
