#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "mcov/family.hpp"
#include "mcov/io.hpp"
#include "mcov/rng.hpp"

using namespace mcov;

namespace {

MinorView fano() { return MinorView(make_pg(3, 2)); }

SetFamily lines() {
  return {Subset{0, 1, 2}, Subset{0, 3, 4}, Subset{0, 5, 6}, Subset{1, 3, 5},
          Subset{1, 4, 6}, Subset{2, 3, 6}, Subset{2, 4, 5}};
}

}  // namespace

TEST(Family, UnionRankClosure) {
  const MinorView m = fano();
  const SetFamily f = {Subset{0}, Subset{1}};
  EXPECT_EQ(family_union(f), (Subset{0, 1}));
  EXPECT_EQ(family_rank(m, f), 2);
  EXPECT_EQ(family_closure(m, f), (Subset{0, 1, 2}));
  EXPECT_EQ(family_rank(m, {}), 0);
}

TEST(Family, EpsilonCountsDistinctClosures) {
  const MinorView m = fano();
  // Two points of a line span it: all pairs from one line are similar.
  const SetFamily pairs = {Subset{0, 1}, Subset{0, 2}, Subset{1, 2}, Subset{3, 5}};
  EXPECT_EQ(epsilon(m, pairs), 2);
  EXPECT_FALSE(is_simple(m, pairs));
  EXPECT_EQ(simplify(m, pairs), (SetFamily{Subset{0, 1}, Subset{3, 5}}));
  EXPECT_TRUE(is_simple(m, lines()));
  const auto cls = similarity_classes(m, pairs);
  ASSERT_EQ(cls.size(), 2u);
  EXPECT_EQ(cls[0].members, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(cls[1].closure, (Subset{1, 3, 5}));
}

TEST(Family, EpsilonAgreesWithPairwiseSimilarity) {
  const MinorView m(make_pg(3, 3));
  Rng rng(21);
  for (int t = 0; t < 50; ++t) {
    SetFamily fam;
    for (int i = rng.uniform(1, 10); i > 0; --i) fam.push_back(rng.k_subset(m.ground(), rng.uniform(1, 2)));
    // greedy count of pairwise-dissimilar representatives
    std::vector<Subset> reps;
    for (Subset x : fam) {
      bool fresh = true;
      for (Subset y : reps) fresh = fresh && !similar(m, x, y);
      if (fresh) reps.push_back(x);
    }
    EXPECT_EQ(epsilon(m, fam), static_cast<int>(reps.size()));
  }
}

TEST(Family, SkewnessAndRankFilters) {
  const MinorView m(make_pg(4, 2));
  EXPECT_TRUE(mutually_skew(m, {Subset{0}, Subset{1}, Subset{3}}));
  EXPECT_FALSE(mutually_skew(m, {Subset{0}, Subset{1}, Subset{2}}));
  EXPECT_TRUE(is_skew(m, Subset{0}, Subset{1}));
  const SetFamily mixed = {Subset{0}, Subset{0, 1}, Subset{0, 1, 2}};
  EXPECT_EQ(rank_filter(m, mixed, 2).size(), 2u);
  EXPECT_FALSE(all_rank(m, mixed, 2));
  EXPECT_TRUE(families_similar(m, {Subset{0, 1}}, {Subset{1, 2}}));
  EXPECT_THROW(check_family(m.remove(Subset{0}), mixed), Error);
}

TEST(Family, FileRoundTrip) {
  std::ostringstream out;
  write_family(out, lines());
  std::istringstream in(out.str());
  EXPECT_EQ(read_family(in, 7), lines());
  const SetFamily disk = read_family_file(std::string(MCOV_DATA_DIR) + "/fano-lines.family", 7);
  std::set<std::uint64_t> a, b;
  for (Subset x : disk) a.insert(x.bits());
  for (Subset x : lines()) b.insert(x.bits());
  EXPECT_EQ(a, b);
  std::istringstream bad("0 9\n");
  EXPECT_THROW(read_family(bad, 7), Error);
}

TEST(Rng, SeededStreamsAreReproducible) {
  Rng a(mix_seed(42, hash_label("x"))), b(mix_seed(42, hash_label("x"))), c(mix_seed(42, hash_label("y")));
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next();
    EXPECT_EQ(va, b.next());
    differs = differs || va != c.next();
  }
  EXPECT_TRUE(differs);
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    const int v = r.uniform(-3, 4);
    EXPECT_GE(v, -3);
    EXPECT_LE(v, 4);
    EXPECT_EQ(r.k_subset(Subset::prefix(9), 4).size(), 4);
  }
}
