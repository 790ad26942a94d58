#include <gtest/gtest.h>

#include <limits>

#include "mcov/catalog.hpp"
#include "mcov/cover.hpp"
#include "mcov/oracle.hpp"
#include "mcov/rng.hpp"

using namespace mcov;

namespace {

// Least weight over every subfamily of the flats (lattices up to ~20 flats).
std::uint64_t brute_weighted(const MinorView& m, std::uint64_t d) {
  const std::vector<Subset> flats = enumerate_flats(m, m.rank()).all();
  const Subset need = m.ground() - m.loops();
  const std::size_t k = flats.size();
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::uint64_t w = 1; w < (std::uint64_t{1} << k); ++w) {
    Subset u;
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (w >> i & 1) {
        u |= flats[i];
        total += checked_pow(d, m.rank(flats[i]));
      }
    if (need.is_subset_of(u)) best = std::min(best, total);
  }
  return best;
}

// Least weight cover of the family, same exhaustive scheme.
std::uint64_t brute_family(const MinorView& m, const SetFamily& fam, std::uint64_t d) {
  const std::vector<Subset> flats = enumerate_flats(m, m.rank()).all();
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::uint64_t w = 1; w < (std::uint64_t{1} << flats.size()); ++w) {
    FlatCover c{{}, d};
    for (std::size_t i = 0; i < flats.size(); ++i)
      if (w >> i & 1) c.flats.push_back(flats[i]);
    if (covers_family(c, fam)) best = std::min(best, weight(m, c));
  }
  return best;
}

MinorView fano() { return MinorView(make_pg(3, 2)); }

}  // namespace

TEST(Tau, ProjectivePlaneValues) {
  EXPECT_EQ(tau_a(fano(), 1).value, 7u);
  EXPECT_EQ(tau_a(fano(), 2).value, 3u);
  EXPECT_EQ(tau_a(fano(), 3).value, 1u);
  const MinorView pg23(make_pg(3, 3));
  EXPECT_EQ(tau_a(pg23, 1).value, 13u);
  EXPECT_EQ(oracle::tau_a(pg23, 1), 13u);
  // lines of PG(3,2) cover its 15 points: a spread has 5 lines
  EXPECT_EQ(tau_a(MinorView(make_pg(4, 2)), 2).value, 5u);
}

TEST(Tau, ProjectiveLinesCoveringPlanes) {
  // Two lines miss a point of the plane, and two planes of PG(3,2) miss 4.
  EXPECT_EQ(tau_a(MinorView(make_pg(3, 3)), 2).value, 4u);
  EXPECT_EQ(tau_a(MinorView(make_pg(4, 2)), 3).value, 3u);
  EXPECT_EQ(oracle::tau_a(MinorView(make_pg(4, 2)), 3), 3u);
}

TEST(Tau, UniformCeilingFormula) {
  for (int b = 2; b <= 9; ++b)
    for (int a = 1; a < b; ++a) {
      const MinorView m(make_uniform(a + 1, b));
      EXPECT_EQ(tau_a(m, a).value, static_cast<std::uint64_t>((b + a - 1) / a)) << a << "," << b;
    }
}

TEST(Tau, AgreesWithSubsetSearchOracle) {
  for (const auto& entry : catalog_generate("all", 42)) {
    const MinorView m(entry.matroid);
    if (m.size() > 13) continue;
    for (int a = 1; a <= std::min(3, m.rank()); ++a) {
      const CoverResult r = tau_a(m, a);
      ASSERT_EQ(r.value, oracle::tau_a(m, a)) << entry.id << " a=" << a;
      EXPECT_TRUE(covers_ground(m, r.witness)) << entry.id;
      EXPECT_EQ(r.witness.flats.size(), r.value);
      for (Subset f : r.witness.flats) EXPECT_LE(m.rank(f), a);
    }
  }
}

TEST(Tau, WitnessAndDegenerateCases) {
  const CoverResult r = tau_a(fano(), 1);
  EXPECT_EQ(serialize_cover(fano(), r.witness).substr(0, 31), "cover d=1 weight=7 count=7\n0\n1\n");
  EXPECT_EQ(tau_a(fano().contract(Subset::prefix(7)), 1).value, 0u);
  EXPECT_EQ(tau_a(MinorView(make_uniform(0, 3)), 1).value, 1u);
  EXPECT_THROW(tau_a(fano(), 0), Error);
  // parallel pairs collapse to one point each
  const MinorView par(make_linear(GaloisField::make(2), {{1, 1, 0, 0, 1}, {0, 0, 1, 1, 1}}));
  EXPECT_EQ(tau_a(par, 1).value, 3u);
}

TEST(TauWeighted, FanoValues) {
  const CoverResult two = tau_weighted(fano(), 2);
  EXPECT_EQ(two.value, 8u);
  ASSERT_EQ(two.witness.flats.size(), 1u);
  EXPECT_EQ(two.witness.flats[0], Subset::prefix(7));
  const CoverResult ten = tau_weighted(fano(), 10);
  EXPECT_EQ(ten.value, 70u);
  EXPECT_EQ(ten.witness.flats.size(), 7u);
  for (Subset f : ten.witness.flats) EXPECT_EQ(f.size(), 1);
  // d = 3: whole plane 27, lines 9 each, points 3 each: 3 lines through a
  // point cover everything at 27 too; the points alone cost 21.
  EXPECT_EQ(tau_weighted(fano(), 3).value, 21u);
  EXPECT_EQ(tau_weighted(fano(), 1).value, 1u);
}

TEST(TauWeighted, AgreesWithExhaustiveFlatSubsets) {
  std::vector<MinorView> small = {fano(), MinorView(make_uniform(2, 5)), MinorView(make_uniform(3, 5)),
                                  MinorView(make_graphic(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}))};
  for (const auto& entry : catalog_generate("random-linear", 42)) {
    const MinorView m(entry.matroid);
    if (enumerate_flats(m, m.rank()).size() <= 18) small.push_back(m);
  }
  for (const MinorView& m : small)
    for (std::uint64_t d : {1, 2, 3, 4, 7, 12}) {
      const CoverResult r = tau_weighted(m, d);
      ASSERT_EQ(r.value, brute_weighted(m, d)) << "d=" << d << " n=" << m.size();
      EXPECT_TRUE(covers_ground(m, r.witness));
      EXPECT_EQ(weight(m, r.witness), r.value);
    }
}

TEST(TauWeighted, MonotoneInD) {
  const MinorView m(make_pg(3, 3));
  std::uint64_t prev = 0;
  for (std::uint64_t d = 1; d <= 12; ++d) {
    const std::uint64_t v = tau_weighted(m, d).value;
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(FamilyCover, MatchesExhaustiveAndMaximizesCount) {
  const MinorView m = fano();
  Rng rng(8);
  for (int t = 0; t < 30; ++t) {
    SetFamily fam;
    for (int i = rng.uniform(1, 5); i > 0; --i) fam.push_back(rng.k_subset(m.ground(), rng.uniform(1, 2)));
    for (std::uint64_t d : {2, 3, 5}) {
      const FlatCover c = dmin_cover_family(m, fam, d);
      EXPECT_TRUE(covers_family(c, fam));
      EXPECT_EQ(weight(m, c), brute_family(m, fam, d));
      const FlatCover most = dmin_cover_family(m, fam, d, true);
      EXPECT_EQ(weight(m, most), weight(m, c));
      EXPECT_GE(most.flats.size(), c.flats.size());
    }
  }
  EXPECT_THROW(dmin_cover_family(m, SetFamily{}, 2), Error);
}

TEST(FamilyCover, TieBrokenTowardMoreFlats) {
  // d = 2: one line (weight 4) ties with two points (2 + 2).
  const MinorView m = fano();
  const SetFamily two_points = {Subset{0}, Subset{1}};
  EXPECT_EQ(weight(m, dmin_cover_family(m, two_points, 2)), 4u);
  EXPECT_EQ(dmin_cover_family(m, two_points, 2, true).flats.size(), 2u);
}

TEST(KDensity, ConstructedCoverRespectsBound) {
  for (const auto& entry : catalog_generate("all", 42)) {
    const MinorView m(entry.matroid);
    for (int a = 1; a <= 2 && a < m.rank(); ++a)
      for (int b = a + 1; b <= 7; ++b) {
        if (oracle::uniform_minor(m, a, b) || m.size() > 10) continue;
        const FlatCover c = kdensity_cover(m, a, b);
        EXPECT_TRUE(covers_ground(m, c)) << entry.id;
        std::uint64_t bound = 1, base = 1;
        for (int i = 0; i < a; ++i) base = base * (b - 1 - i) / (i + 1);
        for (int i = 0; i < m.rank() - a; ++i) bound *= base;
        EXPECT_LE(c.flats.size(), bound) << entry.id << " a=" << a << " b=" << b;
        EXPECT_LE(tau_a(m, a).value, c.flats.size());
      }
  }
}

TEST(KDensity, RefusesWhenTheArcExists) {
  EXPECT_THROW(kdensity_cover(MinorView(make_uniform(2, 5)), 1, 4), Error);
  EXPECT_NO_THROW(kdensity_cover(MinorView(make_uniform(2, 5)), 1, 6));
  EXPECT_THROW(kdensity_cover(fano(), 2, 3), Error);  // r = a
}

TEST(Weights, OverflowAndBudget) {
  EXPECT_EQ(checked_pow(2, 62), std::uint64_t{1} << 62);
  EXPECT_THROW(checked_pow(2, 63), Error);
  EXPECT_THROW(checked_pow(10, 19), Error);
  try {
    tau_a(MinorView(make_pg(4, 2)), 1, 3);
    ADD_FAILURE() << "tiny budget should be exceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SearchBudgetExceeded);
  }
}
