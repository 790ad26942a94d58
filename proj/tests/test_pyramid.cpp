#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mcov/harness.hpp"
#include "mcov/pyramid.hpp"

using namespace mcov;

namespace {

std::uint64_t ipow(std::uint64_t b, int e) { return checked_pow(b, e); }

// Independent count of condition 2 at one level: for each member S, the
// number of distinct M_i closures among members with S's M_{i+1} closure.
bool level_condition_holds(const Pyramid& p, int i) {
  const MinorView lo = p.level(i), hi = p.level(i + 1);
  for (Subset s : p.family) {
    std::vector<Subset> seen;
    for (Subset x : p.family)
      if (hi.closure(x) == hi.closure(s)) {
        const Subset c = lo.closure(x);
        if (std::find(seen.begin(), seen.end(), c) == seen.end()) seen.push_back(c);
      }
    if (static_cast<int>(seen.size()) < p.q) return false;
  }
  return true;
}

}  // namespace

TEST(PgPyramid, ValidWithExactDensity) {
  for (int q : {2, 3})
    for (int h = 0; h <= 3; ++h) {
      if (q == 3 && h == 3) continue;  // PG(3,3) has 40 points: still fine, covered below
      const Pyramid p = pg_pyramid(q, h);
      SCOPED_TRACE("q=" + std::to_string(q) + " h=" + std::to_string(h));
      EXPECT_TRUE(verify_pyramid(p).ok) << verify_pyramid(p).message;
      EXPECT_EQ(p.family.size(), static_cast<std::size_t>(ipow(q, h)));
      for (int i = 0; i < h; ++i) EXPECT_TRUE(level_condition_holds(p, i));
      const EpsilonCheck c = pyramid_epsilon_check(p);
      EXPECT_EQ(c.eps, ipow(q, h));
      EXPECT_TRUE(c.equality);
    }
  EXPECT_TRUE(verify_pyramid(pg_pyramid(3, 3)).ok);
  EXPECT_THROW(pg_pyramid(2, -1), Error);
}

TEST(PgPyramid, VerifierCatchesEachCondition) {
  Pyramid p = pg_pyramid(2, 2);
  Pyramid bad = p;
  bad.spine = {p.spine[0], p.spine[0]};
  EXPECT_EQ(verify_pyramid(bad).condition, 1);
  bad = p;
  bad.family.pop_back();  // one member loses its partner at level 0 or 1
  EXPECT_EQ(verify_pyramid(bad).condition, 2);
  bad = p;
  bad.q = 3;
  EXPECT_EQ(verify_pyramid(bad).condition, 2);
  bad = p;
  bad.family.push_back(Subset::singleton(p.spine[0]));
  EXPECT_EQ(verify_pyramid(bad).condition, 1);
  // members of rank 2 that are only 3-thick fail a d = 4 demand
  Pyramid lines;
  lines.ctx = MinorView(make_pg(3, 2));
  lines.family = {Subset{0, 1, 2}};
  lines.a = 2;
  lines.q = 1;
  lines.d = 4;
  EXPECT_EQ(verify_pyramid(lines).condition, 3);
  lines.d = 3;
  EXPECT_TRUE(verify_pyramid(lines).ok);
}

TEST(Shrink, AllIndexPairsRevalidateAndCompose) {
  const Pyramid p = pg_pyramid(2, 3);
  for (int i = 0; i <= 3; ++i)
    for (int j = i; j <= 3; ++j) {
      const Pyramid s = shrink_pyramid(p, i, j);
      EXPECT_EQ(s.h, 3 - (j - i));
      EXPECT_TRUE(verify_pyramid(s).ok);
      EXPECT_TRUE(pyramid_epsilon_check(s).holds);
      if (s.h >= 1) {
        const Pyramid twice = shrink_pyramid(s, 0, 1);
        // equals removing both index ranges at once
        const Subset gone = p.spine_set() - twice.spine_set();
        EXPECT_TRUE(p.ctx.contract(gone).same_view(twice.ctx));
      }
    }
  EXPECT_THROW(shrink_pyramid(p, 2, 1), Error);
  EXPECT_THROW(shrink_pyramid(p, 0, 4), Error);
}

TEST(Restrict, KeepsRankAndDensity) {
  const Pyramid p = pg_pyramid(3, 2);
  for (Subset s : p.family) {
    const Pyramid r = restrict_pyramid(p, s);
    EXPECT_EQ(r.ctx.rank(), p.a + p.h);
    EXPECT_TRUE(verify_pyramid(r).ok);
  }
  EXPECT_THROW(restrict_pyramid(p, Subset::singleton(p.spine[0])), Error);
}

TEST(Bound, RankEquationAndDensity) {
  for (int q : {2, 3}) {
    const Pyramid p = pg_pyramid(q, 2);
    for (int hp = 0; hp <= 2; ++hp) {
      const Pyramid b = bound_pyramid(p, hp);
      EXPECT_EQ(b.ctx.rank(), p.a + hp);
      EXPECT_GE(static_cast<std::uint64_t>(epsilon(b.ctx, b.family)), ipow(q, hp));
      EXPECT_TRUE(verify_pyramid(b).ok);
    }
    EXPECT_THROW(bound_pyramid(p, 3), Error);
  }
}

TEST(MinorProject, ReproducesNOnY) {
  const Pyramid full = pg_pyramid(2, 2);
  Pyramid p = full;
  p.spine.resize(1);
  p.h = 1;
  const MinorView top = p.level(1);
  Rng rng(4);
  int built = 0;
  for (int t = 0; t < 40; ++t) {
    const Subset c = rng.subset(top.ground(), 1, 4);
    const MinorView n = top.contract(c);
    SetFamily ys;
    for (Subset y : p.family)
      if (y.is_subset_of(n.ground()) && n.rank(y) == 1) ys.push_back(y);
    if (ys.empty()) continue;
    try {
      const Pyramid out = minor_project_pyramid(p, n, ys);
      const MinorView mt = out.level(out.h);
      const Subset u = family_union(ys);
      for (std::uint64_t w = 0; w < (std::uint64_t{1} << u.size()); ++w) {
        Subset z;
        int k = 0;
        for (int e : u) {
          if (w >> k & 1) z = z.with(e);
          ++k;
        }
        ASSERT_EQ(mt.rank(z), n.rank(z));
      }
      for (Subset y : ys) EXPECT_NE(std::find(out.family.begin(), out.family.end(), y), out.family.end());
      EXPECT_TRUE(verify_pyramid(out).ok);
      ++built;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::ConstructionFailed);
    }
  }
  EXPECT_GT(built, 0);
}

TEST(Augment, ReplaysTheProjectiveConstruction) {
  for (int q : {2, 3}) {
    const Pyramid pg = pg_pyramid(q, 2);
    const auto points = projective_points(3, q);
    auto below = [&](int k) {
      SetFamily fam;
      for (std::size_t i = 0; i < points.size(); ++i) {
        bool ok = points[i][2] == 1;
        for (int c = 0; c < k && ok; ++c) ok = points[i][c] == 0;
        if (ok) fam.push_back(Subset::singleton(static_cast<int>(i)));
      }
      return fam;
    };
    Pyramid cur;
    cur.ctx = pg.ctx.contract(pg.spine_set());
    cur.family = below(2);
    cur.q = q;
    for (int k = 2; k >= 1; --k) {
      Subset lower;
      for (int i = 0; i < k - 1; ++i) lower = lower.with(pg.spine[i]);
      cur = augment_pyramid(pg.ctx.contract(lower), pg.spine[k - 1], below(k - 1), q - 1, cur);
      EXPECT_TRUE(verify_pyramid(cur).ok);
      EXPECT_EQ(cur.h, 3 - k);
    }
    SetFamily got = cur.family, want = pg.family;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    EXPECT_EQ(got, want);
    EXPECT_EQ(cur.spine, pg.spine);
  }
}

TEST(Augment, RejectsWrongWitnessCount) {
  const Pyramid pg = pg_pyramid(2, 1);
  Pyramid top;
  top.ctx = pg.ctx.contract(pg.spine_set());
  top.family = {pg.family[0]};
  top.q = 1;
  EXPECT_THROW(augment_pyramid(pg.ctx, pg.spine[0], pg.family, 1, top), Error);
}

TEST(Climb, HeightOneOutcomesCheck) {
  for (int q : {2, 3}) {
    Pyramid p = pg_pyramid(q, 2);
    p.spine.resize(1);
    p.h = 1;
    const MinorView me = p.level(1);
    for (std::uint64_t d : {2, 3}) {
      for (const auto& cls : similarity_classes(me, p.family)) {
        const SetFamily x = pick_members(p.family, cls.members);
        const int a = family_rank(me, x);
        if (!is_d_firm(me, x, checked_pow(d, p.q + 2)).firm) continue;
        const ClimbResult r = climb_inductive(p, x, a, d);
        if (r.kind == ClimbResult::Kind::Lifted) {
          EXPECT_EQ(static_cast<int>(r.lifted.size()), p.q);
          EXPECT_EQ(check_lifted(p.ctx, p.spine[0], x, r.lifted, a, d), "");
        } else {
          EXPECT_EQ(family_rank(p.ctx, r.firm_up), a + 1);
          EXPECT_TRUE(is_d_firm(p.ctx, r.firm_up, d).firm);
        }
      }
    }
  }
}

TEST(Climb, LiftedChecksRejectBadLists) {
  Pyramid p = pg_pyramid(2, 1);
  const int e = p.spine[0];
  const SetFamily x = {p.family[0]};
  // the same list twice is similar to itself
  EXPECT_NE(check_lifted(p.ctx, e, x, {{p.family[0]}, {p.family[0]}}, 1, 2), "");
  EXPECT_NE(check_lifted(p.ctx, e, x, {{}}, 1, 2), "");
  EXPECT_THROW(climb_inductive(pg_pyramid(2, 2), x, 1, 2), Error);
}

TEST(Serialization, RoundTripThroughFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "mcov_pyr_test";
  std::filesystem::create_directories(dir);
  const Pyramid p = shrink_pyramid(pg_pyramid(3, 2), 0, 1);
  {
    std::ofstream m(dir / "base.matroid");
    write_matroid(m, *p.ctx.base());
    std::ofstream o(dir / "p.pyr");
    write_pyramid(o, p, "base.matroid");
  }
  const Pyramid back = read_pyramid_file((dir / "p.pyr").string());
  EXPECT_EQ(back.a, p.a);
  EXPECT_EQ(back.q, p.q);
  EXPECT_EQ(back.h, p.h);
  EXPECT_EQ(back.d, p.d);
  EXPECT_EQ(back.spine, p.spine);
  EXPECT_EQ(back.family, p.family);
  EXPECT_EQ(back.ctx.contracted(), p.ctx.contracted());
  EXPECT_TRUE(verify_pyramid(back).ok);
  std::istringstream bad("pyramid a=1 q=x h=0 d=2 spine=\n");
  EXPECT_THROW(read_pyramid(bad), Error);
  std::filesystem::remove_all(dir);
}
