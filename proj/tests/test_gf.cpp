#include <gtest/gtest.h>

#include "mcov/gf.hpp"

using namespace mcov;

namespace {

const int kOrders[] = {2, 3, 4, 5, 7, 8, 9, 11, 13, 16};

}  // namespace

TEST(Field, AxiomsHoldForEverySmallOrder) {
  for (int q : kOrders) {
    SCOPED_TRACE(q);
    const auto f = GaloisField::make(q);
    ASSERT_EQ(f->order(), q);
    for (int a = 0; a < q; ++a) {
      EXPECT_EQ(f->add(a, 0), a);
      EXPECT_EQ(f->mul(a, 1), a);
      EXPECT_EQ(f->mul(a, 0), 0);
      EXPECT_EQ(f->add(a, f->neg(a)), 0);
      if (a) EXPECT_EQ(f->mul(a, f->inv(a)), 1);
      for (int b = 0; b < q; ++b) {
        EXPECT_EQ(f->add(a, b), f->add(b, a));
        EXPECT_EQ(f->mul(a, b), f->mul(b, a));
        EXPECT_EQ(f->sub(f->add(a, b), b), a);
        for (int c = 0; c < q; ++c) {
          EXPECT_EQ(f->mul(a, f->add(b, c)), f->add(f->mul(a, b), f->mul(a, c)));
          EXPECT_EQ(f->mul(f->mul(a, b), c), f->mul(a, f->mul(b, c)));
        }
      }
    }
  }
}

TEST(Field, PrimeFieldsAreIntegersModP) {
  for (int p : {2, 3, 5, 7, 11, 13}) {
    const auto f = GaloisField::make(p);
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b) {
        EXPECT_EQ(f->add(a, b), (a + b) % p);
        EXPECT_EQ(f->mul(a, b), (a * b) % p);
      }
  }
}

TEST(Field, MultiplicativeGroupIsCyclic) {
  for (int q : kOrders) {
    const auto f = GaloisField::make(q);
    bool found = false;
    for (int g = 1; g < q && !found; ++g) {
      int x = 1, order = 0;
      do {
        x = f->mul(x, g);
        ++order;
      } while (x != 1);
      found = order == q - 1;
    }
    EXPECT_TRUE(found) << "GF(" << q << ")";
  }
}

TEST(Field, CharacteristicKillsOne) {
  for (int q : kOrders) {
    const auto f = GaloisField::make(q);
    int x = 0;
    for (int i = 0; i < f->characteristic(); ++i) x = f->add(x, 1);
    EXPECT_EQ(x, 0);
  }
}

TEST(Field, RejectsBadOrders) {
  for (int q : {0, 1, 6, 10, 12, 15}) {
    try {
      GaloisField::make(q);
      ADD_FAILURE() << q;
    } catch (const Error& e) {
      EXPECT_TRUE(e.code() == Errc::NotPrime || e.code() == Errc::FieldTooLarge) << q;
    }
  }
  EXPECT_THROW(GaloisField::make(32), Error);
  EXPECT_THROW(GaloisField::make(4)->inv(0), Error);
}
