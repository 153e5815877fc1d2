#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "hypic/matroid.hpp"
#include "oracles.hpp"

using namespace hypic;

namespace {

Vec v(std::initializer_list<int> xs) {
  Vec r;
  for (int x : xs) r.push_back(Rational(x));
  return r;
}

Arrangement boolean(int n) {
  std::vector<Vec> rows;
  for (int i = 0; i < n; ++i) {
    Vec r(n);
    r[i] = 1;
    rows.push_back(r);
  }
  return Arrangement::make(rows);
}
Arrangement second() { return Arrangement::make({v({1, 0}), v({0, 1}), v({1, 1})}); }
Arrangement first() { return Arrangement::make({v({1, 0}), v({0, 1}), v({1, 1})}, {0, 0, 1}); }
// Braid arrangement of rank 3: x_a - x_b on four coordinates, x_0 pinned.
Arrangement braid3() {
  return Arrangement::make({v({1, 0, 0}), v({0, 1, 0}), v({0, 0, 1}), v({1, -1, 0}), v({1, 0, -1}), v({0, 1, -1})});
}

std::vector<IndexSet> sorted_flats(const FlatLattice& lat) {
  auto f = lat.flats();
  std::sort(f.begin(), f.end());
  return f;
}

std::vector<IndexSet> sets(std::initializer_list<std::vector<int>> ms) {
  std::vector<IndexSet> out;
  for (auto& m : ms) out.push_back(make_set(m));
  std::sort(out.begin(), out.end());
  return out;
}

// Flats of a derived arrangement, renamed to parent indices.
std::vector<IndexSet> lifted_flats(const Arrangement& sub, IndexSet extra = 0) {
  std::vector<IndexSet> out;
  FlatLattice lat(sub);
  for (IndexSet f : lat.flats()) {
    IndexSet g = extra;
    for (int i : members(f)) g |= IndexSet{1} << sub.origin[i];
    out.push_back(g);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Flats, Boolean) {
  for (int n = 1; n <= 4; ++n) {
    FlatLattice lat(boolean(n));
    EXPECT_EQ(lat.size(), 1 << n);
    for (int x = 0; x < lat.size(); ++x) EXPECT_EQ(lat.rank(x), set_size(lat.flat(x)));
  }
}

TEST(Flats, ConcurrentAndGenericLines) {
  EXPECT_EQ(sorted_flats(FlatLattice(second())), sets({{}, {0}, {1}, {2}, {0, 1, 2}}));
  EXPECT_EQ(sorted_flats(FlatLattice(first())), sets({{}, {0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}}));
}

TEST(Flats, RankAndOrder) {
  FlatLattice lat(second());
  EXPECT_EQ(lat.rank(0), 0);
  EXPECT_EQ(lat.flat(0), 0u);
  EXPECT_EQ(lat.rank(lat.size() - 1), 2);
  EXPECT_EQ(lat.flat(lat.size() - 1), make_set({0, 1, 2}));
  for (int a = 0; a < lat.size(); ++a)
    for (int b = 0; b < lat.size(); ++b)
      if (a != b && lat.leq(a, b)) {
        EXPECT_LT(lat.rank(a), lat.rank(b));
      }
}

TEST(Flats, RandomMatchesDefinition) {
  std::mt19937 rng(21);
  std::uniform_int_distribution<int> off(-1, 1);
  for (int trial = 0; trial < 25; ++trial) {
    int d = 1 + trial % 3, n = d + trial % 4;
    auto normals = oracle::random_normals(rng, d, n);
    oracle::Row offsets;
    for (int i = 0; i < n; ++i) offsets.push_back(Rational(trial % 2 ? off(rng) : 0));
    auto arr = Arrangement::make(normals, offsets);
    auto expect = oracle::flats_brute(normals, offsets);
    std::vector<IndexSet> got = sorted_flats(FlatLattice(arr));
    EXPECT_EQ(got, std::vector<IndexSet>(expect.begin(), expect.end())) << trial;
  }
}

TEST(Flats, RestrictionMapsCompose) {
  FlatLattice lat(braid3());
  for (int e = 0; e < lat.size(); ++e)
    for (int f = 0; f < lat.size(); ++f)
      for (int g = 0; g < lat.size(); ++g)
        if (lat.leq(e, f) && lat.leq(f, g)) {
          EXPECT_EQ(lat.vf_quotient(e, f) * lat.vf_quotient(f, g), lat.vf_quotient(e, g));
          EXPECT_EQ(rank(lat.vf_quotient(e, g)), static_cast<std::size_t>(lat.rank(e)));
        }
}

TEST(Arrangement, RejectsBadInput) {
  EXPECT_THROW(Arrangement::make({v({1, 0}), v({2, 0})}), InputError);
  EXPECT_THROW(Arrangement::make({v({0, 0}), v({1, 0})}), InputError);
  EXPECT_THROW(Arrangement::make({v({1, 0}), v({0})}), InputError);
  EXPECT_THROW(Arrangement::make({v({1})}, {Rational(0), Rational(1)}), InputError);
  auto empty = Arrangement::make({});
  EXPECT_EQ(FlatLattice(empty).size(), 1);
}

TEST(Restriction, Examples) {
  auto a = second();
  auto r0 = restriction(a, 0);
  EXPECT_EQ(r0.size(), 3u);
  EXPECT_EQ(r0.d, 2u);
  auto r1 = restriction(a, make_set({0}));
  EXPECT_EQ(r1.d, 1u);
  EXPECT_EQ(r1.size(), 2u);
  EXPECT_EQ(r1.origin, (std::vector<int>{1, 2}));
  auto top = restriction(a, a.ground());
  EXPECT_EQ(top.d, 0u);
  EXPECT_EQ(top.size(), 0u);
  EXPECT_THROW(restriction(a, make_set({0, 1})), std::invalid_argument);
  // Generic lines: restricting to one line leaves two distinct points.
  auto g = restriction(first(), make_set({2}));
  EXPECT_FALSE(g.is_central());
  EXPECT_EQ(FlatLattice(g).size(), 3);
}

TEST(Restriction, LatticeIsUpperInterval) {
  for (auto arr : {second(), first(), braid3()}) {
    FlatLattice lat(arr);
    for (IndexSet f : lat.flats()) {
      std::vector<IndexSet> above;
      for (IndexSet e : lat.flats())
        if (is_subset(f, e)) above.push_back(e);
      std::sort(above.begin(), above.end());
      EXPECT_EQ(lifted_flats(restriction(arr, f), f), above);
    }
  }
}

TEST(Localization, LatticeIsLowerInterval) {
  for (auto arr : {second(), first(), braid3()}) {
    FlatLattice lat(arr);
    for (IndexSet f : lat.flats()) {
      auto loc = localization(arr, f);
      EXPECT_TRUE(loc.is_central());
      std::vector<IndexSet> below;
      for (IndexSet e : lat.flats())
        if (is_subset(e, f)) below.push_back(e);
      std::sort(below.begin(), below.end());
      EXPECT_EQ(lifted_flats(loc), below);
    }
  }
}

TEST(Localization, Examples) {
  EXPECT_EQ(localization(second(), 0).size(), 0u);
  EXPECT_EQ(localization(second(), 0).d, 0u);
  auto top = localization(second(), make_set({0, 1, 2}));
  EXPECT_EQ(top.d, 2u);
  EXPECT_EQ(sorted_flats(FlatLattice(top)), sorted_flats(FlatLattice(second())));
  // Rank 2 flat of the braid arrangement with three members: three concurrent lines.
  FlatLattice lat(braid3());
  int found = 0;
  for (int x = 0; x < lat.size(); ++x)
    if (lat.rank(x) == 2 && set_size(lat.flat(x)) == 3) {
      auto loc = localization(braid3(), lat.flat(x));
      EXPECT_EQ(loc.d, 2u);
      EXPECT_EQ(FlatLattice(loc).size(), 5);
      ++found;
    }
  EXPECT_EQ(found, 4);
}

TEST(Simplify, ClosureMap) {
  auto s = simplify(second());
  EXPECT_EQ(s.faces.faces().size(), 7u);
  for (auto [f, img] : s.pi) {
    if (set_size(f) == 2) {
      EXPECT_EQ(img, make_set({0, 1, 2}));
    } else {
      EXPECT_EQ(img, f);
    }
  }
  auto simple = simplify(boolean(3));
  for (auto [f, img] : simple.pi) EXPECT_EQ(f, img);
  // m copies of a point: every singleton lies over the top flat.
  auto pts = Arrangement::make({v({1}), v({1}), v({1})});
  int over_top = 0;
  for (auto [f, img] : simplify(pts).pi)
    if (img == pts.ground()) {
      EXPECT_EQ(set_size(f), 1);
      ++over_top;
    }
  EXPECT_EQ(over_top, 3);
}

TEST(Simplify, RankPreservingSurjection) {
  for (auto arr : {second(), braid3(), first()}) {
    auto s = simplify(arr);
    FlatLattice lat(arr);
    std::set<IndexSet> hit;
    for (auto [f, img] : s.pi) {
      EXPECT_EQ(arr.rank_of(f), arr.rank_of(img));
      hit.insert(img);
    }
    EXPECT_EQ(hit.size(), static_cast<std::size_t>(lat.size()));
  }
}

TEST(Unimodular, Examples) {
  EXPECT_TRUE(is_unimodular(boolean(3)));
  EXPECT_TRUE(is_unimodular(second()));
  EXPECT_FALSE(is_unimodular(Arrangement::make({v({1, 0}), v({0, 1}), v({1, 2})})));
  EXPECT_TRUE(is_unimodular(braid3()));
  // Rational entries are cleared by primitive scaling.
  EXPECT_TRUE(is_unimodular(Arrangement::make({{Rational(1, 2), Rational(0)}, {Rational(0), Rational(3)}})));
}

TEST(Unimodular, StableUnderRestrictionAndLocalization) {
  for (auto arr : {second(), braid3(), boolean(3)}) {
    FlatLattice lat(arr);
    for (IndexSet f : lat.flats()) {
      EXPECT_TRUE(is_unimodular(restriction(arr, f))) << set_str(f);
      EXPECT_TRUE(is_unimodular(localization(arr, f))) << set_str(f);
    }
  }
}

TEST(Unimodular, AgreesWithCotorsionOracle) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    int d = 1 + trial % 3, n = d + 1 + trial % 3;
    auto normals = oracle::random_normals(rng, d, n);
    oracle::Row zero(n);
    EXPECT_EQ(is_unimodular(Arrangement::make(normals)), oracle::cotorsion_free(normals, zero)) << trial;
  }
}

TEST(Flags, SimpleAndCentral) {
  EXPECT_TRUE(is_simple(boolean(2)));
  EXPECT_TRUE(is_central(boolean(2)));
  EXPECT_FALSE(is_simple(second()));
  EXPECT_TRUE(is_central(second()));
  EXPECT_TRUE(is_simple(first()));
  EXPECT_FALSE(is_central(first()));
}
