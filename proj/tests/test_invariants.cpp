#include <gtest/gtest.h>

#include "hypic/invariants.hpp"
#include "oracles.hpp"

using namespace hypic;

namespace {

Vec v(std::initializer_list<int> xs) {
  Vec r;
  for (int x : xs) r.push_back(Rational(x));
  return r;
}

Arrangement asymmetric() { return Arrangement::make({v({1, 0}), v({0, 1}), v({1, 1})}); }
Arrangement balanced() { return Arrangement::make({v({1, 0}), v({0, 1}), v({-1, -1})}); }
Arrangement generic_lines() { return Arrangement::make({v({1, 0}), v({0, 1}), v({1, 1})}, {0, 0, 1}); }
Arrangement boolean(int n) {
  std::vector<Vec> rows;
  for (int i = 0; i < n; ++i) {
    Vec r(n);
    r[i] = 1;
    rows.push_back(r);
  }
  return Arrangement::make(rows);
}
Arrangement points(int m) { return Arrangement::make(std::vector<Vec>(m, v({1}))); }

std::vector<Poly> e_vars(int n) {
  std::vector<Poly> e;
  for (int i = 0; i < n; ++i) e.push_back(Poly::var(i));
  return e;
}

std::vector<oracle::Row> rows_of(const Arrangement& a) { return a.normals; }

}  // namespace

TEST(RingR, AsymmetricRelation) {
  auto e = e_vars(3);
  auto rel = circuit_ideal(asymmetric());
  ASSERT_EQ(rel.size(), 1u);
  EXPECT_EQ(rel[0], e[1] * e[2] + e[0] * e[2] - e[0] * e[1]);
  auto bal = circuit_ideal(balanced());
  EXPECT_EQ(bal[0], e[0] * e[1] + e[1] * e[2] + e[0] * e[2]);
}

TEST(RingR, BooleanIsPolynomialRing) {
  auto r = ring_R(boolean(3), 8);
  EXPECT_EQ(r->hilbert(), polynomial_ring_series(3, 8));
}

TEST(RingR, NonCentralRejected) { EXPECT_THROW(ring_R(generic_lines(), 8), std::invalid_argument); }

TEST(RingS, Examples) {
  EXPECT_EQ(ring_S(boolean(2), 8)->hilbert().dims, (std::vector<long long>{1, 2, 1, 0, 0}));
  EXPECT_EQ(ring_S(balanced(), 8)->hilbert().dims, (std::vector<long long>{1, 3, 2, 0, 0}));
  EXPECT_EQ(ring_S(points(4), 6)->hilbert().dims, (std::vector<long long>{1, 1, 0, 0}));
}

TEST(RingR, HilbertMatchesNbcCount) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    int d = 2 + trial % 2, n = d + 1 + trial % 3;
    auto arr = Arrangement::make(oracle::random_normals(rng, d, n));
    int D = default_degree(arr);
    auto f = oracle::nbc_counts(rows_of(arr), default_order(arr.size()));
    EXPECT_EQ(ring_R(arr, D)->hilbert().dims, oracle::face_ring_dims(f, D / 2)) << trial;
  }
}

TEST(IhPoincare, Examples) {
  EXPECT_EQ(ih_poincare(boolean(3)), (std::vector<long long>{1}));
  EXPECT_EQ(ih_poincare(asymmetric()), (std::vector<long long>{1, 1}));
  EXPECT_EQ(ih_poincare(points(4)), (std::vector<long long>{1}));
  EXPECT_EQ(q_poly_in_t({1, 1}), "1 + t^2");
  EXPECT_THROW(ih_poincare(generic_lines()), std::invalid_argument);
}

TEST(IhPoincare, MatchesOracleForAllOrders) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 8; ++trial) {
    auto arr = Arrangement::make(oracle::random_normals(rng, 3, 5));
    std::vector<int> sigma = default_order(arr.size());
    auto expect = oracle::h_of(oracle::nbc_counts(rows_of(arr), sigma), 3);
    do {
      EXPECT_EQ(ih_poincare(arr, sigma), expect);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    EXPECT_LT(expect.size(), 4u);  // degree below the rank
  }
}

TEST(IcStalk, Examples) {
  auto a = asymmetric();
  EXPECT_EQ(ic_stalk_poincare(a, 0), (std::vector<long long>{1}));
  EXPECT_EQ(ic_stalk_poincare(a, 0b111), (std::vector<long long>{1, 1}));
  EXPECT_EQ(ic_stalk_poincare(a, 0b001), (std::vector<long long>{1}));
  auto g = generic_lines();
  FlatLattice lat(g);
  for (IndexSet f : lat.flats()) EXPECT_EQ(ic_stalk_poincare(g, f), (std::vector<long long>{1}));
}

TEST(Sheaves, AsymmetricStalkPresentations) {
  auto r = sheaf_R(asymmetric(), 8);
  auto bc = sheaf_Rbc(asymmetric(), {0, 1, 2}, 8);
  auto e = e_vars(3);
  int top = r.lattice->size() - 1;
  ASSERT_EQ(r.relations[top].size(), 1u);
  EXPECT_EQ(r.relations[top][0], e[1] * e[2] + e[0] * e[2] - e[0] * e[1]);
  ASSERT_EQ(bc.relations[top].size(), 1u);
  EXPECT_EQ(bc.relations[top][0], e[1] * e[2]);
  for (int x = 0; x < top; ++x) {
    EXPECT_TRUE(r.relations[x].empty());
    EXPECT_TRUE(bc.relations[x].empty());
  }
}

TEST(Sheaves, RAndRbcArePureAndMatchMes) {
  for (auto arr : {asymmetric(), generic_lines(), points(3)}) {
    int D = default_degree(arr);
    auto r = sheaf_R(arr, D);
    auto bc = sheaf_Rbc(arr, default_order(arr.size()), D);
    auto m = mes_of(arr, D);
    EXPECT_TRUE(check_functorial(r.sheaf));
    EXPECT_TRUE(is_pure(r.sheaf, *r.lp));
    EXPECT_TRUE(is_pure(bc.sheaf, *bc.lp));
    EXPECT_TRUE(mes_degree_check(r.sheaf, *r.lattice).ok);
    EXPECT_TRUE(mes_degree_check(bc.sheaf, *bc.lattice).ok);
    for (int x = 0; x < r.lattice->size(); ++x) {
      EXPECT_EQ(r.sheaf.stalks[x].hilbert(), bc.sheaf.stalks[x].hilbert());
      EXPECT_EQ(r.sheaf.stalks[x].hilbert(), m.mes.sheaf.stalks[x].hilbert());
    }
  }
}

TEST(Sheaves, SimpleArrangementGivesStructureSheaf) {
  auto g = generic_lines();
  auto r = sheaf_R(g, 8);
  auto a = structure_sheaf(*r.lp, 8);
  for (int x = 0; x < r.lattice->size(); ++x) EXPECT_EQ(r.sheaf.stalks[x].hilbert(), a.stalks[x].hilbert());
}

TEST(Equivariant, SectionsMatchRingR) {
  auto a = asymmetric();
  auto h = equivariant_ih_hilbert(a, 8);
  EXPECT_EQ(h.dims, (std::vector<long long>{1, 3, 5, 7, 9}));
  EXPECT_EQ(h, ring_R(a, 8)->hilbert());
  // Non-central: sections of A over the generic lines give the face ring.
  EXPECT_EQ(equivariant_ih_hilbert(generic_lines(), 8).dims, (std::vector<long long>{1, 3, 6, 9, 12}));
}

TEST(Morse, GenericLinesThreeVertices) {
  auto m = mes_of(generic_lines(), 8);
  auto md = morse_sections(m);
  EXPECT_EQ(md.vertices, 3);
  EXPECT_TRUE(md.certified);
  EXPECT_EQ(md.freeness.generator_degrees(), (std::vector<int>{4, 4, 4}));
}

TEST(Morse, BooleanLineAndCentralExample) {
  auto b = morse_sections(mes_of(boolean(1), 6));
  EXPECT_TRUE(b.certified);
  EXPECT_EQ(b.freeness.generator_degrees(), (std::vector<int>{2}));
  auto c = morse_sections(mes_of(asymmetric(), 8));
  EXPECT_EQ(c.vertices, 1);
  // Kernel dims (0,0,2,4,6): two generators, both in degree 4.
  EXPECT_EQ(min_generators(c.relative.module).degrees(), (std::vector<int>{4, 4}));
}

TEST(Decomposition, ConcurrentLines) {
  auto r = decomposition_report(asymmetric(), 8);
  EXPECT_TRUE(decomposition_ok(r)) << r.failure;
  const auto& m = r.table.multiplicity;
  EXPECT_EQ(m.front(), (std::vector<std::size_t>{1, 0, 0, 0, 0}));
  EXPECT_EQ(m.back(), (std::vector<std::size_t>{0, 0, 1, 0, 0}));
  for (std::size_t x = 1; x + 1 < m.size(); ++x) EXPECT_EQ(m[x], (std::vector<std::size_t>(5, 0)));
  EXPECT_EQ(r.costalk_rank.back(), 3u);
}

TEST(Decomposition, CoincidentPoints) {
  for (int mcount = 2; mcount <= 4; ++mcount) {
    auto r = decomposition_report(points(mcount), 6);
    EXPECT_TRUE(decomposition_ok(r)) << r.failure;
    EXPECT_EQ(r.table.multiplicity.back()[1], static_cast<std::size_t>(mcount - 1));
  }
}

TEST(Decomposition, SimpleArrangementOnlyBottom) {
  auto r = decomposition_report(generic_lines(), 8);
  EXPECT_TRUE(decomposition_ok(r)) << r.failure;
  for (std::size_t x = 1; x < r.table.multiplicity.size(); ++x)
    for (auto k : r.table.multiplicity[x]) EXPECT_EQ(k, 0u);
}

TEST(FaceRing, EngineMatchesCombinatorialCount) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 6; ++trial) {
    auto arr = Arrangement::make(oracle::random_normals(rng, 3, 6));
    auto e = sheaf_E(arr, 10);
    auto top = e.lattice->size() - 1;
    auto c = matroid_complex(arr);
    EXPECT_EQ(e.rings[top]->hilbert().dims, oracle::face_ring_dims(f_vector(c), 5));
  }
}
