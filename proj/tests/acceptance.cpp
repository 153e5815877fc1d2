// Acceptance run: one line per criterion, nonzero exit if any fails.
// Seeds, corpus sizes and truncation degrees are fixed below and printed.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hypic/hypic.hpp"
#include "oracles.hpp"

using namespace hypic;

namespace {

constexpr unsigned kCorpusSeed = 20240611;
constexpr int kCorpusSize = 50;
constexpr unsigned kMorseSeed = 7331;
constexpr int kMorseCount = 12;
constexpr unsigned kUnimodularSeed = 4242;
constexpr int kUnimodularCount = 30;
constexpr double kUnimodularBudget = 60.0;  // seconds, total
constexpr int kWorkedD = 12;

int failures = 0;

// A check returns "" on success or a reason. Extra detail goes to `note`.
struct Outcome {
  std::string failure;
  std::string note;
};

void criterion(const std::string& id, const std::string& what, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.failure = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool ok = o.failure.empty();
  if (!ok) ++failures;
  std::printf("%-5s %s %7.2fs  %s", id.c_str(), ok ? "PASS" : "FAIL", secs, what.c_str());
  if (!o.note.empty()) std::printf("  [%s]", o.note.c_str());
  if (!ok) std::printf("  -- %s", o.failure.c_str());
  std::printf("\n");
  std::fflush(stdout);
}

std::string dims_str(const std::vector<long long>& d) {
  std::string s = "(";
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
  return s + ")";
}

Vec v(std::initializer_list<int> xs) {
  Vec r;
  for (int x : xs) r.push_back(Rational(x));
  return r;
}

Poly e(int i) { return Poly::var(i - 1); }
Poly sq(int i) { return e(i) * e(i); }

Arrangement boolean(int n) {
  std::vector<Vec> rows;
  for (int i = 0; i < n; ++i) {
    Vec r(n);
    r[i] = 1;
    rows.push_back(r);
  }
  return Arrangement::make(rows);
}

// x_a - x_b per edge, vertex 0 pinned.
Arrangement graphic(int nv, const std::vector<std::pair<int, int>>& edges) {
  std::vector<Vec> rows;
  for (auto [a, b] : edges) {
    Vec r(nv - 1);
    if (a > 0) r[a - 1] += 1;
    if (b > 0) r[b - 1] -= 1;
    rows.push_back(r);
  }
  return Arrangement::make(rows);
}

std::vector<IndexSet> sorted_flats(const FlatLattice& lat) {
  auto f = lat.flats();
  std::sort(f.begin(), f.end());
  return f;
}

// Cover relation as (upper, lower) pairs of member sets.
std::vector<std::pair<IndexSet, IndexSet>> covers(const FlatLattice& lat) {
  std::vector<std::pair<IndexSet, IndexSet>> c;
  for (int x = 0; x < lat.size(); ++x)
    for (int y : lat.lower_covers(x)) c.emplace_back(lat.flat(x), lat.flat(y));
  std::sort(c.begin(), c.end());
  return c;
}

IndexSet S(std::initializer_list<int> one_based) {
  std::vector<int> m;
  for (int i : one_based) m.push_back(i - 1);
  return make_set(m);
}

// ---------------------------------------------------------------------------
// Corpus of central arrangements shared by AC2-AC6 and AC10.

struct Case {
  Arrangement arr;
  int D = 0;
  std::string tag;
};

std::vector<Case> corpus() {
  std::mt19937 rng(kCorpusSeed);
  const int ds[] = {2, 3, 4, 3, 2, 4, 3, 1, 4, 3};
  std::vector<Case> out;
  for (int t = 0; t < kCorpusSize; ++t) {
    int d = ds[t % 10];
    int n = std::uniform_int_distribution<int>(d + 1, 7)(rng);
    if (d == 1) n = std::min(n, 3);
    auto arr = Arrangement::make(oracle::random_normals(rng, d, n));
    out.push_back({arr, default_degree(arr), "#" + std::to_string(t) + " d=" + std::to_string(d) + " n=" + std::to_string(n)});
  }
  return out;
}

std::map<int, MesData>& mes_cache() {
  static std::map<int, MesData> c;
  return c;
}

const MesData& mes_for(const std::vector<Case>& cs, int i) {
  auto& c = mes_cache();
  auto it = c.find(i);
  if (it == c.end()) it = c.emplace(i, mes_of(cs[i].arr, cs[i].D)).first;
  return it->second;
}

std::vector<long long> independent_counts(const std::vector<oracle::Row>& normals) {
  std::vector<long long> f(normals.size() + 1, 0);
  for (std::uint32_t s = 0; s < (std::uint32_t{1} << normals.size()); ++s)
    if (oracle::subset_rank(normals, s) == oracle::popcount(s)) ++f[oracle::popcount(s)];
  while (f.size() > 1 && f.back() == 0) f.pop_back();
  return f;
}

// ---------------------------------------------------------------------------

void ac1() {
  criterion("AC1", "worked examples: flat posets, top stalk generators, stalk presentations, three-line GMES example",
            []() -> Outcome {
    const std::string fx = HYPIC_FIXTURES;
    std::ostringstream why;
    auto first = io::load(fx + "/first.json").arr;
    auto second = io::load(fx + "/second.json").arr;
    FlatLattice l1(first), l2(second);
    std::vector<IndexSet> f1{0, S({1}), S({2}), S({3}), S({1, 2}), S({1, 3}), S({2, 3})};
    std::sort(f1.begin(), f1.end());
    std::vector<std::pair<IndexSet, IndexSet>> c1{{S({1}), 0},         {S({2}), 0},         {S({3}), 0},
                                                  {S({1, 2}), S({1})}, {S({1, 2}), S({2})}, {S({1, 3}), S({1})},
                                                  {S({1, 3}), S({3})}, {S({2, 3}), S({2})}, {S({2, 3}), S({3})}};
    std::sort(c1.begin(), c1.end());
    if (sorted_flats(l1) != f1 || covers(l1) != c1) why << "first poset; ";
    std::vector<IndexSet> f2{0, S({1}), S({2}), S({3}), S({1, 2, 3})};
    std::sort(f2.begin(), f2.end());
    std::vector<std::pair<IndexSet, IndexSet>> c2{{S({1}), 0}, {S({2}), 0}, {S({3}), 0},
                                                  {S({1, 2, 3}), S({1})}, {S({1, 2, 3}), S({2})}, {S({1, 2, 3}), S({3})}};
    std::sort(c2.begin(), c2.end());
    if (sorted_flats(l2) != f2 || covers(l2) != c2) why << "second poset; ";

    // Sym V + Sym V[-2] at the top of the second example, Sym V_F elsewhere.
    auto m = mes_of(second, default_degree(second));
    auto rig = check_rigidity(m.mes.sheaf, m.mes.support);
    int top = m.lattice.find(S({1, 2, 3}));
    for (int x = 0; x < m.lattice.size(); ++x) {
      std::vector<int> want = x == top ? std::vector<int>{0, 2} : std::vector<int>{0};
      if (rig.stalk_generators[x] != want) why << "generators at " << set_str(m.lattice.flat(x)) << "; ";
    }

    auto asym = io::load(fx + "/asymmetric.json").arr;
    int D = default_degree(asym);
    auto r = sheaf_R(asym, D);
    auto bc = sheaf_Rbc(asym, default_order(3), D);
    int atop = r.lattice->find(S({1, 2, 3}));
    auto lab = e_labels(3);
    if (!ideal_equality(lab, r.relations[atop], {e(2) * e(3) + e(1) * e(3) - e(1) * e(2)}, D)) why << "R top ideal; ";
    if (!ideal_equality(lab, bc.relations[atop], {e(2) * e(3)}, D)) why << "Rbc top ideal; ";

    // Three lines with u1 + u2 + u3 = 0.
    auto bal = Arrangement::make({v({1, 0}), v({0, 1}), v({-1, -1})});
    auto ep = extended_poset(bal);
    auto hr = hat_R(ep, kWorkedD);
    const auto& lat = *ep.lattice;
    int btop = lat.size() - 1;
    Poly s2 = e(1) * e(2) + e(2) * e(3) + e(1) * e(3);
    if (!ideal_equality(lab, hr.relations[ep.flat_element(0)], {s2, sq(1), sq(2), sq(3)}, kWorkedD)) why << "R^(empty); ";
    for (int i = 1; i <= 3; ++i) {
      int a = lat.find(S({i}));
      int j = i % 3 + 1, k = j % 3 + 1;
      if (!ideal_equality(lab, hr.relations[ep.pair_element(a, 0)], {e(j) + e(k), sq(1), sq(2), sq(3)}, kWorkedD))
        why << "R^({" << i << "},empty); ";
      if (!ideal_equality(lab, hr.relations[ep.flat_element(a)], {e(j) + e(k), sq(j), sq(k)}, kWorkedD))
        why << "R^({" << i << "}); ";
    }
    std::vector<int> atoms;
    for (int i = 1; i <= 3; ++i) atoms.push_back(lat.find(S({i})));
    auto b = boundary_image(hr, btop, atoms, {e(1) * e(2) * e(3), s2});
    if (!b.kernel_matches) why << "kernel of Q[I] -> boundary is not <e1e2e3, s2>; ";
    if (!b.images_agree) why << "sections and Q[I] images differ; ";
    return {why.str(), "D=" + std::to_string(kWorkedD) + " image " + dims_str(b.image_dims)};
  });

  // The printed dims of the sections image, taken literally.
  criterion("AC1d", "three-line GMES example: printed Hilbert dims (1,3,5,5,5,...) of Q[I]/<e1e2e3, s2>", []() -> Outcome {
    Poly s2 = e(1) * e(2) + e(2) * e(3) + e(1) * e(3);
    auto q = quotient_ring(e_labels(3), {e(1) * e(2) * e(3), s2}, kWorkedD)->hilbert().dims;
    std::vector<long long> printed{1, 3, 5, 5, 5, 5, 5};
    auto bal = Arrangement::make({v({1, 0}), v({0, 1}), v({-1, -1})});
    auto ep = extended_poset(bal);
    auto hr = hat_R(ep, kWorkedD);
    std::vector<int> atoms;
    for (int i = 1; i <= 3; ++i) atoms.push_back(ep.lattice->find(S({i})));
    auto img = boundary_image(hr, ep.lattice->size() - 1, atoms, {e(1) * e(2) * e(3), s2}).image_dims;
    std::string note = "truncated quotient " + dims_str(q) + ", sections image " + dims_str(img);
    if (q != printed || img != printed) return {"printed " + dims_str(printed) + " does not match", note};
    return {"", note};
  });
}

void ac2(const std::vector<Case>& cs) {
  criterion("AC2", "ih_poincare = h^bc(t^2) by brute-force NBC enumeration, 4 orderings each", [&]() -> Outcome {
    std::mt19937 rng(kCorpusSeed + 1);
    std::ostringstream why;
    int checks = 0;
    for (const auto& c : cs) {
      const std::size_t n = c.arr.size();
      std::vector<std::vector<int>> orders{default_order(n)};
      auto rev = default_order(n);
      std::reverse(rev.begin(), rev.end());
      orders.push_back(rev);
      for (int k = 0; k < 2; ++k) {
        auto s = default_order(n);
        std::shuffle(s.begin(), s.end(), rng);
        orders.push_back(s);
      }
      std::vector<long long> first;
      for (auto& sigma : orders) {
        auto got = ih_poincare(c.arr, sigma);
        auto want = oracle::h_of(oracle::nbc_counts(c.arr.normals, sigma), static_cast<int>(c.arr.d));
        ++checks;
        if (got != want) why << c.tag << " oracle mismatch; ";
        if (first.empty()) first = got;
        else if (got != first) why << c.tag << " order dependence; ";
      }
    }
    return {why.str(), std::to_string(cs.size()) + " arrangements, " + std::to_string(checks) + " orderings"};
  });
}

void ac3(const std::vector<Case>& cs) {
  criterion("AC3", "Hilb(sections of the MES) = Hilb(R) to D = 2 rank + 4", [&]() -> Outcome {
    std::ostringstream why;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      auto got = equivariant_ih_hilbert(mes_for(cs, static_cast<int>(i)));
      auto want = ring_R(cs[i].arr, cs[i].D)->hilbert();
      if (got.dims != want.dims) why << cs[i].tag << " " << dims_str(got.dims) << " vs " << dims_str(want.dims) << "; ";
    }
    return {why.str(), std::to_string(cs.size()) + " arrangements"};
  });
}

void ac4(const std::vector<Case>& cs) {
  criterion("AC4", "sheaf_R and sheaf_Rbc pure, pass the degree check, stalks equal each other and the MES", [&]() -> Outcome {
    std::ostringstream why;
    std::mt19937 rng(kCorpusSeed + 2);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const auto& c = cs[i];
      const auto& m = mes_for(cs, static_cast<int>(i));
      auto sigma = default_order(c.arr.size());
      std::shuffle(sigma.begin(), sigma.end(), rng);
      auto r = sheaf_R(c.arr, c.D);
      auto bc = sheaf_Rbc(c.arr, sigma, c.D);
      for (auto* s : {&r, &bc}) {
        if (!is_pure(s->sheaf, *s->lp)) why << c.tag << " not pure; ";
        auto dc = mes_degree_check(s->sheaf, *s->lattice);
        if (!dc.ok) why << c.tag << " " << dc.failure << "; ";
      }
      for (int x = 0; x < m.lattice.size(); ++x) {
        auto h = m.mes.sheaf.stalks[x].hilbert();
        if (!(r.rings[x]->hilbert() == h) || !(bc.rings[x]->hilbert() == h))
          why << c.tag << " stalk " << set_str(m.lattice.flat(x)) << "; ";
      }
    }
    return {why.str(), std::to_string(cs.size()) + " arrangements, Rbc under a shuffled order"};
  });
}

void ac5(const std::vector<Case>& cs) {
  criterion("AC5", "costalks of E free in degree 2 rk F of rank |pi^-1(F)|; decomposition Hilbert identity", [&]() -> Outcome {
    std::ostringstream why;
    long long flats = 0;
    for (const auto& c : cs) {
      auto d = decomposition_report(c.arr, c.D);
      if (!decomposition_ok(d)) {
        why << c.tag << " " << d.failure << "; ";
        continue;
      }
      FlatLattice lat(c.arr);
      auto simp = simplify(c.arr);
      for (int x = 0; x < lat.size(); ++x, ++flats) {
        IndexSet f = lat.flat(x);
        int rk = lat.rank(x);
        std::size_t oracle_top = 0;
        for (IndexSet s = f;; s = (s - 1) & f) {
          if (set_size(s) == rk && oracle::subset_rank(c.arr.normals, s) == rk) ++oracle_top;
          if (!s) break;
        }
        std::size_t preimage = 0;
        for (auto& [face, image] : simp.pi)
          if (image == f && set_size(face) == rk) ++preimage;
        if (d.costalk_rank[x] != oracle_top || preimage != oracle_top)
          why << c.tag << " rank at " << set_str(f) << " " << d.costalk_rank[x] << "/" << preimage << "/" << oracle_top << "; ";
      }
    }
    return {why.str(), std::to_string(flats) + " flats"};
  });
}

void ac6(const std::vector<Case>& cs) {
  criterion("AC6", "ideal identity, both containments, every flat", [&]() -> Outcome {
    std::ostringstream why;
    long long flats = 0;
    for (const auto& c : cs) {
      FlatLattice lat(c.arr);
      for (IndexSet f : lat.flats()) {
        ++flats;
        if (!check_ideal_identity(c.arr, f, c.D)) why << c.tag << " at " << set_str(f) << "; ";
      }
    }
    return {why.str(), std::to_string(flats) + " flats"};
  });
}

void ac7() {
  criterion("AC7", "GMES: hat_R passes all conditions, hat_A fails when non-simple, pushforward equals R", []() -> Outcome {
    std::vector<std::pair<std::string, Arrangement>> suite{
        {"K3", graphic(3, {{0, 1}, {0, 2}, {1, 2}})},
        {"K4", graphic(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}})},
        {"C4", graphic(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})},
        {"K4-e", graphic(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}})},
        {"P4", graphic(4, {{0, 1}, {1, 2}, {2, 3}})},
        {"paw", graphic(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}})},
        {"C5", graphic(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}})},
        {"bowtie", graphic(5, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {0, 4}, {3, 4}})},
        {"K2,3", graphic(5, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}})},
        {"C5+chord", graphic(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0, 2}})},
        {"K4+pendant", graphic(5, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {3, 4}})},
        {"K3 doubled edge", graphic(3, {{0, 1}, {0, 1}, {0, 2}, {1, 2}})},
        {"boolean1", boolean(1)},
        {"boolean2", boolean(2)},
        {"boolean3", boolean(3)},
        {"intervals3", Arrangement::make({v({1, 0, 0}), v({0, 1, 0}), v({0, 0, 1}), v({1, 1, 0}), v({0, 1, 1}),
                                          v({1, 1, 1})})},
    };
    std::ostringstream why;
    int non_simple = 0;
    for (auto& [name, arr] : suite) {
      if (!is_unimodular(arr)) {
        why << name << " not unimodular; ";
        continue;
      }
      int D = default_degree(arr);
      auto ep = extended_poset(arr);
      auto a = hat_A(ep, D);
      auto rep = verify_gmes(hat_R(ep, D), a);
      if (!rep.passed()) why << name << " " << rep.first_failure() << "; ";
      if (!is_simple(arr, *ep.lattice)) {
        ++non_simple;
        if (verify_gmes(a, a).passed()) why << name << " hat_A passes; ";
      }
      auto pf = compare_pushforward(ep, D);
      if (!pf.ok) why << name << " pushforward: " << pf.failure << "; ";
    }
    return {why.str(), std::to_string(suite.size()) + " arrangements, " + std::to_string(non_simple) + " non-simple"};
  });
}

void ac8() {
  criterion("AC8", "Morse: relative sections free over Sym V_0 of rank #vertices, generated in degree 2d", []() -> Outcome {
    std::mt19937 rng(kMorseSeed);
    std::uniform_int_distribution<int> off(-9, 9);
    std::ostringstream why;
    std::string shapes;
    for (int t = 0; t < kMorseCount; ++t) {
      int d = 1 + t % 3;
      int n = d + 1 + (t / 3) % 2;
      Arrangement arr;
      for (;;) {
        auto normals = oracle::random_normals(rng, d, n);
        Vec b;
        for (int i = 0; i < n; ++i) b.push_back(Rational(off(rng)));
        arr = Arrangement::make(normals, b);
        if (is_simple(arr)) break;
      }
      int vertices = 0;
      for (auto f : oracle::flats_brute(arr.normals, arr.offsets))
        if (oracle::subset_rank(arr.normals, f) == d) ++vertices;
      auto md = morse_sections(mes_of(arr, 2 * d + 4));
      auto degs = md.freeness.generator_degrees();
      bool in_2d = std::all_of(degs.begin(), degs.end(), [&](int g) { return g == 2 * d; });
      if (!md.certified || !md.freeness.free || !in_2d || md.vertices != vertices || static_cast<int>(degs.size()) != vertices)
        why << "#" << t << " d=" << d << " n=" << n << " r=" << vertices << "; ";
      shapes += (t ? " " : "") + std::to_string(d) + "/" + std::to_string(vertices);
    }
    return {why.str(), "seed " + std::to_string(kMorseSeed) + ", d/r: " + shapes};
  });
}

void ac9() {
  criterion("AC9", "is_unimodular agrees with the Smith normal form cotorsion check", []() -> Outcome {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(kUnimodularSeed);
    std::uniform_int_distribution<int> off(-2, 2);
    std::ostringstream why;
    int yes = 0;
    for (int t = 0; t < kUnimodularCount; ++t) {
      int d = 1 + t % 3, n = std::min(6, d + 1 + t % 4);
      auto normals = oracle::random_normals(rng, d, n);
      oracle::Row b(n);
      if (t % 2)
        for (auto& x : b) x = Rational(off(rng));
      bool got = is_unimodular(Arrangement::make(normals, b));
      bool want = oracle::cotorsion_free(normals, b);
      yes += want;
      if (got != want) why << "#" << t << " library " << got << " oracle " << want << "; ";
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= kUnimodularBudget) why << "took " << secs << "s, budget " << kUnimodularBudget << "s; ";
    return {why.str(), std::to_string(kUnimodularCount) + " arrangements, " + std::to_string(yes) + " unimodular, half affine"};
  });
}

void ac10(const std::vector<Case>& cs) {
  criterion("AC10", "face ring Hilbert series = sum over faces of (t^2/(1-t^2))^|S|, matroid and nbc complexes", [&]() -> Outcome {
    std::ostringstream why;
    int complexes = 0;
    for (const auto& c : cs) {
      auto sigma = default_order(c.arr.size());
      auto mc = matroid_complex(c.arr);
      auto bc = broken_circuit_complex(mc, sigma);
      auto fm = independent_counts(c.arr.normals);
      auto fb = oracle::nbc_counts(c.arr.normals, sigma);
      if (face_ring(mc, c.D)->hilbert().dims != oracle::face_ring_dims(fm, c.D / 2)) why << c.tag << " matroid; ";
      if (face_ring(bc, c.D)->hilbert().dims != oracle::face_ring_dims(fb, c.D / 2)) why << c.tag << " nbc; ";
      complexes += 2;
    }
    return {why.str(), std::to_string(complexes) + " complexes"};
  });
}

}  // namespace

int main() {
  std::printf("acceptance: corpus seed %u (%d central arrangements, rank <= 4, at most 7 hyperplanes, D = 2 rank + 4)\n",
              kCorpusSeed, kCorpusSize);
  std::printf("acceptance: Morse seed %u, unimodularity seed %u, worked-example D = %d\n", kMorseSeed, kUnimodularSeed,
              kWorkedD);
  auto cs = corpus();
  ac1();
  ac2(cs);
  ac3(cs);
  ac4(cs);
  ac5(cs);
  ac6(cs);
  ac7();
  ac8();
  ac9();
  ac10(cs);
  std::printf("acceptance: %d criterion line(s) failed\n", failures);
  return failures ? 1 : 0;
}
