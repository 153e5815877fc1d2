#pragma once

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypic/matroid.hpp"
#include "hypic/sheaf.hpp"

namespace hypic {

inline int default_degree(const Arrangement& arr) { return 2 * static_cast<int>(arr.d) + 4; }

inline std::vector<std::string> e_labels(std::size_t n) {
  std::vector<std::string> l;
  for (std::size_t i = 1; i <= n; ++i) l.push_back("e" + std::to_string(i));
  return l;
}

inline Poly set_monomial(IndexSet s, int first_var = 0) {
  Monomial m = 0;
  for (int i : members(s)) m += mono_var(first_var + i);
  return Poly::monomial(m);
}

// sum_{i in C} a_i e_{C \ i} for the dependence sum_i a_i u_i = 0 on a circuit C.
// Variables are e_{origin[i]}, shifted by first_var.
inline Poly circuit_relation(const Arrangement& arr, IndexSet circ, int first_var = 0) {
  auto a = circuit_coefficients(arr, circ);
  Poly p;
  auto m = members(circ);
  for (std::size_t t = 0; t < m.size(); ++t) {
    Monomial mono = 0;
    for (std::size_t s = 0; s < m.size(); ++s)
      if (s != t) mono += mono_var(first_var + arr.origin[m[s]]);
    p = p + a[t] * Poly::monomial(mono);
  }
  return p;
}

// Generators of J_H, one per circuit.
inline std::vector<Poly> circuit_ideal(const Arrangement& arr, int first_var = 0) {
  std::vector<Poly> rels;
  for (IndexSet c : circuits(matroid_complex(arr))) rels.push_back(circuit_relation(arr, c, first_var));
  return rels;
}

// e_i^2 for i in s.
inline std::vector<Poly> square_relations(IndexSet s, int first_var = 0) {
  std::vector<Poly> q;
  for (int i : members(s)) q.push_back(Poly::monomial(2 * mono_var(first_var + i)));
  return q;
}

inline void require_central(const Arrangement& arr, const char* who) {
  if (!arr.is_central())
    throw std::invalid_argument(std::string(who) + ": arrangement is not central; use the localizations at its flats");
}

inline std::shared_ptr<const TruncatedRing> ring_R(const Arrangement& arr, int D) {
  require_central(arr, "ring_R");
  return quotient_ring(e_labels(arr.size()), circuit_ideal(arr), D);
}

inline std::shared_ptr<const TruncatedRing> ring_S(const Arrangement& arr, int D) {
  require_central(arr, "ring_S");
  auto rels = circuit_ideal(arr);
  auto q = square_relations(arr.ground());
  rels.insert(rels.end(), q.begin(), q.end());
  return quotient_ring(e_labels(arr.size()), rels, D);
}

// y_j acts as the image of the j-th basis vector of V_0 in Q^I.
inline std::vector<Poly> y_images(const Arrangement& arr, int first_var = 0) {
  std::vector<Poly> g;
  for (std::size_t j = 0; j < arr.d; ++j) {
    Poly p;
    for (std::size_t i = 0; i < arr.size(); ++i)
      if (!arr.normals[i][j].is_zero()) p = p + arr.normals[i][j] * Poly::var(first_var + static_cast<int>(i));
    g.push_back(p);
  }
  return g;
}

// A sheaf on the flat lattice whose stalk at F is a quotient of Q[e_i : i in F],
// with restrictions that send e_i to zero off the smaller flat.
struct RingSheaf {
  std::shared_ptr<const Arrangement> arr;
  std::shared_ptr<const FlatLattice> lattice;
  std::shared_ptr<const LinearPoset> lp;
  std::vector<std::vector<Poly>> relations;  // per flat, without the e_i = 0 for i outside F
  std::vector<std::shared_ptr<const TruncatedRing>> rings;
  PosetSheaf sheaf;
};

inline RingSheaf ring_sheaf(const Arrangement& arr, int D, const std::function<std::vector<Poly>(IndexSet)>& rels) {
  RingSheaf rs;
  rs.arr = std::make_shared<Arrangement>(arr);
  rs.lattice = std::make_shared<FlatLattice>(arr);
  rs.lp = std::make_shared<LinearPoset>(LinearPoset::of(*rs.lattice));
  const FlatLattice& lat = *rs.lattice;
  const int n = lat.size();
  rs.relations.resize(n);
  rs.rings.resize(n);
  for (int x = 0; x < n; ++x) rs.relations[x] = rels(lat.flat(x));
  parallel_for(n, [&](std::size_t x) {
    auto all = rs.relations[x];
    for (std::size_t i = 0; i < arr.size(); ++i)
      if (!contains(lat.flat(static_cast<int>(x)), static_cast<int>(i))) all.push_back(Poly::var(static_cast<int>(i)));
    rs.rings[x] = quotient_ring(e_labels(arr.size()), all, D);
  });
  PosetSheaf& sh = rs.sheaf;
  sh.poset = std::make_shared<Poset>(rs.lp->poset());
  sh.D = D;
  sh.ngens = arr.d;
  auto ys = y_images(arr);
  for (int x = 0; x < n; ++x) sh.stalks.push_back(ring_module(rs.rings[x], ys));
  for (int y = 0; y < n; ++y)
    for (int x : lat.lower_covers(y)) {
      std::vector<Poly> images;
      for (std::size_t i = 0; i < arr.size(); ++i)
        images.push_back(contains(lat.flat(x), static_cast<int>(i)) ? Poly::var(static_cast<int>(i)) : Poly());
      sh.covers[{x, y}] = GradedMap::from_ring_map(RingMap(rs.rings[y], rs.rings[x], images));
    }
  return rs;
}

inline std::vector<IndexSet> circuits_inside(const std::vector<IndexSet>& cs, IndexSet f) {
  std::vector<IndexSet> out;
  for (IndexSet c : cs)
    if (is_subset(c, f)) out.push_back(c);
  return out;
}

// R(F) = R(H_F): circuit relations of the circuits contained in F.
inline RingSheaf sheaf_R(const Arrangement& arr, int D) {
  auto cs = circuits(matroid_complex(arr));
  std::vector<Poly> rel;
  for (IndexSet c : cs) rel.push_back(circuit_relation(arr, c));
  return ring_sheaf(arr, D, [&](IndexSet f) {
    std::vector<Poly> out;
    for (std::size_t t = 0; t < cs.size(); ++t)
      if (is_subset(cs[t], f)) out.push_back(rel[t]);
    return out;
  });
}

// Face ring of the broken circuit complex of H_F. Only circuits inside F
// count: for affine arrangements a broken circuit can lie in a flat whose
// circuit does not.
inline RingSheaf sheaf_Rbc(const Arrangement& arr, const std::vector<int>& sigma, int D) {
  auto c = matroid_complex(arr);
  auto cs = circuits(c);
  auto bcs = broken_circuits(c, sigma);
  return ring_sheaf(arr, D, [&](IndexSet f) {
    std::vector<Poly> out;
    for (std::size_t t = 0; t < cs.size(); ++t)
      if (is_subset(cs[t], f)) out.push_back(set_monomial(bcs[t]));
    return out;
  });
}

// E(F): face ring of the matroid complex of H_F, i.e. sections of the
// simplification's structure sheaf over the faces lying over U_F.
inline RingSheaf sheaf_E(const Arrangement& arr, int D) {
  auto cs = circuits(matroid_complex(arr));
  return ring_sheaf(arr, D, [&](IndexSet f) {
    std::vector<Poly> out;
    for (IndexSet c : circuits_inside(cs, f)) out.push_back(set_monomial(c));
    return out;
  });
}

// Stanley-Reisner ring: one squarefree monomial per minimal nonface.
inline std::vector<IndexSet> minimal_nonfaces(const SimplicialComplex& c) {
  std::vector<IndexSet> out;
  const IndexSet all = full_set(c.ground());
  // Every minimal nonface is a face plus one vertex.
  std::set<IndexSet> seen;
  for (IndexSet f : c.faces())
    for (int i = 0; i < static_cast<int>(c.ground()); ++i) {
      IndexSet g = f | (IndexSet{1} << i);
      if (g == f || !is_subset(g, all) || c.contains_face(g) || !seen.insert(g).second) continue;
      bool minimal = true;
      for (int j : members(g))
        if (!c.contains_face(g & ~(IndexSet{1} << j))) minimal = false;
      if (minimal) out.push_back(g);
    }
  std::sort(out.begin(), out.end(), size_lex_less);
  return out;
}

inline std::shared_ptr<const TruncatedRing> face_ring(const SimplicialComplex& c, int D) {
  std::vector<Poly> rels;
  for (IndexSet g : minimal_nonfaces(c)) rels.push_back(set_monomial(g));
  return quotient_ring(e_labels(c.ground()), rels, D);
}

// sum over faces S of (t^2 / (1 - t^2))^|S|.
inline HilbertSeries face_count_series(const SimplicialComplex& c, int D) {
  HilbertSeries h(D, {});
  for (IndexSet s : c.faces()) {
    int k = set_size(s);
    for (int m = k; m <= D / 2; ++m) h.dims[m] += k == 0 ? (m == 0) : binomial(m - 1, k - 1);
  }
  return h;
}

// Ordering of a subset induced from sigma, in the local indices of `sub`.
inline std::vector<int> induced_order(const std::vector<int>& sigma, const Arrangement& sub) {
  std::vector<int> local;
  for (int i : sigma)
    for (std::size_t t = 0; t < sub.origin.size(); ++t)
      if (sub.origin[t] == i) local.push_back(static_cast<int>(t));
  return local;
}

// Coefficients of q^k in h^bc(q); the Poincare polynomial is this in q = t^2.
inline std::vector<long long> ih_poincare(const Arrangement& arr, const std::vector<int>& sigma) {
  require_central(arr, "ih_poincare");
  if (arr.size() == 0) return {1};
  return trim(h_polynomial(broken_circuit_complex(matroid_complex(arr), sigma), static_cast<int>(arr.d)));
}
inline std::vector<long long> ih_poincare(const Arrangement& arr) { return ih_poincare(arr, default_order(arr.size())); }

inline std::vector<long long> ic_stalk_poincare(const Arrangement& arr, IndexSet f, const std::vector<int>& sigma) {
  Arrangement loc = localization(arr, f);
  return ih_poincare(loc, induced_order(sigma, loc));
}
inline std::vector<long long> ic_stalk_poincare(const Arrangement& arr, IndexSet f) {
  return ic_stalk_poincare(arr, f, default_order(arr.size()));
}

inline std::string q_poly_in_t(const std::vector<long long>& h) {
  std::string s;
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (!h[k]) continue;
    if (!s.empty()) s += h[k] < 0 ? " - " : " + ";
    else if (h[k] < 0) s += "-";
    long long a = h[k] < 0 ? -h[k] : h[k];
    if (k == 0) s += std::to_string(a);
    else {
      if (a != 1) s += std::to_string(a);
      s += "t^" + std::to_string(2 * k);
    }
  }
  return s.empty() ? "0" : s;
}

struct MesData {
  FlatLattice lattice;
  std::shared_ptr<LinearPoset> lp;
  MesResult mes;
};

inline MesData mes_of(const Arrangement& arr, int D) {
  MesData m{FlatLattice(arr), nullptr, {}};
  m.lp = std::make_shared<LinearPoset>(LinearPoset::of(m.lattice));
  m.mes = build_mes(*m.lp, 0, D);
  return m;
}

inline HilbertSeries equivariant_ih_hilbert(const MesData& m) {
  return sections(m.mes.sheaf, m.lp->poset().all()).hilbert();
}
inline HilbertSeries equivariant_ih_hilbert(const Arrangement& arr, int D) { return equivariant_ih_hilbert(mes_of(arr, D)); }

// Degree test for an MES supported everywhere: at each F other than the bottom,
// stalk generators sit below 2 rk F and costalk generators at or above it.
struct DegreeCheck {
  bool ok = true;
  std::string failure;
};

inline DegreeCheck mes_degree_check(const PosetSheaf& sh, const FlatLattice& lat) {
  DegreeCheck c;
  auto rep = check_rigidity(sh, 0);
  for (int x = 1; x < lat.size() && c.ok; ++x) {
    int bound = 2 * lat.rank(x);
    for (int g : rep.stalk_generators[x])
      if (g >= bound) {
        c = {false, "stalk generator in degree " + std::to_string(g) + " at " + set_str(lat.flat(x))};
        break;
      }
    for (int g : rep.costalk_generators[x])
      if (c.ok && g < bound) {
        c = {false, "costalk generator in degree " + std::to_string(g) + " at " + set_str(lat.flat(x))};
        break;
      }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Morse sections.

struct MorseData {
  int d = 0;
  int vertices = 0;  // flats of rank d
  HilbertSeries restricted;  // sections over flats of rank < d
  Submodule relative;        // kernel of global sections -> restricted sections
  FreenessReport freeness;
  bool certified = false;    // free of rank `vertices`, all generators in degree 2d
};

inline MorseData morse_sections(const MesData& m) {
  MorseData out;
  const FlatLattice& lat = m.lattice;
  const PosetSheaf& sh = m.mes.sheaf;
  out.d = lat.max_rank();
  std::vector<int> lower;
  for (int x = 0; x < lat.size(); ++x) {
    if (lat.rank(x) < out.d) lower.push_back(x);
    else ++out.vertices;
  }
  Sections all = sections(sh, m.lp->poset().all());
  Sections low = sections(sh, lower);
  out.restricted = low.hilbert();
  // Flats are sorted by rank, so the lower elements form a prefix of the ambient coordinates.
  GradedMap res;
  for (int k = 0; k <= sh.D / 2; ++k) {
    std::size_t cut = low.ambient.dim(k);
    SparseMatrix r(low.module().dim(k), all.module().dim(k));
    for (std::size_t j = 0; j < all.module().dim(k); ++j) {
      SparseVec v;
      for (auto& [i, a] : all.sub.inclusion[k].basis[j])
        if (i < cut) v.emplace_back(i, a);
      r.columns[j] = low.sub.inclusion[k].coords(v);
    }
    res.deg.push_back(std::move(r));
  }
  out.relative = kernel(res, all.module());
  out.freeness = is_free_over(out.relative.module, polynomial_ring_series(out.d, sh.D));
  auto degs = out.freeness.generator_degrees();
  out.certified = out.freeness.free && static_cast<int>(degs.size()) == out.vertices &&
                  std::all_of(degs.begin(), degs.end(), [&](int g) { return g == 2 * out.d; });
  return out;
}

// ---------------------------------------------------------------------------
// Decomposition of E.

struct DecompositionReport {
  Decomposition table;
  bool pure = false;
  bool concentrated = true;     // multiplicities at F only in degree 2 rk F
  bool costalks_ok = true;      // free over A(F), generated in degree 2 rk F, rank = #bases of F
  std::vector<std::size_t> costalk_rank;
  std::vector<std::size_t> bases;
  std::string failure;
};

inline std::size_t count_bases(const Arrangement& arr, IndexSet f, int rk) {
  std::size_t c = 0;
  for (IndexSet s = f;; s = (s - 1) & f) {
    if (set_size(s) == rk && arr.rank_of(s) == static_cast<std::size_t>(rk)) ++c;
    if (!s) break;
  }
  return c;
}

inline DecompositionReport decomposition_report(const Arrangement& arr, int D) {
  DecompositionReport r;
  RingSheaf e = sheaf_E(arr, D);
  const FlatLattice& lat = *e.lattice;
  r.pure = is_pure(e.sheaf, *e.lp);
  if (!r.pure) {
    r.failure = "E is not pure up to degree " + std::to_string(D);
    return r;
  }
  r.table = decompose_pure(e.sheaf);
  for (int x = 0; x < lat.size(); ++x)
    for (std::size_t k = 0; k < r.table.multiplicity[x].size(); ++k)
      if (r.table.multiplicity[x][k] && static_cast<int>(k) != lat.rank(x)) {
        r.concentrated = false;
        if (r.failure.empty()) r.failure = "multiplicity off degree 2 rk F at " + set_str(lat.flat(x));
      }
  r.costalk_rank.resize(lat.size());
  r.bases.resize(lat.size());
  for (int x = 0; x < lat.size(); ++x) {
    auto c = costalk(e.sheaf, x).module;
    auto f = is_free_over(c, polynomial_ring_series(lat.rank(x), D));
    auto degs = f.generator_degrees();
    r.costalk_rank[x] = degs.size();
    r.bases[x] = count_bases(arr, lat.flat(x), lat.rank(x));
    bool ok = f.free && degs.size() == r.bases[x] &&
              std::all_of(degs.begin(), degs.end(), [&](int g) { return g == 2 * lat.rank(x); });
    if (!ok) {
      r.costalks_ok = false;
      if (r.failure.empty()) r.failure = "costalk of E at " + set_str(lat.flat(x)) + " is not as predicted";
    }
  }
  certify_decomposition(e.sheaf, *e.lp, r.table);
  if (!r.table.hilbert_identity && r.failure.empty()) r.failure = r.table.failure;
  return r;
}

inline bool decomposition_ok(const DecompositionReport& r) {
  return r.pure && r.concentrated && r.costalks_ok && r.table.hilbert_identity;
}

}  // namespace hypic
