#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hypic/invariants.hpp"

namespace hypic {

class NotUnimodularError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Flats plus the pairs (E, F) of flats with F < E. A pair sits below both of
// its flats and lives over the smaller one: p(E, F) = F. Elements are indexed
// pairs first, then flats in lattice order, which is a linear extension.
struct ExtendedPoset {
  std::shared_ptr<const Arrangement> arr;
  std::shared_ptr<const FlatLattice> lattice;
  std::vector<std::pair<int, int>> pairs;  // (upper, lower) flat indices
  std::shared_ptr<const Poset> poset;
  bool unimodular = true;

  int size() const { return poset->size(); }
  int npairs() const { return static_cast<int>(pairs.size()); }
  int nflats() const { return lattice->size(); }
  bool is_pair(int x) const { return x < npairs(); }
  int flat_element(int f) const { return npairs() + f; }
  int pair_element(int upper, int lower) const {
    for (int t = 0; t < npairs(); ++t)
      if (pairs[t] == std::make_pair(upper, lower)) return t;
    throw std::invalid_argument("ExtendedPoset: no such pair");
  }
  // Flat index p(x).
  int p(int x) const { return is_pair(x) ? pairs[x].second : x - npairs(); }
  IndexSet flat_of(int x) const { return lattice->flat(p(x)); }
  // Elements over a set of flats.
  std::vector<int> preimage(const std::vector<int>& flats) const {
    std::vector<char> in(nflats(), 0);
    for (int f : flats) in[f] = 1;
    std::vector<int> out;
    for (int x = 0; x < size(); ++x)
      if (in[p(x)]) out.push_back(x);
    return out;
  }
  // Flats strictly below f.
  std::vector<int> flats_below(int f) const {
    std::vector<int> out;
    for (int g = 0; g < nflats(); ++g)
      if (g != f && lattice->leq(g, f)) out.push_back(g);
    return out;
  }
};

inline void require_gmes_input(const Arrangement& arr, bool force, bool* unimodular) {
  require_central(arr, "gmes");
  *unimodular = is_unimodular(arr);
  if (!*unimodular && !force)
    throw NotUnimodularError(
        "gmes: arrangement is not unimodular; the extended sheaves and the GMES statements need a central unimodular "
        "arrangement (pass --force-nonunimodular to compute anyway)");
}

inline ExtendedPoset extended_poset(const Arrangement& arr, bool force = false) {
  ExtendedPoset ep;
  require_gmes_input(arr, force, &ep.unimodular);
  ep.arr = std::make_shared<Arrangement>(arr);
  ep.lattice = std::make_shared<FlatLattice>(arr);
  const FlatLattice& lat = *ep.lattice;
  for (int e = 0; e < lat.size(); ++e)
    for (int f = 0; f < lat.size(); ++f)
      if (e != f && lat.leq(f, e)) ep.pairs.emplace_back(e, f);
  const int P = ep.npairs();
  std::vector<std::string> names;
  for (auto [e, f] : ep.pairs) names.push_back("(" + set_str(lat.flat(e)) + "," + set_str(lat.flat(f)) + ")");
  for (int f = 0; f < lat.size(); ++f) names.push_back(set_str(lat.flat(f)));
  auto pairs = ep.pairs;
  ep.poset = std::make_shared<Poset>(
      P + lat.size(),
      [&](int a, int b) {
        if (a >= P || b < P) return false;
        int g = b - P;
        return pairs[a].first == g || pairs[a].second == g;
      },
      names);
  return ep;
}

// A sheaf of quotient rings of one polynomial ring on the extended poset,
// together with the images of the generators of the structure sheaf's rings
// (y_1..y_d, e_1..e_n) in each stalk. Stalk modules act through those images.
struct ExtendedSheaf {
  std::shared_ptr<const ExtendedPoset> ext;
  std::vector<std::string> vars;
  std::vector<std::vector<Poly>> relations;
  std::vector<std::shared_ptr<const TruncatedRing>> rings;
  std::vector<std::vector<Poly>> structure;
  // Variable images of each restriction, keyed like PosetSheaf::covers.
  std::map<std::pair<int, int>, std::vector<Poly>> cover_images;
  PosetSheaf sheaf;

  int D() const { return sheaf.D; }
};

namespace detail {

inline ExtendedSheaf build_extended(const ExtendedPoset& ep, std::vector<std::string> vars, int D,
                                    const std::function<std::vector<Poly>(int)>& rels,
                                    const std::function<std::vector<Poly>(int)>& structure,
                                    const std::function<std::vector<Poly>(int, int)>& images) {
  ExtendedSheaf s;
  s.ext = std::make_shared<ExtendedPoset>(ep);
  s.vars = std::move(vars);
  const int n = ep.size();
  s.relations.resize(n);
  s.structure.resize(n);
  s.rings.resize(n);
  for (int x = 0; x < n; ++x) {
    s.relations[x] = rels(x);
    s.structure[x] = structure(x);
  }
  parallel_for(n, [&](std::size_t x) { s.rings[x] = quotient_ring(s.vars, s.relations[x], D); });
  s.sheaf.poset = ep.poset;
  s.sheaf.D = D;
  s.sheaf.ngens = ep.arr->d + ep.arr->size();
  s.sheaf.stalks.resize(n);
  parallel_for(n, [&](std::size_t x) { s.sheaf.stalks[x] = ring_module(s.rings[x], s.structure[x]); });
  for (int t = 0; t < ep.npairs(); ++t)
    for (int y : ep.poset->upper_covers(t)) {
      auto im = images(t, y);
      s.sheaf.covers[{t, y}] = GradedMap::from_ring_map(RingMap(s.rings[y], s.rings[t], im));
      s.cover_images[{t, y}] = std::move(im);
    }
  return s;
}

inline std::vector<Poly> identity_images(std::size_t n) {
  std::vector<Poly> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(Poly::var(static_cast<int>(i)));
  return v;
}

}  // namespace detail

// Generators of J for the restriction to a flat, in the parent's variables.
inline std::vector<Poly> restriction_ideal(const Arrangement& arr, IndexSet f, int first_var = 0) {
  return circuit_ideal(restriction(arr, f), first_var);
}

// A-hat(F) = A (x)_{A^F} S(H^F), presented on y_1..y_d, e_1..e_n: e_i = 0 on F,
// J_{H^F}, e_i^2 off F, and each v in <F> identified with sum_{i not in F} <u_i,v> e_i.
// A-hat(E,F) adds J_{H^E}; the map from A-hat(E) kills e_i for i in E.
inline ExtendedSheaf hat_A(const ExtendedPoset& ep, int D) {
  const Arrangement& arr = *ep.arr;
  const FlatLattice& lat = *ep.lattice;
  const int d = static_cast<int>(arr.d), n = static_cast<int>(arr.size());
  std::vector<std::string> vars;
  for (int j = 1; j <= d; ++j) vars.push_back("y" + std::to_string(j));
  auto el = e_labels(arr.size());
  vars.insert(vars.end(), el.begin(), el.end());
  auto flat_rels = [&](int f) {
    IndexSet F = lat.flat(f);
    std::vector<Poly> r;
    for (int i = 0; i < n; ++i)
      r.push_back(contains(F, i) ? Poly::var(d + i) : Poly::monomial(2 * mono_var(d + i)));
    auto j = restriction_ideal(arr, F, d);
    r.insert(r.end(), j.begin(), j.end());
    for (const Vec& v : lat.annihilator(f)) {
      Poly p;
      for (int t = 0; t < d; ++t) p += v[t] * Poly::var(t);
      for (int i = 0; i < n; ++i) {
        if (contains(F, i)) continue;
        Rational c;
        for (int t = 0; t < d; ++t) c += arr.normals[i][t] * v[t];
        p -= c * Poly::var(d + i);
      }
      if (!p.is_zero()) r.push_back(p);
    }
    return r;
  };
  return detail::build_extended(
      ep, vars, D,
      [&](int x) {
        auto r = flat_rels(ep.p(x));
        if (ep.is_pair(x)) {
          auto j = restriction_ideal(arr, lat.flat(ep.pairs[x].first), d);
          r.insert(r.end(), j.begin(), j.end());
        }
        return r;
      },
      [&](int) { return detail::identity_images(d + n); },
      [&](int t, int y) {
        auto im = detail::identity_images(d + n);
        if (ep.p(y) == ep.pairs[t].first)
          for (int i : members(lat.flat(ep.pairs[t].first))) im[d + i] = Poly();
        return im;
      });
}
inline ExtendedSheaf hat_A(const Arrangement& arr, int D, bool force = false) {
  return hat_A(extended_poset(arr, force), D);
}

// R-hat(F) = Q[I]/(J_H + J_{H^F} + Q_{I\F}); R-hat(E,F) adds J_{H^E}. All
// restrictions are quotient maps; y_j acts as sum_i u_i[j] e_i and e_i as
// itself off p(x), as zero on it.
inline ExtendedSheaf hat_R(const ExtendedPoset& ep, int D) {
  const Arrangement& arr = *ep.arr;
  const FlatLattice& lat = *ep.lattice;
  const int n = static_cast<int>(arr.size());
  auto jh = circuit_ideal(arr);
  return detail::build_extended(
      ep, e_labels(arr.size()), D,
      [&](int x) {
        IndexSet F = ep.flat_of(x);
        std::vector<Poly> r = jh;
        auto j = restriction_ideal(arr, F);
        r.insert(r.end(), j.begin(), j.end());
        auto q = square_relations(arr.ground() & ~F);
        r.insert(r.end(), q.begin(), q.end());
        if (ep.is_pair(x)) {
          auto je = restriction_ideal(arr, lat.flat(ep.pairs[x].first));
          r.insert(r.end(), je.begin(), je.end());
        }
        return r;
      },
      [&](int x) {
        IndexSet F = ep.flat_of(x);
        auto g = y_images(arr);
        for (int i = 0; i < n; ++i) g.push_back(contains(F, i) ? Poly() : Poly::var(i));
        return g;
      },
      [&](int, int) { return detail::identity_images(n); });
}
inline ExtendedSheaf hat_R(const Arrangement& arr, int D, bool force = false) {
  return hat_R(extended_poset(arr, force), D);
}

// J_H + J_{H^F} + Q_{I\F} = J_{H_F} + J_{H^F} + Q_{I\F}, both containments up to D.
inline bool check_ideal_identity(const Arrangement& arr, IndexSet f, int D) {
  require_central(arr, "check_ideal_identity");
  require_flat(arr, f);
  auto common = restriction_ideal(arr, f);
  auto q = square_relations(arr.ground() & ~f);
  common.insert(common.end(), q.begin(), q.end());
  auto lhs = circuit_ideal(arr);
  auto rhs = circuit_ideal(localization(arr, f));
  lhs.insert(lhs.end(), common.begin(), common.end());
  rhs.insert(rhs.end(), common.begin(), common.end());
  return ideal_equality(e_labels(arr.size()), lhs, rhs, D);
}

// Sheaf-of-modules compatibility: each restriction of `m` intertwines the
// action of a with the action of its image under the matching restriction of
// `base`, whose variables are the acting generators.
inline bool check_module_maps(const ExtendedSheaf& m, const ExtendedSheaf& base) {
  for (auto& [key, map] : m.sheaf.covers) {
    auto [x, y] = key;
    const auto& img = base.cover_images.at(key);
    const auto& sx = m.sheaf.stalks[x];
    const auto& sy = m.sheaf.stalks[y];
    const std::size_t G = img.size();
    for (std::size_t g = 0; g < G; ++g) {
      Vec coeffs(G);
      for (auto& [mono, c] : img[g].terms()) coeffs[mono_first_var(mono)] = c;
      for (int k = 0; k < m.D() / 2; ++k) {
        std::vector<SparseMatrix> acts;
        for (std::size_t h = 0; h < G; ++h) acts.push_back(sx.act[h][k]);
        SparseMatrix rhs = linear_combination(acts, coeffs, sx.dims[k + 1], sx.dims[k]);
        if (!(map.deg[k + 1] * sy.act[g][k] == rhs * map.deg[k])) return false;
      }
    }
  }
  return true;
}

struct GmesCondition {
  bool pass = true;
  std::string detail;

  void fail(std::string why) {
    if (pass) detail = std::move(why);
    pass = false;
  }
};

struct GmesReport {
  GmesCondition c1, c2, c3, c4, minimal;
  std::vector<std::vector<int>> generator_degrees;  // per flat
  std::vector<HilbertSeries> stalk_hilbert;          // per element

  bool passed() const { return c1.pass && c2.pass && c3.pass && c4.pass && minimal.pass; }
  std::string first_failure() const {
    const std::pair<const char*, const GmesCondition*> all[] = {
        {"condition 1", &c1}, {"condition 2", &c2}, {"condition 3", &c3}, {"condition 4", &c4}, {"minimality", &minimal}};
    for (auto& [name, c] : all)
      if (!c->pass) return std::string(name) + ": " + c->detail;
    return "";
  }
};

namespace detail {

inline bool same_span(const std::vector<SparseVec>& a, const std::vector<SparseVec>& b, std::size_t ambient) {
  Echelon ea(ambient), eb(ambient), both(ambient);
  for (auto& v : a) {
    ea.insert(v);
    both.insert(v);
  }
  for (auto& v : b) {
    eb.insert(v);
    both.insert(v);
  }
  return ea.rank() == both.rank() && eb.rank() == both.rank();
}

// Concatenation of the restrictions of v from `from` to each element of `to`.
inline SparseVec stacked(const PosetSheaf& sh, int from, const std::vector<int>& to, int k, const SparseVec& v) {
  SparseVec out;
  std::uint32_t off = 0;
  for (int t : to) {
    for (auto& [i, c] : sh.cover_map(t, from).deg[k].apply(v)) out.emplace_back(off + i, c);
    off += static_cast<std::uint32_t>(sh.stalks[t].dim(k));
  }
  return out;
}

inline std::size_t stacked_dim(const PosetSheaf& sh, const std::vector<int>& to, int k) {
  std::size_t s = 0;
  for (int t : to) s += sh.stalks[t].dim(k);
  return s;
}

}  // namespace detail

inline GmesReport verify_gmes(const ExtendedSheaf& cand, const ExtendedSheaf& hatA) {
  const ExtendedPoset& ep = *cand.ext;
  const FlatLattice& lat = *ep.lattice;
  const PosetSheaf& sh = cand.sheaf;
  const int K = cand.D() / 2;
  GmesReport r;
  for (auto& s : sh.stalks) r.stalk_hilbert.push_back(s.hilbert());

  // 1: the stalk at the empty flat is A-hat there.
  {
    int x = ep.flat_element(0);
    RingMap psi(hatA.rings[x], cand.rings[x], cand.structure[x]);
    if (!psi.well_defined() || !psi.is_surjective() || !psi.is_injective())
      r.c1.fail("stalk at the empty flat is not isomorphic to A-hat");
  }

  // 2: flat stalks free over A-hat(F); also the action must factor through it.
  r.generator_degrees.resize(ep.nflats());
  for (int f = 0; f < ep.nflats(); ++f) {
    int x = ep.flat_element(f);
    if (!RingMap(hatA.rings[x], cand.rings[x], cand.structure[x]).well_defined()) {
      r.c2.fail("A-hat does not act on the stalk at " + sh.poset->name(x));
      continue;
    }
    auto fr = is_free_over(sh.stalks[x], hatA.rings[x]->hilbert());
    r.generator_degrees[f] = fr.generator_degrees();
    if (!fr.free) r.c2.fail("stalk at " + sh.poset->name(x) + " is not free, degree " + std::to_string(2 * fr.first_failure));
  }

  // 3: pair stalks are base changes of the stalk over the smaller flat.
  for (int t = 0; t < ep.npairs(); ++t) {
    int x = ep.flat_element(ep.pairs[t].second);
    RingMap rho(hatA.rings[x], hatA.rings[t], hatA.cover_images.at({t, x}));
    RingMap psi(hatA.rings[x], cand.rings[x], cand.structure[x]);
    const GradedMap& res = sh.cover_map(t, x);
    const TruncatedRing& ring = *cand.rings[x];
    std::vector<SparseVec> ideal;  // K * cand(F) in the current degree
    for (int k = 0; k <= K && r.c3.pass; ++k) {
      std::vector<SparseVec> next;
      for (auto& v : null_space(rho.matrix(k)).basis) next.push_back(psi.matrix(k).apply(v));
      if (k > 0)
        for (int v = 0; v < static_cast<int>(ring.nvars()); ++v)
          for (auto& w : ideal) next.push_back(ring.var_action(v, k - 1).apply(w));
      ideal = SubspaceBasis::span_of(next, ring.dim(k)).basis;
      std::size_t rank = res.deg[k].rank();
      std::string where = " at " + sh.poset->name(t) + ", degree " + std::to_string(2 * k);
      if (rank != sh.stalks[t].dim(k)) r.c3.fail("restriction is not onto" + where);
      else if (ring.dim(k) - rank != ideal.size()) r.c3.fail("kernel differs from the base-changed ideal" + where);
      else
        for (auto& w : ideal)
          if (!res.deg[k].apply(w).empty()) {
            r.c3.fail("base-changed ideal not killed" + where);
            break;
          }
    }
  }

  // 4 and minimality: images in the pairs (F, E), E < F.
  for (int f = 1; f < ep.nflats() && (r.c4.pass || r.minimal.pass); ++f) {
    int x = ep.flat_element(f);
    auto below = ep.flats_below(f);
    std::vector<int> targets;
    for (int e : below) targets.push_back(ep.pair_element(f, e));
    auto sp = section_spaces(sh, ep.preimage(below));
    int rk = lat.rank(f);
    for (int k = 0; k <= K; ++k) {
      std::size_t amb = detail::stacked_dim(sh, targets, k);
      std::vector<SparseVec> from_stalk;
      for (std::uint32_t j = 0; j < sh.stalks[x].dim(k); ++j)
        from_stalk.push_back(detail::stacked(sh, x, targets, k, {{j, Rational(1)}}));
      std::vector<SparseVec> from_sections;
      for (auto& s : sp.basis[k].basis) {
        SparseVec v;
        std::uint32_t off = 0;
        for (int t : targets) {
          auto pos = std::lower_bound(sp.elements.begin(), sp.elements.end(), t) - sp.elements.begin();
          std::uint32_t lo = static_cast<std::uint32_t>(sp.offset[k][pos]);
          std::uint32_t hi = lo + static_cast<std::uint32_t>(sh.stalks[t].dim(k));
          for (auto& [i, c] : s)
            if (i >= lo && i < hi) v.emplace_back(off + i - lo, c);
          off += static_cast<std::uint32_t>(sh.stalks[t].dim(k));
        }
        from_sections.push_back(std::move(v));
      }
      if (r.c4.pass && !detail::same_span(from_stalk, from_sections, amb))
        r.c4.fail("images differ at " + sh.poset->name(x) + ", degree " + std::to_string(2 * k));
      if (k <= rk && r.minimal.pass) {
        Echelon e(amb);
        for (auto& v : from_stalk) e.insert(v);
        if (e.rank() != sh.stalks[x].dim(k))
          r.minimal.fail("boundary kernel at " + sh.poset->name(x) + " in degree " + std::to_string(2 * k));
      }
    }
    for (int g : r.generator_degrees[f])
      if (g >= 2 * rk && r.minimal.pass)
        r.minimal.fail("generator in degree " + std::to_string(g) + " at " + sh.poset->name(x));
  }
  return r;
}

struct PushforwardReport {
  bool ok = true;
  std::string failure;
  std::vector<HilbertSeries> hilbert;  // per flat, of the pushforward
};

// (R-hat / I)(x) with I generated by e_i, i not in p(x), pushed forward along
// p and compared with the sheaf R stalk by stalk and map by map.
inline PushforwardReport compare_pushforward(const ExtendedPoset& ep, int D) {
  const Arrangement& arr = *ep.arr;
  const FlatLattice& lat = *ep.lattice;
  ExtendedSheaf rhat = hat_R(ep, D);
  ExtendedSheaf g = detail::build_extended(
      ep, rhat.vars, D,
      [&](int x) {
        auto r = rhat.relations[x];
        for (std::size_t i = 0; i < arr.size(); ++i)
          if (!contains(ep.flat_of(x), static_cast<int>(i))) r.push_back(Poly::var(static_cast<int>(i)));
        return r;
      },
      [&](int x) { return rhat.structure[x]; }, [&](int t, int y) { return rhat.cover_images.at({t, y}); });
  RingSheaf rr = sheaf_R(arr, D);
  PushforwardReport rep;
  auto fail = [&](std::string why) {
    if (rep.ok) rep.failure = std::move(why);
    rep.ok = false;
  };
  const int K = D / 2;
  // Every stalk over F is presented exactly like R(F).
  for (int x = 0; x < ep.size(); ++x) {
    int f = ep.p(x);
    auto rf = rr.relations[f];
    for (std::size_t i = 0; i < arr.size(); ++i)
      if (!contains(lat.flat(f), static_cast<int>(i))) rf.push_back(Poly::var(static_cast<int>(i)));
    if (!ideal_equality(g.vars, g.relations[x], rf, D)) fail("stalk at " + g.sheaf.poset->name(x) + " is not R(F)");
  }
  if (!rep.ok) return rep;
  for (int f = 0; f < ep.nflats(); ++f) {
    int x = ep.flat_element(f);
    std::vector<int> dn;
    for (int e = 0; e < ep.nflats(); ++e)
      if (lat.leq(e, f)) dn.push_back(e);
    auto sp = section_spaces(g.sheaf, ep.preimage(dn));
    HilbertSeries h(D, {});
    auto pos_of = [&](int e) {
      return static_cast<std::size_t>(std::lower_bound(sp.elements.begin(), sp.elements.end(), e) - sp.elements.begin());
    };
    for (int k = 0; k <= K; ++k) {
      h.dims[k] = static_cast<long long>(sp.basis[k].dim());
      if (sp.basis[k].dim() != rr.rings[f]->dim(k)) {
        fail("sections over " + set_str(lat.flat(f)) + " have the wrong dimension in degree " + std::to_string(2 * k));
        break;
      }
      auto comp = [&](const SparseVec& s, int e) {
        std::size_t p = pos_of(ep.flat_element(e));
        std::uint32_t lo = static_cast<std::uint32_t>(sp.offset[k][p]);
        std::uint32_t hi = lo + static_cast<std::uint32_t>(g.sheaf.stalks[ep.flat_element(e)].dim(k));
        SparseVec v;
        for (auto& [i, c] : s)
          if (i >= lo && i < hi) v.emplace_back(i - lo, c);
        return v;
      };
      Echelon top(g.sheaf.stalks[x].dim(k));
      for (auto& s : sp.basis[k].basis) top.insert(comp(s, f));
      if (top.rank() != sp.basis[k].dim()) {
        fail("sections over " + set_str(lat.flat(f)) + " do not project isomorphically to the stalk");
        break;
      }
      // Each flat component is the R-restriction of the top one.
      for (int e : dn) {
        if (e == f) continue;
        if (rr.rings[e]->basis(k) != g.rings[ep.flat_element(e)]->basis(k)) {
          fail("bases differ at " + set_str(lat.flat(e)));
          break;
        }
        GradedMap res = rr.sheaf.restriction(e, f);
        for (auto& s : sp.basis[k].basis)
          if (res.deg[k].apply(comp(s, f)) != comp(s, e)) {
            fail("restriction " + set_str(lat.flat(f)) + " -> " + set_str(lat.flat(e)) + " differs from R");
            break;
          }
      }
      if (!rep.ok) break;
    }
    rep.hilbert.push_back(h);
    if (!rep.ok) break;
  }
  return rep;
}
inline PushforwardReport compare_pushforward(const Arrangement& arr, int D, bool force = false) {
  return compare_pushforward(extended_poset(arr, force), D);
}

// Image of the sections over p^{-1}(boundary of F) in the chosen pairs (F, E),
// and the kernel of Q[I] -> those pair stalks.
struct BoundaryImage {
  std::vector<long long> image_dims;
  std::vector<long long> kernel_dims;
  bool kernel_matches = false;  // kernel equals the given ideal up to the truncation
  bool images_agree = false;    // Q[I] and the sections have the same image
};

inline BoundaryImage boundary_image(const ExtendedSheaf& cand, int f, const std::vector<int>& lower_flats,
                                    const std::vector<Poly>& ideal) {
  const ExtendedPoset& ep = *cand.ext;
  const PosetSheaf& sh = cand.sheaf;
  const int D = cand.D(), K = D / 2;
  std::vector<int> targets;
  for (int e : lower_flats) targets.push_back(ep.pair_element(f, e));
  auto sp = section_spaces(sh, ep.preimage(ep.flats_below(f)));
  auto free_ring = quotient_ring(cand.vars, {}, D);
  auto quot = quotient_ring(cand.vars, ideal, D);
  BoundaryImage b;
  b.kernel_matches = b.images_agree = true;
  std::vector<RingMap> maps;
  for (int t : targets) maps.emplace_back(free_ring, cand.rings[t], detail::identity_images(cand.vars.size()));
  for (int k = 0; k <= K; ++k) {
    std::size_t amb = detail::stacked_dim(sh, targets, k);
    std::vector<SparseVec> from_free;
    for (std::size_t j = 0; j < free_ring->dim(k); ++j) {
      SparseVec v;
      std::uint32_t off = 0;
      for (std::size_t t = 0; t < targets.size(); ++t) {
        for (auto& [i, c] : maps[t].matrix(k).columns[j]) v.emplace_back(off + i, c);
        off += static_cast<std::uint32_t>(sh.stalks[targets[t]].dim(k));
      }
      from_free.push_back(std::move(v));
    }
    std::vector<SparseVec> from_sections;
    for (auto& s : sp.basis[k].basis) {
      SparseVec v;
      std::uint32_t off = 0;
      for (int t : targets) {
        auto pos = std::lower_bound(sp.elements.begin(), sp.elements.end(), t) - sp.elements.begin();
        std::uint32_t lo = static_cast<std::uint32_t>(sp.offset[k][pos]);
        std::uint32_t hi = lo + static_cast<std::uint32_t>(sh.stalks[t].dim(k));
        for (auto& [i, c] : s)
          if (i >= lo && i < hi) v.emplace_back(off + i - lo, c);
        off += static_cast<std::uint32_t>(sh.stalks[t].dim(k));
      }
      from_sections.push_back(std::move(v));
    }
    Echelon img(amb);
    for (auto& v : from_free) img.insert(v);
    b.image_dims.push_back(static_cast<long long>(img.rank()));
    b.kernel_dims.push_back(static_cast<long long>(free_ring->dim(k) - img.rank()));
    if (!detail::same_span(from_free, from_sections, amb)) b.images_agree = false;
    // ideal inside the kernel, and of the same dimension
    if (quot->dim(k) != img.rank()) b.kernel_matches = false;
    for (auto& p : ideal)
      if (p.degree() == k) {
        SparseVec col = free_ring->normal_form(p);
        SparseAccumulator acc(amb);
        for (auto& [j, c] : col) acc.add(from_free[j], c);
        if (!acc.take().empty()) b.kernel_matches = false;
      }
  }
  return b;
}

}  // namespace hypic
