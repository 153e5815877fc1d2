#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypic/arrangement.hpp"
#include "hypic/graded.hpp"
#include "hypic/parallel.hpp"

namespace hypic {

// Finite poset whose element indices form a linear extension: a < b implies
// index(a) < index(b).
class Poset {
 public:
  Poset() = default;
  Poset(int n, const std::function<bool(int, int)>& leq, std::vector<std::string> names = {})
      : n_(n), le_(n, std::vector<char>(n, 0)), below_(n), above_(n), names_(std::move(names)) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) le_[a][b] = a == b || leq(a, b);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (a != b && le_[a][b]) {
          if (a > b) throw std::invalid_argument("Poset: element order is not a linear extension");
          if (le_[b][a]) throw std::invalid_argument("Poset: relation is not antisymmetric");
        }
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        if (!le_[a][b]) continue;
        bool cover = true;
        for (int c = a + 1; c < b && cover; ++c)
          if (le_[a][c] && le_[c][b]) cover = false;
        if (cover) {
          below_[b].push_back(a);
          above_[a].push_back(b);
        }
      }
    if (names_.empty())
      for (int a = 0; a < n; ++a) names_.push_back(std::to_string(a));
  }

  int size() const { return n_; }
  bool leq(int a, int b) const { return le_[a][b]; }
  bool less(int a, int b) const { return a != b && le_[a][b]; }
  const std::vector<int>& lower_covers(int x) const { return below_[x]; }
  const std::vector<int>& upper_covers(int x) const { return above_[x]; }
  const std::string& name(int x) const { return names_[x]; }

  std::vector<int> boundary(int x) const {
    std::vector<int> u;
    for (int y = 0; y < x; ++y)
      if (le_[y][x]) u.push_back(y);
    return u;
  }
  std::vector<int> down_set(int x) const {
    auto u = boundary(x);
    u.push_back(x);
    return u;
  }
  std::vector<int> up_set(int x) const {
    std::vector<int> u;
    for (int y = x; y < n_; ++y)
      if (le_[x][y]) u.push_back(y);
    return u;
  }
  std::vector<int> all() const {
    std::vector<int> u(n_);
    for (int i = 0; i < n_; ++i) u[i] = i;
    return u;
  }
  bool is_open(const std::vector<int>& u) const {
    std::vector<char> in(n_, 0);
    for (int x : u) in[x] = 1;
    for (int x : u)
      for (int y = 0; y < n_; ++y)
        if (le_[y][x] && !in[y]) return false;
    return true;
  }

 private:
  int n_ = 0;
  std::vector<std::vector<char>> le_;
  std::vector<std::vector<int>> below_, above_;
  std::vector<std::string> names_;
};

// Poset with V(x) = V_0 / <x> for subspaces <x> of V_0 = Q^d shrinking as x
// grows. The structure sheaf has stalks A(x) = Sym V(x) = Q[y_1..y_d]/(<x>).
class LinearPoset {
 public:
  LinearPoset(Poset p, std::size_t d, std::vector<std::vector<Vec>> annihilators)
      : poset_(std::move(p)), d_(d), ann_(std::move(annihilators)) {
    if (static_cast<int>(ann_.size()) != poset_.size()) throw std::invalid_argument("LinearPoset: one subspace per element");
    dims_.resize(ann_.size());
    for (std::size_t x = 0; x < ann_.size(); ++x) {
      for (auto& v : ann_[x])
        if (v.size() != d_) throw std::invalid_argument("LinearPoset: subspace vector has wrong length");
      dims_[x] = static_cast<int>(d_ - span_dim(ann_[x]));
    }
    // x <= y requires <y> inside <x>, i.e. V(y) -> V(x) surjective.
    for (int x = 0; x < poset_.size(); ++x)
      for (int y : poset_.upper_covers(x)) {
        std::vector<Vec> both = ann_[x];
        both.insert(both.end(), ann_[y].begin(), ann_[y].end());
        if (span_dim(both) != span_dim(ann_[x]))
          throw std::invalid_argument("LinearPoset: V(" + poset_.name(y) + ") does not surject onto V(" +
                                      poset_.name(x) + ")");
      }
  }

  static LinearPoset of(const FlatLattice& lat) {
    std::vector<std::string> names;
    for (IndexSet f : lat.flats()) names.push_back(set_str(f));
    Poset p(lat.size(), [&](int a, int b) { return lat.leq(a, b); }, names);
    std::vector<std::vector<Vec>> ann;
    for (int x = 0; x < lat.size(); ++x) ann.push_back(lat.annihilator(x));
    return LinearPoset(std::move(p), lat.dim(), std::move(ann));
  }

  const Poset& poset() const { return poset_; }
  int size() const { return poset_.size(); }
  std::size_t dim() const { return d_; }
  int rank(int x) const { return dims_[x]; }
  const std::vector<Vec>& annihilator(int x) const { return ann_[x]; }

  std::vector<std::string> y_labels() const {
    std::vector<std::string> l;
    for (std::size_t j = 1; j <= d_; ++j) l.push_back("y" + std::to_string(j));
    return l;
  }
  std::vector<Poly> y_generators() const {
    std::vector<Poly> g;
    for (std::size_t j = 0; j < d_; ++j) g.push_back(Poly::var(static_cast<int>(j)));
    return g;
  }

  std::shared_ptr<const TruncatedRing> ring(int x, int D) const {
    std::vector<Poly> rels;
    for (auto& v : ann_[x]) rels.push_back(Poly::linear(v));
    return quotient_ring(y_labels(), rels, D);
  }

 private:
  Poset poset_;
  std::size_t d_;
  std::vector<std::vector<Vec>> ann_;
  std::vector<int> dims_;

  std::size_t span_dim(const std::vector<Vec>& vs) const {
    Echelon e(d_);
    for (auto& v : vs) e.insert(to_sparse(v));
    return e.rank();
  }
};

// Stalks over a poset with restriction maps along covering relations. Every
// stalk is a module over the same polynomial ring (act has ngens operators).
struct PosetSheaf {
  std::shared_ptr<const Poset> poset;
  int D = 0;
  std::size_t ngens = 0;
  std::vector<GradedModule> stalks;
  std::map<std::pair<int, int>, GradedMap> covers;  // (x, y), x covered by y: M(y) -> M(x)

  const GradedMap& cover_map(int x, int y) const {
    auto it = covers.find({x, y});
    if (it == covers.end()) throw std::invalid_argument("PosetSheaf: no cover " + std::to_string(x) + " < " + std::to_string(y));
    return it->second;
  }

  // r_xy along the chain that always steps to the lowest-indexed cover.
  GradedMap restriction(int x, int y) const {
    if (x == y) return GradedMap::identity(stalks[y]);
    if (!poset->less(x, y)) throw std::invalid_argument("PosetSheaf: restriction between incomparable elements");
    for (int w : poset->lower_covers(y))
      if (poset->leq(x, w)) return restriction(x, w) * cover_map(w, y);
    throw std::logic_error("PosetSheaf: no chain");
  }

  // Values of s in M(y)_k pushed down to every element of `targets`, which
  // must contain each z < y that lies above some target.
  std::map<int, SparseVec> push_down(int y, int k, const SparseVec& s, const std::vector<int>& targets) const {
    std::map<int, SparseVec> val{{y, s}};
    std::vector<int> order = targets;
    std::sort(order.rbegin(), order.rend());
    for (int z : order) {
      int w = -1;
      for (int c : poset->upper_covers(z))
        if (poset->leq(c, y)) {
          w = c;
          break;
        }
      auto it = val.find(w);
      if (it == val.end()) throw std::logic_error("push_down: targets are not an interval below the source");
      val[z] = cover_map(z, w).deg[k].apply(it->second);
    }
    val.erase(y);
    return val;
  }
};

// ---------------------------------------------------------------------------
// Sections over an open set.

struct Sections {
  std::vector<int> elements;                 // the open set, ascending
  std::vector<std::vector<std::size_t>> offset;  // offset[k][t] of elements[t] in degree k
  GradedModule ambient;                      // direct sum of the stalks over U
  Submodule sub;                             // the sections inside ambient

  const GradedModule& module() const { return sub.module; }
  HilbertSeries hilbert() const { return sub.module.hilbert(); }

  // Component of an ambient vector at element x.
  SparseVec component(const SparseVec& v, int k, int x, std::size_t len) const {
    auto it = std::find(elements.begin(), elements.end(), x);
    std::size_t t = static_cast<std::size_t>(it - elements.begin());
    std::size_t lo = offset[k][t], hi = lo + len;
    SparseVec out;
    for (auto& [i, a] : v)
      if (i >= lo && i < hi) out.emplace_back(static_cast<std::uint32_t>(i - lo), a);
    return out;
  }
};

// Offsets of each element's block in degree k of the direct sum over u.
inline std::vector<std::size_t> block_offsets(const PosetSheaf& sh, const std::vector<int>& u, int k) {
  std::vector<std::size_t> off(u.size() + 1, 0);
  for (std::size_t t = 0; t < u.size(); ++t) off[t + 1] = off[t] + sh.stalks[u[t]].dim(k);
  return off;
}

// Compatibility equations r_xy(s_y) - s_x = 0 over the covers inside u, in degree k.
inline Echelon section_equations(const PosetSheaf& sh, const std::vector<int>& u, int k) {
  auto off = block_offsets(sh, u, k);
  std::map<int, std::size_t> pos;
  for (std::size_t t = 0; t < u.size(); ++t) pos[u[t]] = t;
  Echelon eq(off.back());
  for (std::size_t t = 0; t < u.size(); ++t) {
    int y = u[t];
    for (int x : sh.poset->lower_covers(y)) {
      const SparseMatrix& r = sh.cover_map(x, y).deg[k];
      std::vector<SparseVec> rows(r.rows);
      for (std::size_t i = 0; i < r.rows; ++i) rows[i].emplace_back(static_cast<std::uint32_t>(off[pos.at(x)] + i), Rational(-1));
      for (std::size_t j = 0; j < r.cols; ++j)
        for (auto& [i, a] : r.columns[j]) rows[i].emplace_back(static_cast<std::uint32_t>(off[t] + j), a);
      for (auto& row : rows) eq.insert(row);
    }
  }
  return eq;
}

inline std::vector<int> checked_open(const PosetSheaf& sh, std::vector<int> u) {
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  if (!sh.poset->is_open(u)) throw std::invalid_argument("sections: set is not open");
  return u;
}

// Per-degree bases of the sections over u inside the direct sum of stalks,
// without the module structure.
struct SectionSpaces {
  std::vector<int> elements;
  std::vector<std::vector<std::size_t>> offset;
  std::vector<SubspaceBasis> basis;
};

inline SectionSpaces section_spaces(const PosetSheaf& sh, std::vector<int> u) {
  SectionSpaces s;
  s.elements = checked_open(sh, std::move(u));
  const int K = sh.D / 2;
  s.offset.assign(K + 1, {});
  s.basis.resize(K + 1);
  parallel_for(static_cast<std::size_t>(K + 1), [&](std::size_t kk) {
    int k = static_cast<int>(kk);
    Echelon eq = section_equations(sh, s.elements, k);
    eq.finalize();
    s.basis[k] = SubspaceBasis::kernel_of(eq);
    auto off = block_offsets(sh, s.elements, k);
    off.pop_back();
    s.offset[k] = off;
  });
  return s;
}

inline Sections sections(const PosetSheaf& sh, std::vector<int> u) {
  SectionSpaces sp = section_spaces(sh, std::move(u));
  Sections s;
  s.elements = sp.elements;
  s.offset = std::move(sp.offset);
  std::vector<const GradedModule*> parts;
  for (int x : s.elements) parts.push_back(&sh.stalks[x]);
  s.ambient = direct_sum(parts, sh.D, sh.ngens);
  s.sub = induced_submodule(s.ambient, std::move(sp.basis));
  return s;
}

// Dimensions only; no kernel basis or module structure.
inline std::vector<std::size_t> section_dims(const PosetSheaf& sh, std::vector<int> u) {
  u = checked_open(sh, std::move(u));
  std::vector<std::size_t> dims(sh.D / 2 + 1);
  parallel_for(dims.size(), [&](std::size_t k) {
    Echelon eq = section_equations(sh, u, static_cast<int>(k));
    dims[k] = eq.cols() - eq.rank();
  });
  return dims;
}

// ---------------------------------------------------------------------------
// Costalks, flabbiness, purity.

// Kernel of M(x) -> sections over the boundary of x.
inline Submodule costalk(const PosetSheaf& sh, int x) {
  const auto& covers = sh.poset->lower_covers(x);
  const GradedModule& m = sh.stalks[x];
  GradedMap stacked;
  for (int k = 0; k <= m.top(); ++k) {
    std::size_t rows = 0;
    for (int z : covers) rows += sh.stalks[z].dim(k);
    SparseMatrix a(rows, m.dim(k));
    for (std::size_t j = 0; j < m.dim(k); ++j) {
      SparseVec col;
      std::size_t off = 0;
      for (int z : covers) {
        for (auto& [i, v] : sh.cover_map(z, x).deg[k].columns[j]) col.emplace_back(static_cast<std::uint32_t>(i + off), v);
        off += sh.stalks[z].dim(k);
      }
      a.columns[j] = std::move(col);
    }
    stacked.deg.push_back(std::move(a));
  }
  return kernel(stacked, m);
}

// The boundary map M(y)_k -> ambient of sections over ∂y, one column per basis vector.
inline std::vector<SparseVec> boundary_images(const PosetSheaf& sh, int y, int k, const Sections& bd) {
  std::vector<SparseVec> out;
  for (std::size_t j = 0; j < sh.stalks[y].dim(k); ++j) {
    SparseVec s{{static_cast<std::uint32_t>(j), Rational(1)}};
    auto vals = sh.push_down(y, k, s, bd.elements);
    SparseVec amb;
    for (std::size_t t = 0; t < bd.elements.size(); ++t)
      for (auto& [i, a] : vals[bd.elements[t]]) amb.emplace_back(static_cast<std::uint32_t>(bd.offset[k][t] + i), a);
    out.push_back(std::move(amb));
  }
  return out;
}

struct FlabbinessReport {
  bool flabby = true;
  int element = -1;  // first failure
  int degree = -1;
};

inline FlabbinessReport check_flabby(const PosetSheaf& sh) {
  FlabbinessReport r;
  for (int y = 0; y < sh.poset->size() && r.flabby; ++y) {
    auto bd = sh.poset->boundary(y);
    if (bd.empty()) continue;
    // The image of M(y) lies in the sections, so comparing ranks decides surjectivity.
    std::vector<std::size_t> rank(sh.D / 2 + 1), dim(sh.D / 2 + 1);
    parallel_for(rank.size(), [&](std::size_t kk) {
      int k = static_cast<int>(kk);
      Echelon eq = section_equations(sh, bd, k);
      dim[k] = eq.cols() - eq.rank();
      auto off = block_offsets(sh, bd, k);
      Echelon e(eq.cols());
      for (std::size_t j = 0; j < sh.stalks[y].dim(k) && e.rank() < dim[k]; ++j) {
        auto vals = sh.push_down(y, k, {{static_cast<std::uint32_t>(j), Rational(1)}}, bd);
        SparseVec amb;
        for (std::size_t t = 0; t < bd.size(); ++t)
          for (auto& [i, a] : vals[bd[t]]) amb.emplace_back(static_cast<std::uint32_t>(off[t] + i), a);
        e.insert(amb);
      }
      rank[k] = e.rank();
    });
    for (int k = 0; k <= sh.D / 2; ++k)
      if (rank[k] != dim[k]) {
        r = {false, y, 2 * k};
        break;
      }
  }
  return r;
}

inline bool is_flabby(const PosetSheaf& sh) { return check_flabby(sh).flabby; }

// Stalk freeness over A(x), where the acting operators are the y_j.
inline std::vector<FreenessReport> stalk_freeness(const PosetSheaf& sh, const LinearPoset& lp) {
  std::vector<FreenessReport> out(sh.poset->size());
  for (int x = 0; x < sh.poset->size(); ++x)
    out[x] = is_free_over(sh.stalks[x], polynomial_ring_series(lp.rank(x), sh.D));
  return out;
}

inline bool is_pure(const PosetSheaf& sh, const LinearPoset& lp) {
  for (auto& f : stalk_freeness(sh, lp))
    if (!f.free) return false;
  return is_flabby(sh);
}

// ---------------------------------------------------------------------------
// Sheaf constructions.

inline PosetSheaf structure_sheaf(const LinearPoset& lp, int D) {
  PosetSheaf sh;
  sh.poset = std::make_shared<Poset>(lp.poset());
  sh.D = D;
  sh.ngens = lp.dim();
  std::vector<std::shared_ptr<const TruncatedRing>> rings(lp.size());
  parallel_for(lp.size(), [&](std::size_t x) { rings[x] = lp.ring(static_cast<int>(x), D); });
  for (int x = 0; x < lp.size(); ++x) sh.stalks.push_back(ring_module(rings[x], lp.y_generators()));
  for (int y = 0; y < lp.size(); ++y)
    for (int x : lp.poset().lower_covers(y))
      sh.covers[{x, y}] = GradedMap::from_ring_map(RingMap(rings[y], rings[x], lp.y_generators()));
  return sh;
}

struct MesResult {
  PosetSheaf sheaf;
  int support = -1;
  std::vector<MinimalGenerators> boundary_generators;  // per element: generators of sections over its boundary
};

// Minimal extension sheaf with support {y >= x}: L(x) = A(x), and each later
// L(y) is the free A(y)-module on lifts of minimal generators of the sections
// over the boundary.
inline MesResult build_mes(const LinearPoset& lp, int x, int D) {
  const Poset& P = lp.poset();
  MesResult res;
  res.support = x;
  PosetSheaf& sh = res.sheaf;
  sh.poset = std::make_shared<Poset>(P);
  sh.D = D;
  sh.ngens = lp.dim();
  const int K = D / 2;
  sh.stalks.assign(P.size(), GradedModule(D, lp.dim()));
  for (auto& m : sh.stalks) m.init_zero_actions();
  res.boundary_generators.resize(P.size());

  std::vector<char> in(P.size(), 0);
  for (int y : P.up_set(x)) in[y] = 1;
  auto ys = lp.y_generators();

  // Zero maps everywhere first; entries get replaced as stalks are built.
  auto set_zero_covers = [&](int y) {
    for (int z : P.lower_covers(y)) sh.covers[{z, y}] = GradedMap::zero(sh.stalks[y], sh.stalks[z]);
  };

  for (int y = 0; y < P.size(); ++y) {
    if (!in[y]) {
      set_zero_covers(y);
      continue;
    }
    auto ring = lp.ring(y, D);
    GradedModule a = ring_module(*ring, ys);
    if (y == x) {
      sh.stalks[y] = a;
      set_zero_covers(y);
      continue;
    }
    // Elements of the boundary outside the support carry zero stalks.
    Sections g = sections(sh, P.boundary(y));
    MinimalGenerators gens = min_generators(g.module());
    res.boundary_generators[y] = gens;

    // Generators sorted by degree; L(y)_k = sum over gens of A(y)_{k - deg g}.
    struct Gen {
      int deg;
      SparseVec lift;  // ambient section vector
    };
    std::vector<Gen> gl;
    for (int k = 0; k <= K; ++k)
      for (auto& l : gens.lifts[k]) gl.push_back({k, g.sub.inclusion[k].lift(l)});

    GradedModule m(D, lp.dim());
    std::vector<std::vector<std::size_t>> block(K + 1, std::vector<std::size_t>(gl.size(), 0));
    for (int k = 0; k <= K; ++k) {
      std::size_t off = 0;
      for (std::size_t t = 0; t < gl.size(); ++t) {
        block[k][t] = off;
        off += ring->dim(k - gl[t].deg);
      }
      m.dims[k] = off;
    }
    for (std::size_t j = 0; j < lp.dim(); ++j)
      for (int k = 0; k < K; ++k) {
        SparseMatrix act(m.dims[k + 1], m.dims[k]);
        for (std::size_t t = 0; t < gl.size(); ++t) {
          int kk = k - gl[t].deg;
          if (kk < 0) continue;
          const SparseMatrix& ra = a.act[j][kk];
          for (std::size_t c = 0; c < ring->dim(kk); ++c) {
            SparseVec col;
            for (auto& [i, v] : ra.columns[c]) col.emplace_back(static_cast<std::uint32_t>(block[k + 1][t] + i), v);
            act.columns[block[k][t] + c] = std::move(col);
          }
        }
        m.act[j].push_back(std::move(act));
      }
    sh.stalks[y] = std::move(m);

    // Restrictions to lower covers: (g, b) -> b * (lift of g at z).
    for (int z : P.lower_covers(y)) {
      GradedMap r = GradedMap::zero(sh.stalks[y], sh.stalks[z]);
      if (in[z]) {
        auto tpos = std::find(g.elements.begin(), g.elements.end(), z) - g.elements.begin();
        const GradedModule& lz = sh.stalks[z];
        for (std::size_t t = 0; t < gl.size(); ++t) {
          int d0 = gl[t].deg;
          std::size_t lo = g.offset[d0][tpos], hi = lo + lz.dim(d0);
          SparseVec base;
          for (auto& [i, v] : gl[t].lift)
            if (i >= lo && i < hi) base.emplace_back(static_cast<std::uint32_t>(i - lo), v);
          std::map<Monomial, SparseVec> memo{{0, base}};
          for (int k = d0; k <= K; ++k) {
            const auto& mons = ring->basis(k - d0);
            for (std::size_t c = 0; c < mons.size(); ++c) {
              Monomial mon = mons[c];
              if (!memo.count(mon)) {
                int v = mono_first_var(mon);
                Monomial rest = mon - mono_var(v);
                memo[mon] = lz.act[v][mono_degree(rest) + d0].apply(memo.at(rest));
              }
              r.deg[k].columns[block[k][t] + c] = memo[mon];
            }
          }
        }
      }
      sh.covers[{z, y}] = std::move(r);
    }
  }
  return res;
}

// Reduced boundary map at y: kernel dimensions of M̄(y) -> (sections over ∂y)‾ per degree.
inline std::vector<std::size_t> reduced_boundary_kernel(const PosetSheaf& sh, int y) {
  const GradedModule& m = sh.stalks[y];
  const int K = sh.D / 2;
  MinimalGenerators mbar = min_generators(m);
  std::vector<std::size_t> ker(K + 1, 0);
  auto bd = sh.poset->boundary(y);
  if (bd.empty()) return mbar.dims;
  Sections g = sections(sh, bd);
  for (int k = 0; k <= K; ++k) {
    // Rank of M(y)_k in Γ_k / (A_+ Γ)_k.
    Echelon aug = augmentation_image(g.module(), k);
    std::size_t base = aug.rank();
    for (auto& v : boundary_images(sh, y, k, g)) aug.insert(g.sub.inclusion[k].coords(v));
    std::size_t rk = aug.rank() - base;
    ker[k] = mbar.dims[k] - rk;
  }
  return ker;
}

struct Decomposition {
  std::vector<std::vector<std::size_t>> multiplicity;  // per element, per degree
  bool hilbert_identity = false;
  std::string failure;
};

// Multiplicities of the indecomposable summands of a pure sheaf.
inline Decomposition decompose_pure(const PosetSheaf& sh) {
  Decomposition d;
  d.multiplicity.resize(sh.poset->size());
  for (int y = 0; y < sh.poset->size(); ++y) d.multiplicity[y] = reduced_boundary_kernel(sh, y);
  return d;
}

// Certifies Hilb M(y) = sum_x sum_j mult_x[j] t^j Hilb L_x(y) for every y,
// building each L_x with nonzero multiplicity.
inline bool certify_decomposition(const PosetSheaf& sh, const LinearPoset& lp, Decomposition& d,
                                  std::map<int, MesResult>* cache = nullptr) {
  const int n = sh.poset->size();
  std::vector<HilbertSeries> predicted(n, HilbertSeries(sh.D, {}));
  std::map<int, MesResult> local;
  auto& mes = cache ? *cache : local;
  for (int x = 0; x < n; ++x) {
    bool any = false;
    for (auto m : d.multiplicity[x]) any = any || m;
    if (!any) continue;
    if (!mes.count(x)) mes.emplace(x, build_mes(lp, x, sh.D));
    const PosetSheaf& lx = mes.at(x).sheaf;
    for (int y = 0; y < n; ++y)
      for (std::size_t j = 0; j < d.multiplicity[x].size(); ++j) {
        if (!d.multiplicity[x][j]) continue;
        HilbertSeries term = lx.stalks[y].hilbert().shifted(static_cast<int>(j));
        for (auto& v : term.dims) v *= static_cast<long long>(d.multiplicity[x][j]);
        predicted[y] = predicted[y] + term;
      }
  }
  d.hilbert_identity = true;
  for (int y = 0; y < n; ++y)
    if (!(predicted[y] == sh.stalks[y].hilbert())) {
      d.hilbert_identity = false;
      d.failure = "Hilbert identity fails at " + sh.poset->name(y) + ": stalk " + sh.stalks[y].hilbert().str() +
                  " vs predicted " + predicted[y].str();
      break;
    }
  return d.hilbert_identity;
}

struct RigidityReport {
  bool rigid = true;
  std::vector<std::vector<int>> stalk_generators;    // degrees, per element
  std::vector<std::vector<int>> costalk_generators;  // degrees, per element
  int failure = -1;
};

// For each y other than the support element, some d separates the stalk
// generator degrees (<= d) from the costalk generator degrees (> d).
inline RigidityReport check_rigidity(const PosetSheaf& sh, int support) {
  RigidityReport r;
  const int n = sh.poset->size();
  r.stalk_generators.resize(n);
  r.costalk_generators.resize(n);
  for (int y = 0; y < n; ++y) {
    r.stalk_generators[y] = min_generators(sh.stalks[y]).degrees();
    r.costalk_generators[y] = min_generators(costalk(sh, y).module).degrees();
    if (y == support || sh.stalks[y].is_zero()) continue;
    const auto& s = r.stalk_generators[y];
    const auto& c = r.costalk_generators[y];
    if (!s.empty() && !c.empty() && *std::max_element(s.begin(), s.end()) >= *std::min_element(c.begin(), c.end())) {
      if (r.rigid) r.failure = y;
      r.rigid = false;
    }
  }
  return r;
}

// r_xy r_yz = r_xz on every chain x < y < z, and each cover map commutes with the action.
inline bool check_functorial(const PosetSheaf& sh) {
  for (auto& [key, f] : sh.covers)
    if (!f.commutes_with(sh.stalks[key.second], sh.stalks[key.first])) return false;
  const int n = sh.poset->size();
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) {
      if (!sh.poset->less(x, y)) continue;
      for (int z = y + 1; z < n; ++z) {
        if (!sh.poset->less(y, z)) continue;
        if (!(sh.restriction(x, y) * sh.restriction(y, z) == sh.restriction(x, z))) return false;
      }
    }
  return true;
}

}  // namespace hypic
