#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "hypic/complex.hpp"
#include "hypic/linalg.hpp"

namespace hypic {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Hyperplanes H_i = {v in Q^d : <u_i, v> = b_i}. The normals are the
// coordinate functions x_i restricted to V_0 in the chosen chart.
struct Arrangement {
  std::size_t d = 0;
  std::vector<Vec> normals;
  Vec offsets;
  std::vector<std::string> labels;
  // Index of each hyperplane in the arrangement this one was derived from.
  std::vector<int> origin;

  std::size_t size() const { return normals.size(); }
  IndexSet ground() const { return full_set(size()); }

  bool is_central() const {
    return std::all_of(offsets.begin(), offsets.end(), [](const Rational& b) { return b.is_zero(); });
  }

  static Arrangement make(std::vector<Vec> normals, Vec offsets = {}, std::vector<std::string> labels = {}) {
    Arrangement a;
    a.d = normals.empty() ? 0 : normals.front().size();
    if (offsets.empty()) offsets.assign(normals.size(), Rational());
    if (offsets.size() != normals.size()) throw InputError("arrangement: one offset per hyperplane required");
    if (normals.size() > kMaxHyperplanes)
      throw InputError("arrangement: at most " + std::to_string(kMaxHyperplanes) + " hyperplanes supported");
    for (std::size_t i = 0; i < normals.size(); ++i) {
      if (normals[i].size() != a.d) throw InputError("arrangement: normal " + std::to_string(i + 1) + " has wrong length");
      if (std::all_of(normals[i].begin(), normals[i].end(), [](const Rational& x) { return x.is_zero(); }))
        throw InputError("arrangement: normal " + std::to_string(i + 1) + " is zero");
    }
    a.normals = std::move(normals);
    a.offsets = std::move(offsets);
    if (labels.empty())
      for (std::size_t i = 0; i < a.normals.size(); ++i) labels.push_back(std::to_string(i + 1));
    if (labels.size() != a.normals.size()) throw InputError("arrangement: one label per hyperplane required");
    a.labels = std::move(labels);
    for (std::size_t i = 0; i < a.normals.size(); ++i) a.origin.push_back(static_cast<int>(i));
    if (a.d > 0 && hypic::rank(a.normal_matrix(a.ground())) != a.d)
      throw InputError("arrangement: normals do not span the dual space");
    return a;
  }

  // Rows u_i for i in s.
  QMatrix normal_matrix(IndexSet s) const {
    std::vector<Vec> rows;
    for (int i : members(s)) rows.push_back(normals[i]);
    return QMatrix::from_rows(rows, d);
  }

  std::size_t rank_of(IndexSet s) const { return s ? hypic::rank(normal_matrix(s)) : 0; }

  bool feasible(IndexSet s) const {
    if (!s) return true;
    Vec b;
    for (int i : members(s)) b.push_back(offsets[i]);
    return solve(normal_matrix(s), b).has_value();
  }

  // {i : H_i contains H_s}; s must be feasible.
  IndexSet closure(IndexSet s) const {
    Echelon e(d + 1);
    auto aug = [&](int i) {
      Vec r = normals[i];
      r.push_back(offsets[i]);
      return to_sparse(r);
    };
    for (int i : members(s)) e.insert(aug(i));
    IndexSet c = 0;
    for (std::size_t i = 0; i < size(); ++i)
      if (e.contains(aug(static_cast<int>(i)))) c |= IndexSet{1} << i;
    return c;
  }

  // Basis of <s> = {v : <u_i, v> = 0 for i in s}, as vectors in Q^d.
  std::vector<Vec> annihilator(IndexSet s) const {
    if (!s) {
      std::vector<Vec> basis;
      for (std::size_t j = 0; j < d; ++j) {
        Vec v(d);
        v[j] = 1;
        basis.push_back(v);
      }
      return basis;
    }
    QMatrix k = kernel_basis(normal_matrix(s));
    std::vector<Vec> basis;
    for (std::size_t j = 0; j < k.cols(); ++j) basis.push_back(k.col(j));
    return basis;
  }

  // First independent subset of s in index order.
  std::vector<int> greedy_basis(IndexSet s) const {
    Echelon e(d);
    std::vector<int> b;
    for (int i : members(s))
      if (e.insert(to_sparse(normals[i]))) b.push_back(i);
    return b;
  }
};

class FlatLattice {
 public:
  FlatLattice() = default;
  explicit FlatLattice(const Arrangement& arr) : d_(arr.d), normals_(arr.normals) {
    // Breadth-first closure from the closure of the empty set.
    IndexSet bottom = arr.closure(0);
    if (bottom != 0) throw InputError("arrangement: some hyperplane contains the whole space");
    std::unordered_map<IndexSet, int> seen{{bottom, 0}};
    std::deque<IndexSet> queue{bottom};
    std::vector<IndexSet> found{bottom};
    while (!queue.empty()) {
      IndexSet f = queue.front();
      queue.pop_front();
      for (std::size_t i = 0; i < arr.size(); ++i) {
        if (contains(f, static_cast<int>(i))) continue;
        IndexSet s = f | (IndexSet{1} << i);
        if (!arr.feasible(s)) continue;
        IndexSet g = arr.closure(s);
        if (seen.emplace(g, 0).second) {
          queue.push_back(g);
          found.push_back(g);
        }
      }
    }
    std::vector<std::pair<int, IndexSet>> ranked;
    for (IndexSet f : found) ranked.emplace_back(static_cast<int>(arr.rank_of(f)), f);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return members(a.second) < members(b.second);
    });
    for (auto& [r, f] : ranked) {
      index_[f] = static_cast<int>(flats_.size());
      flats_.push_back(f);
      rank_.push_back(r);
      basis_.push_back(arr.greedy_basis(f));
      annihilator_.push_back(arr.annihilator(f));
    }
    const int N = size();
    below_.assign(N, {});
    above_.assign(N, {});
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        if (a != b && leq(a, b)) {
          bool cover = true;
          for (int c = 0; c < N && cover; ++c)
            if (c != a && c != b && leq(a, c) && leq(c, b)) cover = false;
          if (cover) {
            below_[b].push_back(a);
            above_[a].push_back(b);
          }
        }
  }

  int size() const { return static_cast<int>(flats_.size()); }
  std::size_t dim() const { return d_; }
  IndexSet flat(int x) const { return flats_[x]; }
  const std::vector<IndexSet>& flats() const { return flats_; }
  int rank(int x) const { return rank_[x]; }
  bool leq(int a, int b) const { return is_subset(flats_[a], flats_[b]); }
  int find(IndexSet s) const {
    auto it = index_.find(s);
    return it == index_.end() ? -1 : it->second;
  }
  const std::vector<int>& lower_covers(int x) const { return below_[x]; }
  const std::vector<int>& upper_covers(int x) const { return above_[x]; }
  int max_rank() const { return rank_.empty() ? 0 : *std::max_element(rank_.begin(), rank_.end()); }
  // Basis of <F> in Q^d.
  const std::vector<Vec>& annihilator(int x) const { return annihilator_[x]; }
  // Independent normals indexing coordinates on V(F).
  const std::vector<int>& coordinate_basis(int x) const { return basis_[x]; }

  // V(F) -> V(E) for E <= F, in the coordinates v -> (<u_b, v>)_{b in basis}.
  QMatrix vf_quotient(int E, int F) const {
    if (!leq(E, F)) throw std::invalid_argument("vf_quotient: E must lie below F");
    const auto& bf = basis_[F];
    const auto& be = basis_[E];
    QMatrix uf(d_, bf.size());
    for (std::size_t t = 0; t < bf.size(); ++t)
      for (std::size_t j = 0; j < d_; ++j) uf(j, t) = normals_[bf[t]][j];
    QMatrix q(be.size(), bf.size());
    for (std::size_t s = 0; s < be.size(); ++s) {
      auto c = solve(uf, normals_[be[s]]);
      if (!c) throw std::logic_error("vf_quotient: normal outside the span of the basis");
      for (std::size_t t = 0; t < bf.size(); ++t) q(s, t) = (*c)[t];
    }
    return q;
  }

 private:
  std::size_t d_ = 0;
  std::vector<Vec> normals_;
  std::vector<IndexSet> flats_;
  std::vector<int> rank_;
  std::unordered_map<IndexSet, int> index_;
  std::vector<std::vector<int>> below_, above_;
  std::vector<std::vector<int>> basis_;
  std::vector<std::vector<Vec>> annihilator_;
};

inline FlatLattice build_flats(const Arrangement& arr) { return FlatLattice(arr); }

inline void require_flat(const Arrangement& arr, IndexSet f) {
  if (!is_subset(f, arr.ground()) || !arr.feasible(f) || arr.closure(f) != f)
    throw std::invalid_argument("not a flat: " + set_str(f));
}

// Arrangement induced on H_F, indexed by the hyperplanes outside F that meet it.
inline Arrangement restriction(const Arrangement& arr, IndexSet f) {
  require_flat(arr, f);
  Vec b;
  for (int i : members(f)) b.push_back(arr.offsets[i]);
  Vec v0(arr.d);
  QMatrix chart = QMatrix::identity(arr.d);
  if (f) {
    v0 = *solve(arr.normal_matrix(f), b);
    chart = kernel_basis(arr.normal_matrix(f));
  }
  Arrangement r;
  r.d = chart.cols();
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (contains(f, static_cast<int>(i))) continue;
    Vec u(r.d);
    for (std::size_t t = 0; t < r.d; ++t)
      for (std::size_t j = 0; j < arr.d; ++j) u[t] += arr.normals[i][j] * chart(j, t);
    if (std::all_of(u.begin(), u.end(), [](const Rational& x) { return x.is_zero(); })) continue;  // parallel
    Rational off = arr.offsets[i];
    for (std::size_t j = 0; j < arr.d; ++j) off -= arr.normals[i][j] * v0[j];
    r.normals.push_back(u);
    r.offsets.push_back(off);
    r.labels.push_back(arr.labels[i]);
    r.origin.push_back(static_cast<int>(i));
  }
  return r;
}

// Central arrangement on V(F) with index set F.
inline Arrangement localization(const Arrangement& arr, IndexSet f) {
  require_flat(arr, f);
  std::vector<int> basis = arr.greedy_basis(f);
  QMatrix ub(arr.d, basis.size());
  for (std::size_t t = 0; t < basis.size(); ++t)
    for (std::size_t j = 0; j < arr.d; ++j) ub(j, t) = arr.normals[basis[t]][j];
  Arrangement r;
  r.d = basis.size();
  for (int i : members(f)) {
    r.normals.push_back(*solve(ub, arr.normals[i]));
    r.offsets.push_back(Rational());
    r.labels.push_back(arr.labels[i]);
    r.origin.push_back(i);
  }
  return r;
}

inline bool is_simple(const Arrangement& arr, const FlatLattice& lat) {
  for (int x = 0; x < lat.size(); ++x)
    if (set_size(lat.flat(x)) != lat.rank(x)) return false;
  (void)arr;
  return true;
}
inline bool is_simple(const Arrangement& arr) { return is_simple(arr, build_flats(arr)); }
inline bool is_central(const Arrangement& arr) { return arr.is_central(); }

// Lattice basis (rows) of V_0 ∩ Z^I after scaling each equation (u_i, b_i) to
// a primitive integer vector.
inline QMatrix lattice_basis(const Arrangement& arr) {
  const std::size_t n = arr.size();
  QMatrix u(n, arr.d);
  for (std::size_t i = 0; i < n; ++i) {
    Vec row = arr.normals[i];
    row.push_back(arr.offsets[i]);
    Vec p = primitive_integer(row, true);
    for (std::size_t j = 0; j < arr.d; ++j) u(i, j) = p[j];
  }
  if (n == 0) return QMatrix(0, 0);
  // V_0 is the column space of u; saturate via the kernel of its left kernel.
  QMatrix left = integer_kernel(u.transpose());
  if (left.rows() == 0) return QMatrix::identity(n);
  return integer_kernel(left);
}

inline void for_each_subset_of_size(std::size_t n, std::size_t k, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = static_cast<int>(i);
  if (k > n) return;
  for (;;) {
    f(idx);
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && idx[i] == static_cast<int>(n - k + i)) --i;
    if (i < 0) return;
    ++idx[i];
    for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline bool is_unimodular(const Arrangement& arr) {
  QMatrix b = lattice_basis(arr);
  const std::size_t r = b.rows(), n = b.cols();
  bool ok = true;
  for_each_subset_of_size(n, r, [&](const std::vector<int>& cols) {
    if (!ok) return;
    QMatrix m(r, r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) m(i, j) = b(i, cols[j]);
    Rational det = abs(determinant(m));
    if (!det.is_zero() && !det.is_one()) ok = false;
  });
  return ok;
}

}  // namespace hypic
