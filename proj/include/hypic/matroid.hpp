#pragma once

#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "hypic/arrangement.hpp"
#include "hypic/graded.hpp"

namespace hypic {

// S is a face iff the normals indexed by S are linearly independent.
inline SimplicialComplex matroid_complex(const Arrangement& arr) {
  std::vector<IndexSet> indep;
  const IndexSet all = arr.ground();
  for (IndexSet s = 0;; s = (s - all) & all) {  // every subset, increasing
    if (arr.rank_of(s) == static_cast<std::size_t>(set_size(s))) indep.push_back(s);
    if (s == all) break;
  }
  return SimplicialComplex(arr.size(), indep);
}

// Inclusion-minimal non-faces.
inline std::vector<IndexSet> circuits(const SimplicialComplex& c) {
  std::vector<IndexSet> out;
  const IndexSet all = full_set(c.ground());
  for (IndexSet s = 0;; s = (s - all) & all) {
    if (s && !c.contains_face(s)) {
      bool minimal = true;
      for (int i : members(s))
        if (!c.contains_face(s & ~(IndexSet{1} << i))) {
          minimal = false;
          break;
        }
      if (minimal) out.push_back(s);
    }
    if (s == all) break;
  }
  std::sort(out.begin(), out.end(), size_lex_less);
  return out;
}

// sigma lists the ground set from smallest to largest.
inline std::vector<int> default_order(std::size_t n) {
  std::vector<int> s(n);
  std::iota(s.begin(), s.end(), 0);
  return s;
}

inline void check_order(const std::vector<int>& sigma, std::size_t n) {
  std::vector<int> sorted = sigma;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != default_order(n)) throw std::invalid_argument("ordering must be a permutation of the index set");
}

inline std::vector<IndexSet> broken_circuits(const SimplicialComplex& c, const std::vector<int>& sigma) {
  check_order(sigma, c.ground());
  std::vector<IndexSet> out;
  for (IndexSet circ : circuits(c)) {
    for (int i : sigma)
      if (contains(circ, i)) {
        out.push_back(circ & ~(IndexSet{1} << i));
        break;
      }
  }
  return out;
}

inline SimplicialComplex broken_circuit_complex(const SimplicialComplex& c, const std::vector<int>& sigma) {
  auto bcs = broken_circuits(c, sigma);
  std::vector<IndexSet> keep;
  for (IndexSet f : c.faces()) {
    bool ok = true;
    for (IndexSet b : bcs)
      if (is_subset(b, f)) {
        ok = false;
        break;
      }
    if (ok) keep.push_back(f);
  }
  return SimplicialComplex(c.ground(), keep);
}

inline std::vector<long long> f_vector(const SimplicialComplex& c) {
  std::vector<long long> f(c.dimension() + 1, 0);
  for (IndexSet s : c.faces()) ++f[set_size(s)];
  return f;
}

// h(q) = sum_k f_k q^k (1-q)^(d-k), coefficients of q^0..q^d.
inline std::vector<long long> h_from_f(const std::vector<long long>& f, int d) {
  std::vector<long long> h(d + 1, 0);
  for (int k = 0; k < static_cast<int>(f.size()) && k <= d; ++k)
    for (int j = 0; j <= d - k; ++j) h[k + j] += f[k] * binomial(d - k, j) * (j % 2 ? -1 : 1);
  return h;
}

inline std::vector<long long> h_polynomial(const SimplicialComplex& c, int d) {
  if (!c.is_pure() || c.dimension() != d)
    throw std::invalid_argument("h_polynomial: complex is not pure of dimension " + std::to_string(d));
  return h_from_f(f_vector(c), d);
}

inline std::vector<long long> trim(std::vector<long long> p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
  return p;
}

// Combinatorial simplification: the matroid complex together with the closure map.
struct Simplification {
  SimplicialComplex faces;
  std::map<IndexSet, IndexSet> pi;
};

inline Simplification simplify(const Arrangement& arr) {
  Simplification s{matroid_complex(arr), {}};
  for (IndexSet f : s.faces.faces()) s.pi[f] = arr.closure(f);
  return s;
}

// The linear dependence among the normals of a circuit, as a primitive integer
// vector indexed by the circuit's members with first nonzero entry positive.
inline std::vector<Rational> circuit_coefficients(const Arrangement& arr, IndexSet circ) {
  QMatrix m = arr.normal_matrix(circ).transpose();
  QMatrix k = kernel_basis(m);
  if (k.cols() != 1) throw std::logic_error("circuit_coefficients: not a circuit");
  return primitive_integer(k.col(0));
}

}  // namespace hypic
