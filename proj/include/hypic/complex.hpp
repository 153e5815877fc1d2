#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace hypic {

// Subset of the hyperplane index set, one bit per index.
using IndexSet = std::uint32_t;
inline constexpr std::size_t kMaxHyperplanes = 32;

inline int set_size(IndexSet s) { return std::popcount(s); }
inline bool contains(IndexSet s, int i) { return (s >> i) & 1u; }
inline bool is_subset(IndexSet a, IndexSet b) { return (a & ~b) == 0; }
inline IndexSet full_set(std::size_t n) { return n >= 32 ? ~IndexSet{0} : ((IndexSet{1} << n) - 1); }

inline std::vector<int> members(IndexSet s) {
  std::vector<int> m;
  while (s) {
    int i = std::countr_zero(s);
    m.push_back(i);
    s &= s - 1;
  }
  return m;
}

inline IndexSet make_set(const std::vector<int>& m) {
  IndexSet s = 0;
  for (int i : m) s |= IndexSet{1} << i;
  return s;
}

// Orders sets by size, then lexicographically by sorted member list.
inline bool size_lex_less(IndexSet a, IndexSet b) {
  int sa = set_size(a), sb = set_size(b);
  if (sa != sb) return sa < sb;
  return members(a) < members(b);
}

inline std::string set_str(IndexSet s) {
  std::string r = "{";
  bool first = true;
  for (int i : members(s)) {
    if (!first) r += ",";
    r += std::to_string(i + 1);
    first = false;
  }
  return r + "}";
}

// Finite simplicial complex on {0..n-1}, kept both as its facets and as the
// full face list (ground sets here are small).
class SimplicialComplex {
 public:
  SimplicialComplex() : SimplicialComplex(0, {}) {}
  SimplicialComplex(std::size_t n, const std::vector<IndexSet>& generators) : n_(n) {
    if (n > kMaxHyperplanes) throw std::invalid_argument("SimplicialComplex: ground set too large");
    std::unordered_set<IndexSet> all{0};
    for (IndexSet g : generators) {
      if (!is_subset(g, full_set(n))) throw std::invalid_argument("SimplicialComplex: face outside ground set");
      if (all.count(g)) continue;
      // Enumerate all subsets of g.
      for (IndexSet s = g;; s = (s - 1) & g) {
        all.insert(s);
        if (s == 0) break;
      }
    }
    faces_.assign(all.begin(), all.end());
    std::sort(faces_.begin(), faces_.end(), size_lex_less);
    lookup_ = std::move(all);
    for (IndexSet f : faces_) {
      bool maximal = true;
      for (int i = 0; i < static_cast<int>(n) && maximal; ++i)
        if (!contains(f, i) && lookup_.count(f | (IndexSet{1} << i))) maximal = false;
      if (maximal) facets_.push_back(f);
    }
  }

  std::size_t ground() const { return n_; }
  bool contains_face(IndexSet s) const { return lookup_.count(s) > 0; }
  const std::vector<IndexSet>& faces() const { return faces_; }
  const std::vector<IndexSet>& facets() const { return facets_; }
  int dimension() const {
    int d = 0;
    for (IndexSet f : facets_) d = std::max(d, set_size(f));
    return d;
  }
  bool is_pure() const {
    for (IndexSet f : facets_)
      if (set_size(f) != dimension()) return false;
    return true;
  }
  // Faces contained in s.
  SimplicialComplex restricted(IndexSet s) const {
    std::vector<IndexSet> g;
    for (IndexSet f : faces_)
      if (is_subset(f, s)) g.push_back(f);
    return SimplicialComplex(n_, g);
  }
  friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
    return a.n_ == b.n_ && a.faces_ == b.faces_;
  }

 private:
  std::size_t n_;
  std::vector<IndexSet> faces_;
  std::vector<IndexSet> facets_;
  std::unordered_set<IndexSet> lookup_;
};

}  // namespace hypic
