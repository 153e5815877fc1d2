#pragma once

// Brute-force reference computations kept apart from the library on purpose:
// they use their own elimination and subset enumeration so that agreement
// with the library means something.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypic/rational.hpp"

namespace oracle {

using hypic::Rational;
using Row = std::vector<Rational>;

inline int rank_of(std::vector<Row> m) {
  int r = 0;
  const int cols = m.empty() ? 0 : static_cast<int>(m[0].size());
  for (int c = 0; c < cols && r < static_cast<int>(m.size()); ++c) {
    int p = -1;
    for (int i = r; i < static_cast<int>(m.size()); ++i)
      if (!m[i][c].is_zero()) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(m[p], m[r]);
    for (int i = 0; i < static_cast<int>(m.size()); ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      Rational f = m[i][c] / m[r][c];
      for (int j = c; j < cols; ++j) m[i][j] = m[i][j] - f * m[r][j];
    }
    ++r;
  }
  return r;
}

inline int subset_rank(const std::vector<Row>& normals, std::uint32_t s) {
  std::vector<Row> rows;
  for (std::size_t i = 0; i < normals.size(); ++i)
    if (s >> i & 1u) rows.push_back(normals[i]);
  return rank_of(rows);
}

inline int popcount(std::uint32_t s) { return __builtin_popcount(s); }

// Subsets of the ground set with no broken circuit, grouped by size.
inline std::vector<long long> nbc_counts(const std::vector<Row>& normals, const std::vector<int>& sigma) {
  const std::size_t n = normals.size();
  const std::uint32_t all = (std::uint32_t{1} << n) - 1;
  std::vector<int> pos(n);
  for (std::size_t t = 0; t < n; ++t) pos[sigma[t]] = static_cast<int>(t);
  std::vector<std::uint32_t> broken;
  for (std::uint32_t c = 1; c <= all; ++c) {
    if (subset_rank(normals, c) == popcount(c)) continue;
    bool minimal = true;
    for (std::size_t i = 0; i < n && minimal; ++i)
      if (c >> i & 1u)
        if (subset_rank(normals, c & ~(std::uint32_t{1} << i)) != popcount(c) - 1) minimal = false;
    if (!minimal) continue;
    int lo = -1;
    for (std::size_t i = 0; i < n; ++i)
      if ((c >> i & 1u) && (lo < 0 || pos[i] < pos[lo])) lo = static_cast<int>(i);
    broken.push_back(c & ~(std::uint32_t{1} << lo));
  }
  std::vector<long long> f(n + 1, 0);
  for (std::uint32_t s = 0; s <= all; ++s) {
    if (subset_rank(normals, s) != popcount(s)) continue;
    bool ok = true;
    for (auto b : broken)
      if ((b & ~s) == 0) ok = false;
    if (ok) ++f[popcount(s)];
  }
  while (f.size() > 1 && f.back() == 0) f.pop_back();
  return f;
}

inline long long choose(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// h(q) from f by expanding sum_k f_k q^k (1 - q)^(d - k), trailing zeros dropped.
inline std::vector<long long> h_of(const std::vector<long long>& f, int d) {
  std::vector<long long> h(d + 1, 0);
  for (int k = 0; k < static_cast<int>(f.size()); ++k)
    for (int j = 0; j <= d - k; ++j) h[k + j] += f[k] * choose(d - k, j) * ((j & 1) ? -1 : 1);
  while (h.size() > 1 && h.back() == 0) h.pop_back();
  return h;
}

// Hilbert dims (in polynomial degree) of sum_k f_k (t/(1-t))^k up to degree K.
inline std::vector<long long> face_ring_dims(const std::vector<long long>& f, int K) {
  std::vector<long long> dims(K + 1, 0);
  for (int m = 0; m <= K; ++m)
    for (int k = 0; k < static_cast<int>(f.size()); ++k) {
      if (k == 0) {
        dims[m] += m == 0 ? f[0] : 0;
        continue;
      }
      // coefficient of t^m in t^k/(1-t)^k is C(m-1, k-1)
      if (m >= k) dims[m] += f[k] * choose(m - 1, k - 1);
    }
  return dims;
}

// Random integer normals with entries in [-2, 2] spanning Q^d.
inline std::vector<Row> random_normals(std::mt19937& rng, int d, int n) {
  std::uniform_int_distribution<int> coef(-2, 2);
  for (;;) {
    std::vector<Row> rows;
    for (int i = 0; i < n; ++i) {
      Row r;
      bool nonzero = false;
      for (int j = 0; j < d; ++j) {
        int c = coef(rng);
        nonzero = nonzero || c;
        r.push_back(Rational(c));
      }
      if (!nonzero) r[rng() % d] = Rational(1);
      rows.push_back(r);
    }
    if (rank_of(rows) == d) return rows;
  }
}


// Flats by definition: feasible subsets S with no i outside S whose augmented
// row (u_i, b_i) lies in the span of those of S.
inline std::vector<std::uint32_t> flats_brute(const std::vector<Row>& normals, const Row& offsets) {
  const std::size_t n = normals.size();
  std::vector<Row> aug;
  for (std::size_t i = 0; i < n; ++i) {
    Row r = normals[i];
    r.push_back(offsets[i]);
    aug.push_back(r);
  }
  auto arank = [&](std::uint32_t s) { return subset_rank(aug, s); };
  std::vector<std::uint32_t> out;
  const std::uint32_t all = (std::uint32_t{1} << n) - 1;
  for (std::uint32_t s = 0; s <= all; ++s) {
    if (arank(s) != subset_rank(normals, s)) continue;
    bool closed = true;
    for (std::size_t i = 0; i < n && closed; ++i)
      if (!(s >> i & 1u) && arank(s | (std::uint32_t{1} << i)) == arank(s)) closed = false;
    if (closed) out.push_back(s);
  }
  return out;
}

// Flats by sampling: a random point of each nonempty intersection H_S, and
// the set of hyperplanes through it. Sorted and deduplicated.
inline std::vector<std::uint32_t> flats_by_points(const std::vector<Row>& normals, const Row& offsets, std::mt19937& rng) {
  const std::size_t n = normals.size();
  const std::size_t d = n ? normals[0].size() : 0;
  std::uniform_int_distribution<int> coef(-997, 997);
  std::vector<std::uint32_t> out;
  const std::uint32_t all = (std::uint32_t{1} << n) - 1;
  for (std::uint32_t s = 0; s <= all; ++s) {
    // Reduced row echelon form of [U_S | b_S].
    std::vector<Row> m;
    for (std::size_t i = 0; i < n; ++i)
      if (s >> i & 1u) {
        Row r = normals[i];
        r.push_back(offsets[i]);
        m.push_back(r);
      }
    std::vector<int> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < d && r < m.size(); ++c) {
      std::size_t p = r;
      while (p < m.size() && m[p][c].is_zero()) ++p;
      if (p == m.size()) continue;
      std::swap(m[p], m[r]);
      Rational inv = Rational(1) / m[r][c];
      for (auto& x : m[r]) x = x * inv;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (i == r || m[i][c].is_zero()) continue;
        Rational f = m[i][c];
        for (std::size_t j = 0; j <= d; ++j) m[i][j] = m[i][j] - f * m[r][j];
      }
      pivot_col.push_back(static_cast<int>(c));
      ++r;
    }
    bool consistent = true;
    for (std::size_t i = r; i < m.size(); ++i)
      if (!m[i][d].is_zero()) consistent = false;
    if (!consistent) continue;
    // Free coordinates random, pivot coordinates solved.
    Row pt(d);
    std::vector<char> is_pivot(d, 0);
    for (int c : pivot_col) is_pivot[c] = 1;
    for (std::size_t c = 0; c < d; ++c)
      if (!is_pivot[c]) pt[c] = Rational(coef(rng));
    for (std::size_t i = 0; i < r; ++i) {
      Rational v = m[i][d];
      for (std::size_t c = 0; c < d; ++c)
        if (!is_pivot[c]) v = v - m[i][c] * pt[c];
      pt[pivot_col[i]] = v;
    }
    std::uint32_t through = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Rational v;
      for (std::size_t c = 0; c < d; ++c) v = v + normals[i][c] * pt[c];
      if (v == offsets[i]) through |= std::uint32_t{1} << i;
    }
    out.push_back(through);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

using IMat = std::vector<std::vector<long long>>;

inline long long as_ll(const Rational& x) {
  if (!x.is_integer()) throw std::invalid_argument("oracle: integral input expected");
  return std::stoll(x.str());
}

// Smith normal form by elementary operations. Returns the nonzero invariant
// factors; if left is given it receives P with M = P * D * Q^{-1}.
inline std::vector<long long> smith(IMat m, IMat* left = nullptr) {
  const std::size_t R = m.size(), C = R ? m[0].size() : 0;
  IMat P(R, std::vector<long long>(R, 0));
  for (std::size_t i = 0; i < R; ++i) P[i][i] = 1;
  // row op "row i += c * row j" is undone on P by "col j -= c * col i"
  auto add_row = [&](std::size_t i, std::size_t j, long long c) {
    for (std::size_t k = 0; k < C; ++k) m[i][k] += c * m[j][k];
    for (std::size_t k = 0; k < R; ++k) P[k][j] -= c * P[k][i];
  };
  auto swap_rows = [&](std::size_t i, std::size_t j) {
    std::swap(m[i], m[j]);
    for (std::size_t k = 0; k < R; ++k) std::swap(P[k][i], P[k][j]);
  };
  auto add_col = [&](std::size_t i, std::size_t j, long long c) {
    for (std::size_t k = 0; k < R; ++k) m[k][i] += c * m[k][j];
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < R; ++k) std::swap(m[k][i], m[k][j]);
  };
  std::vector<long long> diag;
  for (std::size_t t = 0; t < std::min(R, C); ++t) {
    // smallest nonzero entry of the remaining block as pivot
    for (;;) {
      std::size_t pi = R, pj = C;
      for (std::size_t i = t; i < R; ++i)
        for (std::size_t j = t; j < C; ++j)
          if (m[i][j] != 0 && (pi == R || std::llabs(m[i][j]) < std::llabs(m[pi][pj]))) {
            pi = i;
            pj = j;
          }
      if (pi == R) {
        if (left) *left = P;
        return diag;
      }
      swap_rows(t, pi);
      swap_cols(t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < R; ++i)
        if (m[i][t]) {
          add_row(i, t, -(m[i][t] / m[t][t]));
          clean = clean && m[i][t] == 0;
        }
      for (std::size_t j = t + 1; j < C; ++j)
        if (m[t][j]) {
          add_col(j, t, -(m[t][j] / m[t][t]));
          clean = clean && m[t][j] == 0;
        }
      if (!clean) continue;
      // the pivot must divide the rest of the block
      std::size_t bad = R;
      for (std::size_t i = t + 1; i < R && bad == R; ++i)
        for (std::size_t j = t + 1; j < C; ++j)
          if (m[i][j] % m[t][t] != 0) {
            bad = i;
            break;
          }
      if (bad == R) break;
      add_row(t, bad, 1);
    }
    diag.push_back(std::llabs(m[t][t]));
  }
  if (left) *left = P;
  return diag;
}

// No cotorsion: every projection of V_0 ∩ Z^I to Z^S has saturated image.
// Integral rows (u_i, b_i) are first scaled to be primitive.
inline bool cotorsion_free(const std::vector<Row>& normals, const Row& offsets) {
  const std::size_t n = normals.size(), d = n ? normals[0].size() : 0;
  IMat U(n, std::vector<long long>(d));
  for (std::size_t i = 0; i < n; ++i) {
    long long g = 0;
    for (std::size_t j = 0; j <= d; ++j) {
      const Rational& x = j < d ? normals[i][j] : offsets[i];
      g = std::gcd(g, std::llabs(as_ll(x)));
    }
    for (std::size_t j = 0; j < d; ++j) U[i][j] = as_ll(normals[i][j]) / g;
  }
  IMat P;
  auto diag = smith(U, &P);
  const std::size_t r = diag.size();
  // V_0 ∩ Z^I is spanned by the first r columns of P.
  for (std::uint32_t s = 1; s < (std::uint32_t{1} << n); ++s) {
    IMat B;
    for (std::size_t i = 0; i < n; ++i)
      if (s >> i & 1u) B.emplace_back(P[i].begin(), P[i].begin() + r);
    for (long long x : smith(B))
      if (x != 1) return false;
  }
  return true;
}

}  // namespace oracle
