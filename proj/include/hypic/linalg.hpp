#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hypic/rational.hpp"

namespace hypic {

using Vec = std::vector<Rational>;

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  QMatrix(std::initializer_list<std::initializer_list<Rational>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    a_.reserve(rows_ * cols_);
    for (auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("QMatrix: ragged initializer");
      for (auto& x : row) a_.push_back(x);
    }
  }
  static QMatrix from_rows(const std::vector<Vec>& rows, std::size_t cols) {
    QMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw std::invalid_argument("QMatrix: ragged rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }
  static QMatrix identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Vec row(std::size_t i) const { return Vec(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_); }
  Vec col(std::size_t j) const {
    Vec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  QMatrix transpose() const {
    QMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("QMatrix: shape mismatch in product");
    QMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& x = a(i, k);
        if (x.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!b(k, j).is_zero()) c(i, j) += x * b(k, j);
      }
    return c;
  }
  friend Vec operator*(const QMatrix& a, const Vec& v) {
    if (a.cols_ != v.size()) throw std::invalid_argument("QMatrix: shape mismatch in product");
    Vec r(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j)
        if (!a(i, j).is_zero() && !v[j].is_zero()) r[i] += a(i, j) * v[j];
    return r;
  }
  friend bool operator==(const QMatrix& a, const QMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }
  bool is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Rational& x) { return x.is_zero(); });
  }

  std::string str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      os << (i ? ",[" : "[");
      for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
      os << "]";
    }
    os << "]";
    return os.str();
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

struct RrefResult {
  QMatrix reduced;
  std::vector<std::size_t> pivots;
};

// Reduced row echelon form. The pivot in each column is the first row (from the
// current position down) holding a nonzero entry, so results are reproducible.
inline RrefResult rref(QMatrix m) {
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Rational inv = m(r, c).inverse();
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      Rational f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    piv.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(piv)};
}

inline std::size_t rank(const QMatrix& m) { return rref(m).pivots.size(); }

// Columns form a basis of {x : m x = 0}; one basis vector per free column.
inline QMatrix kernel_basis(const QMatrix& m) {
  auto [r, piv] = rref(m);
  std::vector<bool> is_piv(m.cols(), false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<std::size_t> freec;
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!is_piv[j]) freec.push_back(j);
  QMatrix k(m.cols(), freec.size());
  for (std::size_t t = 0; t < freec.size(); ++t) {
    k(freec[t], t) = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) k(piv[i], t) = -r(i, freec[t]);
  }
  return k;
}

inline std::optional<Vec> solve(const QMatrix& m, const Vec& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve: right-hand side has wrong length");
  QMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  auto [r, piv] = rref(aug);
  if (!piv.empty() && piv.back() == m.cols()) return std::nullopt;
  Vec x(m.cols());
  for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = r(i, m.cols());
  return x;
}

inline Rational determinant(QMatrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
  std::size_t n = m.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c).is_zero()) ++p;
    if (p == n) return Rational();
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    Rational inv = m(c, c).inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      Rational f = m(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

namespace detail {

inline void require_integral(const QMatrix& m, const char* who) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_integer()) throw std::invalid_argument(std::string(who) + ": entries must be integers");
}

// Integer row echelon on the first `ncols` columns using unimodular row
// operations applied to whole rows. Returns the number of pivot rows; rows past
// that are zero on the first `ncols` columns.
inline std::size_t integer_echelon(std::vector<Vec>& rows, std::size_t ncols, bool reduce_above) {
  std::size_t r = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pivots;
  for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i)
        if (!rows[i][c].is_zero() && (best == rows.size() || abs(rows[i][c]) < abs(rows[best][c]))) best = i;
      if (best == rows.size()) break;
      std::swap(rows[r], rows[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][c].is_zero()) continue;
        Rational q = Rational::floor_div(rows[i][c], rows[r][c]);
        for (std::size_t j = 0; j < rows[i].size(); ++j)
          if (!rows[r][j].is_zero()) rows[i][j] -= q * rows[r][j];
        if (!rows[i][c].is_zero()) done = false;
      }
      if (done) break;
    }
    if (r < rows.size() && !rows[r][c].is_zero()) {
      if (rows[r][c].sign() < 0)
        for (auto& x : rows[r]) x = -x;
      pivots.push_back({r, c});
      ++r;
    }
  }
  if (reduce_above) {
    for (auto [pr, pc] : pivots)
      for (std::size_t i = 0; i < pr; ++i) {
        Rational q = Rational::floor_div(rows[i][pc], rows[pr][pc]);
        if (q.is_zero()) continue;
        for (std::size_t j = 0; j < rows[i].size(); ++j)
          if (!rows[pr][j].is_zero()) rows[i][j] -= q * rows[pr][j];
      }
  }
  return r;
}

}  // namespace detail

// Hermite normal form of the integer row space; zero rows dropped.
inline QMatrix hermite_lattice_basis(const QMatrix& m) {
  detail::require_integral(m, "hermite_lattice_basis");
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
  std::size_t r = detail::integer_echelon(rows, m.cols(), true);
  rows.resize(r);
  return QMatrix::from_rows(rows, m.cols());
}

// Rows form a Z-basis of {x in Z^n : m x = 0}.
inline QMatrix integer_kernel(const QMatrix& m) {
  detail::require_integral(m, "integer_kernel");
  std::size_t n = m.cols(), k = m.rows();
  std::vector<Vec> rows(n, Vec(k + n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < k; ++i) rows[j][i] = m(i, j);
    rows[j][k + j] = 1;
  }
  std::size_t r = detail::integer_echelon(rows, k, false);
  std::vector<Vec> ker;
  for (std::size_t j = r; j < n; ++j) ker.emplace_back(rows[j].begin() + k, rows[j].end());
  if (ker.empty()) return QMatrix(0, n);
  return hermite_lattice_basis(QMatrix::from_rows(ker, n));
}

// Scales a rational vector to a primitive integer vector with positive leading entry
// (sign kept when `keep_sign`).
inline Vec primitive_integer(const Vec& v, bool keep_sign = false) {
  Rational l = 1;
  for (auto& x : v) {
    Rational d = x.denominator();
    l = l * d / Rational::gcd(l, d);
  }
  Vec w(v.size());
  Rational g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    w[i] = v[i] * l;
    g = Rational::gcd(g, w[i]);
  }
  if (g.is_zero()) return w;
  int lead = 0;
  for (auto& x : w)
    if (!x.is_zero()) {
      lead = x.sign();
      break;
    }
  if (!keep_sign && lead < 0) g = -g;
  for (auto& x : w) x /= g;
  return w;
}

// ---------------------------------------------------------------------------
// Sparse vectors and an incremental echelon basis. Graded pieces reach a few
// thousand dimensions, where dense elimination is too slow.

using SparseVec = std::vector<std::pair<std::uint32_t, Rational>>;

inline SparseVec to_sparse(const Vec& v) {
  SparseVec s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) s.emplace_back(static_cast<std::uint32_t>(i), v[i]);
  return s;
}

inline Vec to_dense(const SparseVec& s, std::size_t n) {
  Vec v(n);
  for (auto& [i, x] : s) v[i] = x;
  return v;
}

inline Rational sparse_at(const SparseVec& s, std::uint32_t i) {
  auto it = std::lower_bound(s.begin(), s.end(), i, [](const auto& e, std::uint32_t k) { return e.first < k; });
  if (it != s.end() && it->first == i) return it->second;
  return Rational();
}

// a + f * b
inline SparseVec axpy(const SparseVec& a, const Rational& f, const SparseVec& b) {
  SparseVec out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, f * b[j].second);
      ++j;
    } else {
      Rational x = a[i].second + f * b[j].second;
      if (!x.is_zero()) out.emplace_back(a[i].first, std::move(x));
      ++i;
      ++j;
    }
  }
  return out;
}

inline SparseVec scaled(const SparseVec& a, const Rational& f) {
  if (f.is_zero()) return {};
  SparseVec out = a;
  for (auto& e : out) e.second *= f;
  return out;
}

// Accumulates sparse sums with a dense scratch buffer.
class SparseAccumulator {
 public:
  explicit SparseAccumulator(std::size_t n) : buf_(n), mark_(n, 0) {}
  void add(std::uint32_t i, const Rational& x) {
    if (x.is_zero()) return;
    if (!mark_[i]) {
      mark_[i] = 1;
      touched_.push_back(i);
      buf_[i] = x;
    } else {
      buf_[i] += x;
    }
  }
  void add(const SparseVec& v, const Rational& f = Rational(1)) {
    if (f.is_zero()) return;
    if (f.is_one())
      for (auto& [i, x] : v) add(i, x);
    else
      for (auto& [i, x] : v) add(i, f * x);
  }
  SparseVec take() {
    std::sort(touched_.begin(), touched_.end());
    SparseVec out;
    for (auto i : touched_) {
      if (!buf_[i].is_zero()) out.emplace_back(i, std::move(buf_[i]));
      buf_[i] = Rational();
      mark_[i] = 0;
    }
    touched_.clear();
    return out;
  }

 private:
  std::vector<Rational> buf_;
  std::vector<char> mark_;
  std::vector<std::uint32_t> touched_;
};

// Row-echelon basis of a subspace of Q^n. Every row is normalized so its
// leftmost nonzero entry (its pivot) is 1, and no two rows share a pivot.
// finalize() brings the rows to reduced form.
class Echelon {
 public:
  Echelon() = default;
  explicit Echelon(std::size_t ncols) : n_(ncols), pivot_row_(ncols, -1) {}

  std::size_t cols() const { return n_; }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<SparseVec>& rows() const { return rows_; }
  int pivot_row(std::size_t col) const { return pivot_row_[col]; }
  bool reduced() const { return reduced_; }

  std::vector<std::uint32_t> pivots() const {
    std::vector<std::uint32_t> p;
    for (std::size_t c = 0; c < n_; ++c)
      if (pivot_row_[c] >= 0) p.push_back(static_cast<std::uint32_t>(c));
    return p;
  }
  std::vector<std::uint32_t> free_columns() const {
    std::vector<std::uint32_t> f;
    for (std::size_t c = 0; c < n_; ++c)
      if (pivot_row_[c] < 0) f.push_back(static_cast<std::uint32_t>(c));
    return f;
  }

  // Clears v at every pivot column by subtracting pivot rows.
  SparseVec reduce(const SparseVec& v, int skip_row = -1) const {
    if (v.empty()) return {};
    auto& sc = scratch();
    if (sc.buf.size() < n_) {
      sc.buf.resize(n_);
      sc.mark.resize(n_, 0);
    }
    std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> heap;
    std::vector<std::uint32_t> touched;
    for (auto& [i, x] : v) {
      sc.buf[i] = x;
      sc.mark[i] = 1;
      touched.push_back(i);
      if (pivot_row_[i] >= 0 && pivot_row_[i] != skip_row) heap.push(i);
    }
    while (!heap.empty()) {
      std::uint32_t c = heap.top();
      heap.pop();
      while (!heap.empty() && heap.top() == c) heap.pop();
      if (sc.buf[c].is_zero()) continue;
      const SparseVec& row = rows_[pivot_row_[c]];
      Rational f = sc.buf[c];
      for (auto& [j, y] : row) {
        if (!sc.mark[j]) {
          sc.mark[j] = 1;
          touched.push_back(j);
          sc.buf[j] = -(f * y);
        } else {
          sc.buf[j] -= f * y;
        }
        if (j != c && pivot_row_[j] >= 0 && pivot_row_[j] != skip_row && !sc.buf[j].is_zero()) heap.push(j);
      }
    }
    std::sort(touched.begin(), touched.end());
    SparseVec out;
    for (auto i : touched) {
      if (!sc.buf[i].is_zero()) out.emplace_back(i, std::move(sc.buf[i]));
      sc.buf[i] = Rational();
      sc.mark[i] = 0;
    }
    return out;
  }

  bool contains(const SparseVec& v) const { return reduce(v).empty(); }

  // Adds v to the span; returns false when v was already in it.
  bool insert(const SparseVec& v) {
    SparseVec r = reduce(v);
    if (r.empty()) return false;
    Rational inv = r.front().second.inverse();
    if (!inv.is_one())
      for (auto& e : r) e.second *= inv;
    pivot_row_[r.front().first] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(r));
    reduced_ = rows_.size() == 1;
    return true;
  }

  // Back-substitution to reduced row echelon form, rows sorted by pivot.
  void finalize() {
    if (reduced_) return;
    std::vector<std::pair<std::uint32_t, std::size_t>> order;
    for (std::size_t i = 0; i < rows_.size(); ++i) order.emplace_back(rows_[i].front().first, i);
    std::sort(order.begin(), order.end());
    std::vector<SparseVec> sorted;
    sorted.reserve(rows_.size());
    for (auto& [p, i] : order) sorted.push_back(std::move(rows_[i]));
    rows_ = std::move(sorted);
    for (std::size_t i = 0; i < rows_.size(); ++i) pivot_row_[rows_[i].front().first] = static_cast<int>(i);
    for (std::size_t i = rows_.size(); i-- > 0;) rows_[i] = reduce(rows_[i], static_cast<int>(i));
    reduced_ = true;
  }

  // For the rows read as linear equations: basis of the solution space, one
  // vector per free column with a 1 there. Requires finalize().
  std::vector<SparseVec> kernel() const {
    if (!reduced_) throw std::logic_error("Echelon::kernel requires finalize()");
    std::vector<SparseVec> ker(n_);
    for (auto& row : rows_) {
      std::uint32_t p = row.front().first;
      for (std::size_t t = 1; t < row.size(); ++t) ker[row[t].first].emplace_back(p, -row[t].second);
    }
    std::vector<SparseVec> out;
    for (std::size_t c = 0; c < n_; ++c) {
      if (pivot_row_[c] >= 0) continue;
      SparseVec v = std::move(ker[c]);
      v.emplace_back(static_cast<std::uint32_t>(c), Rational(1));
      std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      out.push_back(std::move(v));
    }
    return out;
  }

 private:
  struct Scratch {
    std::vector<Rational> buf;
    std::vector<char> mark;
  };
  static Scratch& scratch() {
    thread_local Scratch s;
    return s;
  }

  std::size_t n_ = 0;
  std::vector<SparseVec> rows_;
  std::vector<int> pivot_row_;
  bool reduced_ = true;
};

// Column-sparse matrix: column j is the image of the j-th basis vector.
struct SparseMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<SparseVec> columns;

  SparseMatrix() = default;
  SparseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), columns(c) {}

  static SparseMatrix identity(std::size_t n) {
    SparseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.columns[i] = {{static_cast<std::uint32_t>(i), Rational(1)}};
    return m;
  }
  static SparseMatrix from_dense(const QMatrix& q) {
    SparseMatrix m(q.rows(), q.cols());
    for (std::size_t j = 0; j < q.cols(); ++j) m.columns[j] = to_sparse(q.col(j));
    return m;
  }
  QMatrix dense() const {
    QMatrix q(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
      for (auto& [i, x] : columns[j]) q(i, j) = x;
    return q;
  }

  SparseVec apply(const SparseVec& v) const {
    if (v.empty()) return {};
    if (v.size() == 1) return scaled(columns[v[0].first], v[0].second);
    SparseAccumulator acc(rows);
    for (auto& [j, x] : v) acc.add(columns[j], x);
    return acc.take();
  }

  bool is_zero() const {
    return std::all_of(columns.begin(), columns.end(), [](const SparseVec& c) { return c.empty(); });
  }

  std::size_t rank() const {
    Echelon e(rows);
    for (auto& c : columns) e.insert(c);
    return e.rank();
  }

  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("SparseMatrix: shape mismatch");
    SparseMatrix c(a.rows, b.cols);
    for (std::size_t j = 0; j < b.cols; ++j) c.columns[j] = a.apply(b.columns[j]);
    return c;
  }
  friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("SparseMatrix: shape mismatch");
    SparseMatrix c(a.rows, a.cols);
    for (std::size_t j = 0; j < a.cols; ++j) c.columns[j] = axpy(a.columns[j], Rational(1), b.columns[j]);
    return c;
  }
  friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("SparseMatrix: shape mismatch");
    SparseMatrix c(a.rows, a.cols);
    for (std::size_t j = 0; j < a.cols; ++j) c.columns[j] = axpy(a.columns[j], Rational(-1), b.columns[j]);
    return c;
  }
  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.columns == b.columns;
  }
};

inline SparseMatrix linear_combination(const std::vector<SparseMatrix>& ms, const Vec& coeffs, std::size_t rows,
                                       std::size_t cols) {
  SparseMatrix out(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    SparseAccumulator acc(rows);
    for (std::size_t t = 0; t < ms.size(); ++t)
      if (!coeffs[t].is_zero()) acc.add(ms[t].columns[j], coeffs[t]);
    out.columns[j] = acc.take();
  }
  return out;
}

}  // namespace hypic
