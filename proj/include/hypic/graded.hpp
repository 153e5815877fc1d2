#pragma once

#include <algorithm>
#include <memory>
#include <ostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "hypic/linalg.hpp"
#include "hypic/polynomial.hpp"

namespace hypic {

// Thrown when a computation needs degrees beyond the truncation.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline long long binomial(long long n, long long k) {
  if (k < 0 || n < k) return 0;
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Dimensions of a graded space whose generators live in degree 2; entry k is
// the dimension in degree 2k. Everything is known up to degree D.
struct HilbertSeries {
  int D = 0;
  std::vector<long long> dims;
  std::string closed_form;

  HilbertSeries() = default;
  HilbertSeries(int d, std::vector<long long> v) : D(d), dims(std::move(v)) { dims.resize(D / 2 + 1, 0); }

  int top() const { return D / 2; }
  long long at(int k) const { return k >= 0 && k < static_cast<int>(dims.size()) ? dims[k] : 0; }

  // numer(t^2) / (1 - t^2)^m, numer given by its coefficients in t^2.
  static HilbertSeries rational(const std::vector<long long>& numer, int m, int D) {
    HilbertSeries h(D, {});
    for (int k = 0; k <= D / 2; ++k) {
      long long s = 0;
      for (int j = 0; j < static_cast<int>(numer.size()) && j <= k; ++j)
        s += numer[j] * (m == 0 ? (k == j ? 1 : 0) : binomial(k - j + m - 1, m - 1));
      h.dims[k] = s;
    }
    h.closed_form = poly_str(numer) + (m ? " / (1-t^2)^" + std::to_string(m) : "");
    return h;
  }

  static std::string poly_str(const std::vector<long long>& c) {
    std::string s;
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (!c[j]) continue;
      long long a = c[j] < 0 ? -c[j] : c[j];
      if (!s.empty())
        s += c[j] < 0 ? " - " : " + ";
      else if (c[j] < 0)
        s += "-";
      if (j == 0)
        s += std::to_string(a);
      else {
        if (a != 1) s += std::to_string(a) + "*";
        s += "t^" + std::to_string(2 * j);
      }
    }
    return s.empty() ? "0" : s;
  }

  // Product of two series, truncated at the smaller D.
  friend HilbertSeries operator*(const HilbertSeries& a, const HilbertSeries& b) {
    int D = std::min(a.D, b.D);
    HilbertSeries h(D, {});
    for (int k = 0; k <= D / 2; ++k)
      for (int j = 0; j <= k; ++j) h.dims[k] += a.at(j) * b.at(k - j);
    return h;
  }
  friend HilbertSeries operator+(const HilbertSeries& a, const HilbertSeries& b) {
    int D = std::min(a.D, b.D);
    HilbertSeries h(D, {});
    for (int k = 0; k <= D / 2; ++k) h.dims[k] = a.at(k) + b.at(k);
    return h;
  }
  // Multiplication by t^(2s).
  HilbertSeries shifted(int s) const {
    HilbertSeries h(D, {});
    for (int k = s; k <= D / 2; ++k) h.dims[k] = at(k - s);
    return h;
  }
  // Compares dimensions on the common range.
  friend bool operator==(const HilbertSeries& a, const HilbertSeries& b) {
    int K = std::min(a.D, b.D) / 2;
    for (int k = 0; k <= K; ++k)
      if (a.at(k) != b.at(k)) return false;
    return true;
  }
  std::string str() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t k = 0; k < dims.size(); ++k) os << (k ? "," : "") << dims[k];
    os << ")";
    return os.str();
  }
};

inline std::ostream& operator<<(std::ostream& os, const HilbertSeries& h) { return os << h.str(); }

// Coordinates relative to a basis that is the identity on a set of key
// columns: kernel bases from Echelon::kernel (keys = free columns) and reduced
// row bases (keys = pivots) both have this shape.
struct SubspaceBasis {
  std::size_t ambient = 0;
  std::vector<SparseVec> basis;
  std::vector<std::uint32_t> keys;  // ascending

  std::size_t dim() const { return basis.size(); }

  static SubspaceBasis kernel_of(const Echelon& eqs) {
    SubspaceBasis s;
    s.ambient = eqs.cols();
    s.basis = eqs.kernel();
    s.keys = eqs.free_columns();
    return s;
  }
  static SubspaceBasis span_of(Echelon e) {
    e.finalize();
    SubspaceBasis s;
    s.ambient = e.cols();
    s.basis = e.rows();
    s.keys = e.pivots();
    return s;
  }
  static SubspaceBasis span_of(const std::vector<SparseVec>& vs, std::size_t ambient) {
    Echelon e(ambient);
    for (auto& v : vs) e.insert(v);
    return span_of(std::move(e));
  }
  static SubspaceBasis full(std::size_t n) {
    SubspaceBasis s;
    s.ambient = n;
    for (std::uint32_t i = 0; i < n; ++i) {
      s.basis.push_back({{i, Rational(1)}});
      s.keys.push_back(i);
    }
    return s;
  }

  // Coordinates of a vector already known to lie in the subspace.
  SparseVec coords(const SparseVec& v) const {
    SparseVec c;
    std::size_t t = 0;
    for (auto& [i, x] : v) {
      while (t < keys.size() && keys[t] < i) ++t;
      if (t < keys.size() && keys[t] == i) c.emplace_back(static_cast<std::uint32_t>(t), x);
    }
    return c;
  }
  SparseVec lift(const SparseVec& c) const {
    SparseAccumulator acc(ambient);
    for (auto& [t, x] : c) acc.add(basis[t], x);
    return acc.take();
  }
  bool contains(const SparseVec& v) const {
    SparseVec back = lift(coords(v));
    return back == v;
  }
};

// Commutative graded ring Q[x_1..x_n]/I with every x_i in degree 2, known up to
// polynomial degree top() = D/2. Linear relations are eliminated up front, and
// relations that reduce to monomials prune the monomial lists; the rest is
// degree-by-degree row reduction in degrevlex order, so the basis consists of
// standard monomials.
class TruncatedRing {
 public:
  TruncatedRing(std::vector<std::string> labels, std::vector<Poly> relations, int D)
      : labels_(std::move(labels)), relations_(std::move(relations)), D_(D), K_(D / 2) {
    if (D < 0) throw std::invalid_argument("quotient_ring: truncation degree must be nonnegative");
    if (labels_.size() > static_cast<std::size_t>(kMaxVars))
      throw std::invalid_argument("quotient_ring: at most " + std::to_string(kMaxVars) + " variables supported");
    for (auto& r : relations_) {
      if (!r.is_homogeneous()) throw std::invalid_argument("quotient_ring: inhomogeneous relation " + r.str(labels_));
      if (r.max_var() >= static_cast<int>(labels_.size()))
        throw std::invalid_argument("quotient_ring: relation uses an undeclared variable");
      if (r.degree() == 0) throw std::invalid_argument("quotient_ring: nonzero constant relation");
    }
    build();
  }
  TruncatedRing(const TruncatedRing&) = delete;
  TruncatedRing& operator=(const TruncatedRing&) = delete;

  int D() const { return D_; }
  int top() const { return K_; }
  std::size_t nvars() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Poly>& relations() const { return relations_; }

  std::size_t dim(int k) const { return k < 0 || k > K_ ? 0 : deg_[k].basis.size(); }
  HilbertSeries hilbert() const {
    HilbertSeries h(D_, {});
    for (int k = 0; k <= K_; ++k) h.dims[k] = static_cast<long long>(dim(k));
    return h;
  }
  // Standard monomials in degree k, in decreasing degrevlex order.
  const std::vector<Monomial>& basis(int k) const { return deg_.at(k).basis; }

  // Image of x_v, for substituting eliminated variables.
  const Poly& variable_image(int v) const { return subst_[v]; }

  SparseVec normal_form(const Poly& f) const {
    if (f.is_zero()) return {};
    int k = f.degree();
    if (!f.is_homogeneous()) throw std::invalid_argument("normal_form: inhomogeneous input");
    if (k > K_) throw TruncationError("normal_form: degree " + std::to_string(2 * k) + " exceeds truncation D = " +
                                      std::to_string(D_) + "; rerun with a larger D");
    Poly g = f.substitute(subst_);
    SparseAccumulator acc(dim(k));
    for (auto& [m, c] : g.terms()) acc.add(nf_monomial(m, k), c);
    return acc.take();
  }

  bool contains(const Poly& f) const { return normal_form(f).empty(); }

  Poly to_poly(const SparseVec& v, int k) const {
    Poly p;
    for (auto& [i, c] : v) p += Poly::monomial(deg_[k].basis[i], c);
    return p;
  }

  // Multiplication by x_v from degree k to k+1.
  const SparseMatrix& var_action(int v, int k) const {
    if (k < 0 || k >= K_) throw TruncationError("var_action: degree out of range");
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto& slot = cache_->var_act[static_cast<std::size_t>(v) * K_ + k];
    if (!slot) slot = std::make_unique<SparseMatrix>(compute_var_action(v, k));
    return *slot;
  }

  // Multiplication by the linear form sum_v c_v x_v from degree k to k+1.
  SparseMatrix linear_action(const Poly& form, int k) const {
    if (!form.is_zero() && form.degree() != 1) throw std::invalid_argument("linear_action: form must be linear");
    SparseMatrix out(dim(k + 1), dim(k));
    for (std::size_t j = 0; j < dim(k); ++j) {
      SparseAccumulator acc(dim(k + 1));
      for (auto& [m, c] : form.terms()) acc.add(var_action(mono_first_var(m), k).columns[j], c);
      out.columns[j] = acc.take();
    }
    return out;
  }

  SparseVec multiply(const SparseVec& a, int ka, const SparseVec& b, int kb) const {
    if (ka + kb > K_) throw TruncationError("multiply: product exceeds truncation");
    SparseAccumulator acc(dim(ka + kb));
    for (auto& [i, x] : a) {
      SparseVec cur = b;
      Monomial m = deg_[ka].basis[i];
      int k = kb;
      for (int v = 0; v < static_cast<int>(nvars()); ++v)
        for (int e = 0; e < exponent(m, v); ++e) cur = var_action(v, k++).apply(cur);
      acc.add(cur, x);
    }
    return acc.take();
  }

 private:
  struct Degree {
    std::vector<Monomial> live;                    // decreasing degrevlex
    std::unordered_map<Monomial, std::uint32_t> col;
    Echelon ideal;                                 // span of I_k modulo pruned monomials
    std::vector<Monomial> basis;
    std::vector<int> basis_index;                  // live column -> basis index or -1
  };
  struct Cache {
    std::mutex mu;
    std::vector<std::unique_ptr<SparseMatrix>> var_act;
  };

  std::vector<std::string> labels_;
  std::vector<Poly> relations_;
  int D_, K_;
  std::vector<Poly> subst_;
  std::vector<int> free_vars_;
  std::vector<Monomial> dead_;  // monomial generators after substitution
  std::vector<std::vector<Poly>> gens_by_degree_;
  std::vector<Degree> deg_;
  std::unique_ptr<Cache> cache_ = std::make_unique<Cache>();

  bool is_dead(Monomial m) const {
    for (auto g : dead_)
      if (mono_divides(g, m)) return true;
    return false;
  }

  void build() {
    const int n = static_cast<int>(nvars());
    // Linear relations: reduced echelon over the variables; pivots are eliminated.
    std::vector<Vec> lin;
    for (auto& r : relations_)
      if (r.degree() == 1) {
        Vec row(n);
        for (auto& [m, c] : r.terms()) row[mono_first_var(m)] = c;
        lin.push_back(row);
      }
    subst_.assign(n, Poly());
    std::vector<bool> elim(n, false);
    if (!lin.empty()) {
      auto [red, piv] = rref(QMatrix::from_rows(lin, n));
      for (std::size_t i = 0; i < piv.size(); ++i) {
        elim[piv[i]] = true;
        Poly img;
        for (int j = 0; j < n; ++j)
          if (j != static_cast<int>(piv[i]) && !red(i, j).is_zero()) img += Poly::var(j, -red(i, j));
        subst_[piv[i]] = img;
      }
    }
    for (int v = 0; v < n; ++v)
      if (!elim[v]) {
        subst_[v] = Poly::var(v);
        free_vars_.push_back(v);
      }

    gens_by_degree_.assign(K_ + 1, {});
    std::vector<Poly> polys;
    for (auto& r : relations_) {
      int d = r.degree();
      if (d <= 1 || d > K_) continue;
      Poly g = r.substitute(subst_);
      if (!g.is_zero()) polys.push_back(std::move(g));
    }
    // Relations that become monomials modulo the monomial part are pruned as
    // well; repeat until stable.
    for (bool changed = true; changed;) {
      changed = false;
      std::vector<Poly> keep;
      for (auto& g : polys) {
        Poly h;
        for (auto& [m, c] : g.terms())
          if (!is_dead(m)) h += Poly::monomial(m, c);
        if (h.is_zero()) continue;
        if (h.size() == 1) {
          dead_.push_back(h.terms().begin()->first);
          changed = true;
        } else {
          keep.push_back(std::move(h));
        }
      }
      polys = std::move(keep);
    }
    for (auto& g : polys) gens_by_degree_[g.degree()].push_back(g);

    deg_.resize(K_ + 1);
    deg_[0].live = {0};
    deg_[0].col[0] = 0;
    deg_[0].ideal = Echelon(1);
    deg_[0].basis = {0};
    deg_[0].basis_index = {0};
    for (int k = 1; k <= K_; ++k) build_degree(k);
    cache_->var_act.resize(static_cast<std::size_t>(n) * std::max(K_, 1));
  }

  void build_degree(int k) {
    Degree& cur = deg_[k];
    const Degree& prev = deg_[k - 1];
    std::vector<Monomial> live;
    for (Monomial m : prev.live)
      for (int v : free_vars_) {
        Monomial x = mono_mul(m, mono_var(v));
        if (!is_dead(x)) live.push_back(x);
      }
    std::sort(live.begin(), live.end(), degrevlex_greater);
    live.erase(std::unique(live.begin(), live.end()), live.end());
    cur.live = std::move(live);
    for (std::uint32_t i = 0; i < cur.live.size(); ++i) cur.col[cur.live[i]] = i;
    cur.ideal = Echelon(cur.live.size());

    auto to_row = [&](const Poly& p) {
      SparseVec row;
      for (auto& [m, c] : p.terms()) {
        auto it = cur.col.find(m);
        if (it != cur.col.end()) row.emplace_back(it->second, c);
      }
      std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      return row;
    };
    for (auto& g : gens_by_degree_[k]) cur.ideal.insert(to_row(g));
    for (auto& r : prev.ideal.rows())
      for (int v : free_vars_) {
        SparseVec row;
        for (auto& [c, x] : r) {
          auto it = cur.col.find(mono_mul(prev.live[c], mono_var(v)));
          if (it != cur.col.end()) row.emplace_back(it->second, x);
        }
        std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        cur.ideal.insert(row);
      }
    cur.ideal.finalize();
    cur.basis_index.assign(cur.live.size(), -1);
    for (std::uint32_t c = 0; c < cur.live.size(); ++c)
      if (cur.ideal.pivot_row(c) < 0) {
        cur.basis_index[c] = static_cast<int>(cur.basis.size());
        cur.basis.push_back(cur.live[c]);
      }
  }

  // Normal form of a monomial in the free variables.
  SparseVec nf_monomial(Monomial m, int k) const {
    const Degree& d = deg_[k];
    auto it = d.col.find(m);
    if (it == d.col.end()) return {};
    std::uint32_t c = it->second;
    if (d.basis_index[c] >= 0) return {{static_cast<std::uint32_t>(d.basis_index[c]), Rational(1)}};
    const SparseVec& row = d.ideal.rows()[d.ideal.pivot_row(c)];
    SparseVec out;
    for (std::size_t t = 1; t < row.size(); ++t)
      out.emplace_back(static_cast<std::uint32_t>(d.basis_index[row[t].first]), -row[t].second);
    return out;
  }

  SparseMatrix compute_var_action(int v, int k) const {
    SparseMatrix out(dim(k + 1), dim(k));
    const Poly& img = subst_[v];
    for (std::size_t j = 0; j < dim(k); ++j) {
      SparseAccumulator acc(dim(k + 1));
      for (auto& [m, c] : img.terms()) acc.add(nf_monomial(mono_mul(deg_[k].basis[j], m), k + 1), c);
      out.columns[j] = acc.take();
    }
    return out;
  }
};

inline std::shared_ptr<const TruncatedRing> quotient_ring(std::vector<std::string> vars, std::vector<Poly> relations,
                                                          int D) {
  return std::make_shared<const TruncatedRing>(std::move(vars), std::move(relations), D);
}

inline void check_degrees(const std::vector<Poly>& gens, int D, const char* who) {
  for (auto& g : gens)
    if (2 * g.degree() > D)
      throw TruncationError(std::string(who) + ": generator of degree " + std::to_string(2 * g.degree()) +
                            " exceeds truncation D = " + std::to_string(D) + "; rerun with a larger D");
}

inline bool ideal_membership(const Poly& f, const std::vector<std::string>& vars, const std::vector<Poly>& relations,
                             int D) {
  check_degrees({f}, D, "ideal_membership");
  check_degrees(relations, D, "ideal_membership");
  return TruncatedRing(vars, relations, D).contains(f);
}

inline bool ideal_equality(const std::vector<std::string>& vars, const std::vector<Poly>& rels1,
                           const std::vector<Poly>& rels2, int D) {
  check_degrees(rels1, D, "ideal_equality");
  check_degrees(rels2, D, "ideal_equality");
  TruncatedRing a(vars, rels1, D), b(vars, rels2, D);
  for (auto& g : rels2)
    if (!a.contains(g)) return false;
  for (auto& g : rels1)
    if (!b.contains(g)) return false;
  return true;
}

// Ring homomorphism given by the images of the source variables, each a
// linear form (or zero) in the target variables.
class RingMap {
 public:
  RingMap(std::shared_ptr<const TruncatedRing> src, std::shared_ptr<const TruncatedRing> dst, std::vector<Poly> images)
      : src_(std::move(src)), dst_(std::move(dst)), images_(std::move(images)) {
    if (images_.size() != src_->nvars()) throw std::invalid_argument("RingMap: one image per source variable");
    for (auto& p : images_)
      if (!p.is_zero() && (p.degree() != 1 || !p.is_homogeneous()))
        throw std::invalid_argument("RingMap: variable images must be linear forms");
    int K = std::min(src_->top(), dst_->top());
    act_.resize(images_.size());
    for (std::size_t v = 0; v < images_.size(); ++v)
      for (int k = 0; k < K; ++k) act_[v].push_back(dst_->linear_action(images_[v], k));
    mats_.resize(K + 1);
    for (int k = 0; k <= K; ++k) {
      mats_[k] = SparseMatrix(dst_->dim(k), src_->dim(k));
      for (std::size_t j = 0; j < src_->dim(k); ++j) mats_[k].columns[j] = image_of_monomial(src_->basis(k)[j]);
    }
  }

  const TruncatedRing& source() const { return *src_; }
  const TruncatedRing& target() const { return *dst_; }
  std::shared_ptr<const TruncatedRing> source_ptr() const { return src_; }
  std::shared_ptr<const TruncatedRing> target_ptr() const { return dst_; }
  const std::vector<Poly>& images() const { return images_; }
  int top() const { return static_cast<int>(mats_.size()) - 1; }
  const SparseMatrix& matrix(int k) const { return mats_.at(k); }

  SparseVec image_of_monomial(Monomial m) const {
    std::lock_guard<std::mutex> lock(*memo_mu_);
    return image_of_monomial_locked(m);
  }

  SparseVec image_of_poly(const Poly& f) const {
    if (f.is_zero()) return {};
    int k = f.degree();
    if (k > top()) throw TruncationError("RingMap: degree exceeds truncation");
    SparseAccumulator acc(dst_->dim(k));
    for (auto& [m, c] : f.terms()) acc.add(image_of_monomial(m), c);
    return acc.take();
  }

  // Every source relation of degree within range maps to zero.
  bool well_defined() const {
    for (auto& r : src_->relations())
      if (r.degree() <= top() && !image_of_poly(r).empty()) return false;
    return true;
  }
  bool is_surjective() const {
    for (int k = 0; k <= top(); ++k)
      if (mats_[k].rank() != dst_->dim(k)) return false;
    return true;
  }
  bool is_injective() const {
    for (int k = 0; k <= top(); ++k)
      if (mats_[k].rank() != src_->dim(k)) return false;
    return true;
  }

 private:
  std::shared_ptr<const TruncatedRing> src_, dst_;
  std::vector<Poly> images_;
  std::vector<std::vector<SparseMatrix>> act_;
  std::vector<SparseMatrix> mats_;
  mutable std::unordered_map<Monomial, SparseVec> memo_;
  std::unique_ptr<std::mutex> memo_mu_ = std::make_unique<std::mutex>();

  SparseVec image_of_monomial_locked(Monomial m) const {
    auto it = memo_.find(m);
    if (it != memo_.end()) return it->second;
    SparseVec r;
    if (m == 0) {
      r = {{0, Rational(1)}};
    } else {
      int v = mono_first_var(m);
      Monomial rest = m - mono_var(v);
      r = act_[v][mono_degree(rest)].apply(image_of_monomial_locked(rest));
    }
    memo_.emplace(m, r);
    return r;
  }
};

// Graded vector space with a family of degree-raising operators, one per
// generator of the acting polynomial ring. act[g][k] maps degree k to k+1.
struct GradedModule {
  int D = 0;
  std::vector<std::size_t> dims;
  std::vector<std::vector<SparseMatrix>> act;

  // Set when the module is a quotient ring acting on itself through `ring_gens`;
  // lets generator counts come from the ring modulo those forms.
  std::shared_ptr<const TruncatedRing> ring;
  std::vector<Poly> ring_gens;

  GradedModule() = default;
  GradedModule(int d, std::size_t ngens) : D(d), dims(d / 2 + 1, 0), act(ngens) {}

  int top() const { return D / 2; }
  std::size_t ngens() const { return act.size(); }
  std::size_t dim(int k) const { return k < 0 || k > top() ? 0 : dims[k]; }
  std::size_t total_dim() const {
    std::size_t s = 0;
    for (auto d : dims) s += d;
    return s;
  }
  HilbertSeries hilbert() const {
    HilbertSeries h(D, {});
    for (int k = 0; k <= top(); ++k) h.dims[k] = static_cast<long long>(dims[k]);
    return h;
  }
  bool is_zero() const { return total_dim() == 0; }

  // Zero operators everywhere; used for building modules piece by piece.
  void init_zero_actions() {
    for (auto& a : act) {
      a.clear();
      for (int k = 0; k < top(); ++k) a.emplace_back(dims[k + 1], dims[k]);
    }
  }

  bool actions_commute() const {
    for (std::size_t g = 0; g < act.size(); ++g)
      for (std::size_t h = g + 1; h < act.size(); ++h)
        for (int k = 0; k + 1 < top(); ++k)
          if (!(act[g][k + 1] * act[h][k] == act[h][k + 1] * act[g][k])) return false;
    return true;
  }
};

// The ring itself as a module over the polynomial ring on `gens`, each a
// linear form in the ring's variables.
inline GradedModule ring_module(const TruncatedRing& r, const std::vector<Poly>& gens) {
  GradedModule m(r.D(), gens.size());
  for (int k = 0; k <= r.top(); ++k) m.dims[k] = r.dim(k);
  for (std::size_t g = 0; g < gens.size(); ++g)
    for (int k = 0; k < r.top(); ++k) m.act[g].push_back(r.linear_action(gens[g], k));
  return m;
}

inline GradedModule ring_module(std::shared_ptr<const TruncatedRing> r, const std::vector<Poly>& gens) {
  GradedModule m = ring_module(*r, gens);
  m.ring = std::move(r);
  m.ring_gens = gens;
  return m;
}

struct GradedMap {
  std::vector<SparseMatrix> deg;  // deg[k]: source degree k -> target degree k

  static GradedMap from_ring_map(const RingMap& f) {
    GradedMap m;
    for (int k = 0; k <= f.top(); ++k) m.deg.push_back(f.matrix(k));
    return m;
  }
  static GradedMap identity(const GradedModule& m) {
    GradedMap f;
    for (int k = 0; k <= m.top(); ++k) f.deg.push_back(SparseMatrix::identity(m.dims[k]));
    return f;
  }
  static GradedMap zero(const GradedModule& src, const GradedModule& dst) {
    GradedMap f;
    for (int k = 0; k <= std::min(src.top(), dst.top()); ++k) f.deg.emplace_back(dst.dims[k], src.dims[k]);
    return f;
  }
  friend GradedMap operator*(const GradedMap& a, const GradedMap& b) {
    GradedMap c;
    for (std::size_t k = 0; k < std::min(a.deg.size(), b.deg.size()); ++k) c.deg.push_back(a.deg[k] * b.deg[k]);
    return c;
  }
  friend bool operator==(const GradedMap& a, const GradedMap& b) { return a.deg == b.deg; }

  bool commutes_with(const GradedModule& src, const GradedModule& dst) const {
    std::size_t G = std::min(src.ngens(), dst.ngens());
    for (std::size_t g = 0; g < G; ++g)
      for (std::size_t k = 0; k + 1 < deg.size() && static_cast<int>(k) < src.top(); ++k)
        if (!(deg[k + 1] * src.act[g][k] == dst.act[g][k] * deg[k])) return false;
    return true;
  }
};

// A graded subspace of an ambient module, closed under the action, together
// with the induced module structure.
struct Submodule {
  GradedModule module;
  std::vector<SubspaceBasis> inclusion;  // per degree, in ambient coordinates
};

inline Submodule induced_submodule(const GradedModule& ambient, std::vector<SubspaceBasis> sub) {
  Submodule s;
  s.module = GradedModule(ambient.D, ambient.ngens());
  for (int k = 0; k <= ambient.top(); ++k) s.module.dims[k] = sub[k].dim();
  for (std::size_t g = 0; g < ambient.ngens(); ++g)
    for (int k = 0; k < ambient.top(); ++k) {
      SparseMatrix a(sub[k + 1].dim(), sub[k].dim());
      for (std::size_t j = 0; j < sub[k].dim(); ++j) a.columns[j] = sub[k + 1].coords(ambient.act[g][k].apply(sub[k].basis[j]));
      s.module.act[g].push_back(std::move(a));
    }
  s.inclusion = std::move(sub);
  return s;
}

// Null space of a column-stored matrix.
inline SubspaceBasis null_space(const SparseMatrix& m) {
  std::vector<SparseVec> rows(m.rows);
  for (std::uint32_t j = 0; j < m.cols; ++j)
    for (auto& [i, x] : m.columns[j]) rows[i].emplace_back(j, x);
  Echelon e(m.cols);
  for (auto& r : rows) e.insert(r);
  e.finalize();
  return SubspaceBasis::kernel_of(e);
}

inline Submodule kernel(const GradedMap& f, const GradedModule& src) {
  std::vector<SubspaceBasis> sub;
  for (int k = 0; k <= src.top(); ++k)
    sub.push_back(k < static_cast<int>(f.deg.size()) ? null_space(f.deg[k]) : SubspaceBasis::full(src.dims[k]));
  return induced_submodule(src, std::move(sub));
}

inline Submodule image(const GradedMap& f, const GradedModule& dst) {
  std::vector<SubspaceBasis> sub;
  for (int k = 0; k <= dst.top(); ++k) {
    if (k < static_cast<int>(f.deg.size()))
      sub.push_back(SubspaceBasis::span_of(f.deg[k].columns, dst.dims[k]));
    else
      sub.push_back(SubspaceBasis::span_of(std::vector<SparseVec>{}, dst.dims[k]));
  }
  return induced_submodule(dst, std::move(sub));
}

struct MinimalGenerators {
  std::vector<std::size_t> dims;            // dimension of M/(A_+ M) per degree
  std::vector<std::vector<SparseVec>> lifts;  // chosen basis vectors of M lifting a basis

  std::vector<int> degrees() const {
    std::vector<int> d;
    for (std::size_t k = 0; k < dims.size(); ++k)
      for (std::size_t i = 0; i < dims[k]; ++i) d.push_back(2 * static_cast<int>(k));
    return d;
  }
  std::size_t count() const {
    std::size_t s = 0;
    for (auto d : dims) s += d;
    return s;
  }
};

// Span of the images of all generators acting on degree k-1.
inline Echelon augmentation_image(const GradedModule& m, int k) {
  Echelon e(m.dim(k));
  if (k >= 1)
    for (std::size_t g = 0; g < m.ngens(); ++g)
      for (auto& c : m.act[g][k - 1].columns) e.insert(c);
  return e;
}

// For a ring module, M/(A_+ M) is the ring modulo the acting forms; its
// standard monomials, read back in the ring, lift a basis.
inline MinimalGenerators ring_min_generators(const GradedModule& m) {
  const TruncatedRing& r = *m.ring;
  auto rels = r.relations();
  for (auto& g : m.ring_gens)
    if (!g.is_zero()) rels.push_back(g);
  auto bar = quotient_ring(r.labels(), rels, r.D());
  MinimalGenerators out;
  out.dims.assign(m.top() + 1, 0);
  out.lifts.assign(m.top() + 1, {});
  for (int k = 0; k <= m.top(); ++k) {
    out.dims[k] = bar->dim(k);
    for (Monomial mono : bar->basis(k)) out.lifts[k].push_back(r.normal_form(Poly::monomial(mono)));
  }
  return out;
}

inline MinimalGenerators min_generators(const GradedModule& m) {
  if (m.ring) return ring_min_generators(m);
  MinimalGenerators out;
  out.dims.assign(m.top() + 1, 0);
  out.lifts.assign(m.top() + 1, {});
  for (int k = 0; k <= m.top(); ++k) {
    Echelon e = augmentation_image(m, k);
    for (std::uint32_t i = 0; i < m.dims[k] && e.rank() < m.dims[k]; ++i) {
      SparseVec unit{{i, Rational(1)}};
      if (e.insert(unit)) out.lifts[k].push_back(std::move(unit));
    }
    out.dims[k] = out.lifts[k].size();
  }
  return out;
}

struct FreenessReport {
  bool free = false;
  MinimalGenerators generators;
  HilbertSeries generator_series;  // Hilb(M) divided by Hilb(base), truncated
  int first_failure = -1;          // polynomial degree where dimensions disagree

  std::vector<int> generator_degrees() const { return generators.degrees(); }
};

// Freeness over a base ring generated by the acting operators. Graded
// Nakayama makes the free module on lifted generators surject onto M, so
// freeness up to the truncation is the dimension identity
// dim M_k = sum_j gens_j * dim B_{k-j}.
inline FreenessReport is_free_over(const GradedModule& m, const HilbertSeries& base) {
  FreenessReport r;
  r.generators = min_generators(m);
  HilbertSeries gens(m.D, {});
  for (int k = 0; k <= m.top(); ++k) gens.dims[k] = static_cast<long long>(r.generators.dims[k]);
  r.generator_series = gens;
  HilbertSeries expect = gens * base;
  r.free = true;
  for (int k = 0; k <= m.top(); ++k)
    if (expect.at(k) != static_cast<long long>(m.dims[k])) {
      r.free = false;
      r.first_failure = k;
      break;
    }
  return r;
}

inline HilbertSeries polynomial_ring_series(int nvars, int D) { return HilbertSeries::rational({1}, nvars, D); }

// Direct sum of modules acting through the same generators.
inline GradedModule direct_sum(const std::vector<const GradedModule*>& parts, int D, std::size_t ngens) {
  GradedModule s(D, ngens);
  for (int k = 0; k <= D / 2; ++k)
    for (auto* p : parts) s.dims[k] += p->dim(k);
  for (std::size_t g = 0; g < ngens; ++g)
    for (int k = 0; k < D / 2; ++k) {
      SparseMatrix a(s.dims[k + 1], s.dims[k]);
      std::size_t off_src = 0, off_dst = 0;
      for (auto* p : parts) {
        for (std::size_t j = 0; j < p->dim(k); ++j) {
          SparseVec col;
          if (k < p->top())
            for (auto& [i, x] : p->act[g][k].columns[j]) col.emplace_back(static_cast<std::uint32_t>(i + off_dst), x);
          a.columns[off_src + j] = std::move(col);
        }
        off_src += p->dim(k);
        off_dst += p->dim(k + 1);
      }
      s.act[g].push_back(std::move(a));
    }
  return s;
}

}  // namespace hypic
