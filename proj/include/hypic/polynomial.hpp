#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypic/rational.hpp"

namespace hypic {

// Exponent vector packed 5 bits per variable. Up to 12 variables and total
// degree 31, which is far beyond anything the truncated engine reaches.
using Monomial = std::uint64_t;

inline constexpr int kMaxVars = 12;
inline constexpr int kExpBits = 5;
inline constexpr Monomial kExpMask = (Monomial{1} << kExpBits) - 1;

inline int exponent(Monomial m, int var) { return static_cast<int>((m >> (kExpBits * var)) & kExpMask); }
inline Monomial mono_var(int var) { return Monomial{1} << (kExpBits * var); }
inline Monomial mono_mul(Monomial a, Monomial b) { return a + b; }

inline int mono_degree(Monomial m) {
  int d = 0;
  while (m) {
    d += static_cast<int>(m & kExpMask);
    m >>= kExpBits;
  }
  return d;
}

inline bool mono_divides(Monomial a, Monomial b) {
  while (a) {
    if ((a & kExpMask) > (b & kExpMask)) return false;
    a >>= kExpBits;
    b >>= kExpBits;
  }
  return true;
}

inline int mono_first_var(Monomial m) {
  for (int v = 0; m; ++v, m >>= kExpBits)
    if (m & kExpMask) return v;
  return -1;
}

// Degree reverse lexicographic order with x_0 > x_1 > ...: true iff a > b.
inline bool degrevlex_greater(Monomial a, Monomial b) {
  int da = mono_degree(a), db = mono_degree(b);
  if (da != db) return da > db;
  for (int v = kMaxVars - 1; v >= 0; --v) {
    int ea = exponent(a, v), eb = exponent(b, v);
    if (ea != eb) return ea < eb;
  }
  return false;
}

inline std::string mono_str(Monomial m, const std::vector<std::string>& labels) {
  if (m == 0) return "1";
  std::string s;
  for (int v = 0; v < static_cast<int>(labels.size()); ++v) {
    int e = exponent(m, v);
    if (!e) continue;
    if (!s.empty()) s += "*";
    s += labels[v];
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

// Sparse polynomial with rational coefficients.
class Poly {
 public:
  Poly() = default;
  Poly(const Rational& c) {
    if (!c.is_zero()) t_[0] = c;
  }
  static Poly var(int v, const Rational& c = Rational(1)) {
    if (v < 0 || v >= kMaxVars) throw std::out_of_range("Poly::var: variable index out of range");
    Poly p;
    if (!c.is_zero()) p.t_[mono_var(v)] = c;
    return p;
  }
  static Poly monomial(Monomial m, const Rational& c = Rational(1)) {
    Poly p;
    if (!c.is_zero()) p.t_[m] = c;
    return p;
  }
  // Linear form sum_i c_i x_i.
  static Poly linear(const std::vector<Rational>& c) {
    Poly p;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (!c[i].is_zero()) p.t_[mono_var(static_cast<int>(i))] = c[i];
    return p;
  }

  const std::map<Monomial, Rational>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }

  Rational coeff(Monomial m) const {
    auto it = t_.find(m);
    return it == t_.end() ? Rational() : it->second;
  }

  // -1 for the zero polynomial.
  int degree() const {
    int d = -1;
    for (auto& [m, c] : t_) d = std::max(d, mono_degree(m));
    return d;
  }
  bool is_homogeneous() const {
    int d = -2;
    for (auto& [m, c] : t_) {
      int e = mono_degree(m);
      if (d == -2) d = e;
      if (e != d) return false;
    }
    return true;
  }
  int max_var() const {
    int mv = -1;
    for (auto& [m, c] : t_)
      for (int v = 0; v < kMaxVars; ++v)
        if (exponent(m, v)) mv = std::max(mv, v);
    return mv;
  }

  Poly& operator+=(const Poly& o) {
    for (auto& [m, c] : o.t_) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    for (auto& [m, c] : o.t_) add_term(m, -c);
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (auto& [m1, c1] : a.t_)
      for (auto& [m2, c2] : b.t_) {
        if (mono_degree(m1) + mono_degree(m2) > 31) throw std::overflow_error("Poly: degree overflow");
        r.add_term(mono_mul(m1, m2), c1 * c2);
      }
    return r;
  }
  friend Poly operator*(const Rational& s, Poly a) {
    if (s.is_zero()) return Poly();
    for (auto& [m, c] : a.t_) c *= s;
    return a;
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.t_ == b.t_; }

  // Replaces every variable v by images[v]; variables past images.size() stay.
  Poly substitute(const std::vector<Poly>& images) const {
    Poly r;
    for (auto& [m, c] : t_) {
      Poly term(c);
      for (int v = 0; v < kMaxVars; ++v) {
        int e = exponent(m, v);
        for (int k = 0; k < e; ++k) term = term * (v < static_cast<int>(images.size()) ? images[v] : var(v));
      }
      r += term;
    }
    return r;
  }

  std::string str(const std::vector<std::string>& labels) const {
    if (t_.empty()) return "0";
    // Print in decreasing degrevlex order for stable output.
    std::vector<std::pair<Monomial, Rational>> ts(t_.begin(), t_.end());
    std::sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) { return degrevlex_greater(a.first, b.first); });
    std::string s;
    bool first = true;
    for (auto& [m, c] : ts) {
      Rational a = c;
      if (!first) {
        s += c.sign() < 0 ? " - " : " + ";
        a = abs(c);
      } else if (c.sign() < 0) {
        s += "-";
        a = abs(c);
      }
      first = false;
      if (m == 0) {
        s += a.str();
      } else {
        if (!a.is_one()) s += a.str() + "*";
        s += mono_str(m, labels);
      }
    }
    return s;
  }

 private:
  std::map<Monomial, Rational> t_;

  void add_term(Monomial m, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, ins] = t_.emplace(m, c);
    if (!ins) {
      it->second += c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }
};

}  // namespace hypic
