#pragma once

#include <gmp.h>

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace hypic {

// Exact rational number. Values whose reduced numerator and denominator fit in
// int64 are kept inline; anything larger spills into a heap-allocated mpq_t.
// The representation is canonical: a value that fits inline is always inline,
// so equality never has to compare across representations.
class Rational {
 public:
  Rational() noexcept = default;
  Rational(int v) noexcept : num_(v) {}
  Rational(long v) { set_i128(static_cast<__int128>(v), 1); }
  Rational(long long v) { set_i128(static_cast<__int128>(v), 1); }
  Rational(long long n, long long d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    set_i128(n, d);
  }

  Rational(const Rational& o) : num_(o.num_), den_(o.den_) {
    if (o.big_) {
      big_ = new __mpq_struct;
      mpq_init(big_);
      mpq_set(big_, o.big_);
    }
  }
  Rational(Rational&& o) noexcept : num_(o.num_), den_(o.den_), big_(o.big_) {
    o.big_ = nullptr;
    o.num_ = 0;
    o.den_ = 1;
  }
  Rational& operator=(const Rational& o) {
    if (this == &o) return *this;
    if (o.big_) {
      if (!big_) {
        big_ = new __mpq_struct;
        mpq_init(big_);
      }
      mpq_set(big_, o.big_);
    } else {
      release();
      num_ = o.num_;
      den_ = o.den_;
    }
    return *this;
  }
  Rational& operator=(Rational&& o) noexcept {
    if (this == &o) return *this;
    release();
    num_ = o.num_;
    den_ = o.den_;
    big_ = o.big_;
    o.big_ = nullptr;
    o.num_ = 0;
    o.den_ = 1;
    return *this;
  }
  ~Rational() { release(); }

  // Accepts "p", "p/q" and finite decimals such as "-1.25".
  static Rational parse(std::string_view s) {
    std::string t(s);
    while (!t.empty() && (t.back() == ' ' || t.back() == '\t' || t.back() == '\r')) t.pop_back();
    size_t b = 0;
    while (b < t.size() && (t[b] == ' ' || t[b] == '\t')) ++b;
    t = t.substr(b);
    if (t.empty()) throw std::invalid_argument("empty rational literal");
    auto digits = [](std::string_view x, bool allow_sign) {
      size_t i = 0;
      if (allow_sign && i < x.size() && (x[i] == '-' || x[i] == '+')) ++i;
      if (i == x.size()) return false;
      for (; i < x.size(); ++i)
        if (x[i] < '0' || x[i] > '9') return false;
      return true;
    };
    std::string num, den = "1";
    if (auto slash = t.find('/'); slash != std::string::npos) {
      num = t.substr(0, slash);
      den = t.substr(slash + 1);
      if (!digits(num, true) || !digits(den, false))
        throw std::invalid_argument("malformed rational literal '" + t + "'");
    } else if (auto dot = t.find('.'); dot != std::string::npos) {
      std::string ip = t.substr(0, dot), fp = t.substr(dot + 1);
      std::string sign;
      if (!ip.empty() && (ip[0] == '-' || ip[0] == '+')) {
        sign = ip.substr(0, 1);
        ip = ip.substr(1);
      }
      if (ip.empty()) ip = "0";
      if (fp.empty() || !digits(ip, false) || !digits(fp, false))
        throw std::invalid_argument("malformed rational literal '" + t + "'");
      num = sign + ip + fp;
      den = "1" + std::string(fp.size(), '0');
    } else {
      num = t;
      if (!digits(num, true)) throw std::invalid_argument("malformed rational literal '" + t + "'");
    }
    if (!num.empty() && num[0] == '+') num = num.substr(1);
    mpq_t q;
    mpq_init(q);
    std::string lit = num + "/" + den;
    if (mpq_set_str(q, lit.c_str(), 10) != 0) {
      mpq_clear(q);
      throw std::invalid_argument("malformed rational literal '" + t + "'");
    }
    if (mpz_sgn(mpq_denref(q)) == 0) {
      mpq_clear(q);
      throw std::invalid_argument("zero denominator in '" + t + "'");
    }
    mpq_canonicalize(q);
    Rational r;
    r.adopt(q);
    return r;
  }

  bool is_zero() const noexcept { return !big_ && num_ == 0; }
  bool is_one() const noexcept { return !big_ && num_ == 1 && den_ == 1; }
  int sign() const noexcept {
    if (big_) return mpq_sgn(big_);
    return (num_ > 0) - (num_ < 0);
  }
  bool is_integer() const noexcept {
    return big_ ? mpz_cmp_ui(mpq_denref(big_), 1) == 0 : den_ == 1;
  }
  bool is_small() const noexcept { return big_ == nullptr; }
  // Only meaningful for inline values.
  std::int64_t small_num() const noexcept { return num_; }
  std::int64_t small_den() const noexcept { return den_; }

  Rational numerator() const {
    if (!big_) return Rational(static_cast<long long>(num_));
    mpq_t q;
    mpq_init(q);
    mpq_set_z(q, mpq_numref(big_));
    Rational r;
    r.adopt(q);
    return r;
  }
  Rational denominator() const {
    if (!big_) return Rational(static_cast<long long>(den_));
    mpq_t q;
    mpq_init(q);
    mpq_set_z(q, mpq_denref(big_));
    Rational r;
    r.adopt(q);
    return r;
  }

  Rational operator-() const {
    if (!big_) {
      Rational r;
      r.num_ = -num_;
      r.den_ = den_;
      return r;
    }
    mpq_t q;
    mpq_init(q);
    mpq_neg(q, big_);
    Rational r;
    r.adopt(q);
    return r;
  }

  Rational inverse() const {
    if (is_zero()) throw std::domain_error("Rational: inverse of zero");
    if (!big_) {
      Rational r;
      r.num_ = num_ < 0 ? -den_ : den_;
      r.den_ = num_ < 0 ? -num_ : num_;
      return r;
    }
    mpq_t q;
    mpq_init(q);
    mpq_inv(q, big_);
    Rational r;
    r.adopt(q);
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      Rational r;
      if (a.den_ == 1 && b.den_ == 1) {
        r.set_i128(static_cast<__int128>(a.num_) + b.num_, 1, true);
      } else if (a.den_ == b.den_) {
        r.set_i128(static_cast<__int128>(a.num_) + b.num_, a.den_);
      } else {
        __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
        __int128 d = static_cast<__int128>(a.den_) * b.den_;
        r.set_i128(n, d);
      }
      return r;
    }
    return big_op(a, b, mpq_add);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      Rational r;
      if (a.den_ == 1 && b.den_ == 1) {
        r.set_i128(static_cast<__int128>(a.num_) - b.num_, 1, true);
      } else if (a.den_ == b.den_) {
        r.set_i128(static_cast<__int128>(a.num_) - b.num_, a.den_);
      } else {
        __int128 n = static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_;
        __int128 d = static_cast<__int128>(a.den_) * b.den_;
        r.set_i128(n, d);
      }
      return r;
    }
    return big_op(a, b, mpq_sub);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.num_ == 0 || b.num_ == 0) return Rational();
      // Cross-cancel first so the product is already in lowest terms.
      std::int64_t g1 = gcd64(a.num_, b.den_), g2 = gcd64(b.num_, a.den_);
      __int128 n = static_cast<__int128>(a.num_ / g1) * (b.num_ / g2);
      __int128 d = static_cast<__int128>(a.den_ / g2) * (b.den_ / g1);
      Rational r;
      r.set_i128(n, d, true);
      return r;
    }
    return big_op(a, b, mpq_mul);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("Rational: division by zero");
    if (!a.big_ && !b.big_) return a * b.inverse();
    return big_op(a, b, mpq_div);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.big_ && b.big_) return mpq_equal(a.big_, b.big_) != 0;
    return false;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      __int128 l = static_cast<__int128>(a.num_) * b.den_;
      __int128 r = static_cast<__int128>(b.num_) * a.den_;
      return l <=> r;
    }
    mpq_t x, y;
    a.to_mpq(x);
    b.to_mpq(y);
    int c = mpq_cmp(x, y);
    mpq_clear(x);
    mpq_clear(y);
    return c <=> 0;
  }

  // Floor of an integer quotient; both operands must be integers.
  static Rational floor_div(const Rational& a, const Rational& b) {
    if (!a.is_integer() || !b.is_integer()) throw std::domain_error("floor_div: non-integer operand");
    if (b.is_zero()) throw std::domain_error("floor_div: division by zero");
    if (!a.big_ && !b.big_) {
      std::int64_t q = a.num_ / b.num_, r = a.num_ % b.num_;
      if (r != 0 && ((r < 0) != (b.num_ < 0))) --q;
      return Rational(static_cast<long long>(q));
    }
    mpz_t x, y, q;
    mpz_init(x);
    mpz_init(y);
    mpz_init(q);
    a.num_to_mpz(x);
    b.num_to_mpz(y);
    mpz_fdiv_q(q, x, y);
    mpq_t out;
    mpq_init(out);
    mpq_set_z(out, q);
    mpz_clear(x);
    mpz_clear(y);
    mpz_clear(q);
    Rational r;
    r.adopt(out);
    return r;
  }

  // Greatest common divisor of two integers, nonnegative.
  static Rational gcd(const Rational& a, const Rational& b) {
    if (!a.is_integer() || !b.is_integer()) throw std::domain_error("gcd: non-integer operand");
    if (!a.big_ && !b.big_) {
      std::uint64_t x = a.num_ < 0 ? -static_cast<std::uint64_t>(a.num_) : a.num_;
      std::uint64_t y = b.num_ < 0 ? -static_cast<std::uint64_t>(b.num_) : b.num_;
      while (y) {
        std::uint64_t t = x % y;
        x = y;
        y = t;
      }
      return Rational(static_cast<long long>(x));
    }
    mpz_t x, y;
    mpz_init(x);
    mpz_init(y);
    a.num_to_mpz(x);
    b.num_to_mpz(y);
    mpz_gcd(x, x, y);
    mpq_t out;
    mpq_init(out);
    mpq_set_z(out, x);
    mpz_clear(x);
    mpz_clear(y);
    Rational r;
    r.adopt(out);
    return r;
  }

  std::string str() const {
    if (!big_) {
      if (den_ == 1) return std::to_string(num_);
      return std::to_string(num_) + "/" + std::to_string(den_);
    }
    char* p = mpq_get_str(nullptr, 10, big_);
    std::string s(p);
    void (*freefunc)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefunc);
    freefunc(p, std::char_traits<char>::length(p) + 1);
    return s;
  }

  std::size_t hash() const noexcept {
    if (!big_) return std::hash<std::int64_t>{}(num_) * 1000003u ^ std::hash<std::int64_t>{}(den_);
    return std::hash<std::string>{}(str());
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  mpq_ptr big_ = nullptr;

  static std::int64_t gcd64(std::int64_t a, std::int64_t b) noexcept {
    std::uint64_t x = a < 0 ? -static_cast<std::uint64_t>(a) : a;
    std::uint64_t y = b < 0 ? -static_cast<std::uint64_t>(b) : b;
    while (y) {
      std::uint64_t t = x % y;
      x = y;
      y = t;
    }
    return static_cast<std::int64_t>(x == 0 ? 1 : x);
  }

  static unsigned __int128 gcd128(unsigned __int128 x, unsigned __int128 y) noexcept {
    while (y) {
      if ((x >> 64) == 0 && (y >> 64) == 0) {
        std::uint64_t a = static_cast<std::uint64_t>(x), b = static_cast<std::uint64_t>(y);
        while (b) {
          std::uint64_t t = a % b;
          a = b;
          b = t;
        }
        return a;
      }
      unsigned __int128 t = x % y;
      x = y;
      y = t;
    }
    return x;
  }

  static bool fits(__int128 v) noexcept {
    return v > std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
  }

  void release() noexcept {
    if (big_) {
      mpq_clear(big_);
      delete big_;
      big_ = nullptr;
    }
  }

  // d != 0. When `reduced` is set the caller guarantees gcd(n, d) = 1.
  void set_i128(__int128 n, __int128 d, bool reduced = false) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    if (!reduced && n != 0) {
      unsigned __int128 un = n < 0 ? -static_cast<unsigned __int128>(n) : static_cast<unsigned __int128>(n);
      unsigned __int128 g = gcd128(un, static_cast<unsigned __int128>(d));
      if (g > 1) {
        n /= static_cast<__int128>(g);
        d /= static_cast<__int128>(g);
      }
    }
    if (n == 0) d = 1;
    if (fits(n) && fits(d)) {
      release();
      num_ = static_cast<std::int64_t>(n);
      den_ = static_cast<std::int64_t>(d);
      return;
    }
    mpq_t q;
    mpq_init(q);
    set_mpz_i128(mpq_numref(q), n);
    set_mpz_i128(mpq_denref(q), d);
    adopt(q);
  }

  static void set_mpz_i128(mpz_ptr z, __int128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    std::uint64_t words[2] = {static_cast<std::uint64_t>(u), static_cast<std::uint64_t>(u >> 64)};
    mpz_import(z, 2, -1, sizeof(std::uint64_t), 0, 0, words);
    if (neg) mpz_neg(z, z);
  }

  // Takes ownership of a canonical mpq and demotes it when it fits inline.
  void adopt(mpq_t q) {
    if (mpz_fits_slong_p(mpq_numref(q)) && mpz_fits_slong_p(mpq_denref(q))) {
      long n = mpz_get_si(mpq_numref(q)), d = mpz_get_si(mpq_denref(q));
      if (n != std::numeric_limits<long>::min()) {
        release();
        num_ = n;
        den_ = d;
        mpq_clear(q);
        return;
      }
    }
    if (!big_) {
      big_ = new __mpq_struct;
      mpq_init(big_);
    }
    mpq_swap(big_, q);
    mpq_clear(q);
    num_ = 0;
    den_ = 1;
  }

  void to_mpq(mpq_t out) const {
    mpq_init(out);
    if (big_) {
      mpq_set(out, big_);
    } else {
      mpz_set_si(mpq_numref(out), num_);
      mpz_set_si(mpq_denref(out), den_);
    }
  }

  void num_to_mpz(mpz_t out) const {
    if (big_)
      mpz_set(out, mpq_numref(big_));
    else
      mpz_set_si(out, num_);
  }

  template <class Op>
  static Rational big_op(const Rational& a, const Rational& b, Op op) {
    mpq_t x, y, z;
    a.to_mpq(x);
    b.to_mpq(y);
    mpq_init(z);
    op(z, x, y);
    mpq_clear(x);
    mpq_clear(y);
    Rational r;
    r.adopt(z);
    return r;
  }
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

}  // namespace hypic

template <>
struct std::hash<hypic::Rational> {
  std::size_t operator()(const hypic::Rational& r) const noexcept { return r.hash(); }
};
