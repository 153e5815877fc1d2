#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hypic/io.hpp"
#include "hypic/report.hpp"

namespace hypic {

struct VerifyOptions {
  int D = 0;
  std::vector<int> sigma;
  std::uint64_t seed = 0;
  bool force = false;
};

namespace detail {

class Suite {
 public:
  explicit Suite(report::Verify& r) : r_(r) {}

  // Runs f; an empty string means pass. Exceptions count as failures.
  void check(const std::string& name, const std::function<std::string()>& f) {
    try {
      std::string why = f();
      r_.checks.push_back({name, why.empty() ? "pass" : "fail", why});
    } catch (const std::exception& e) {
      r_.checks.push_back({name, "fail", std::string("exception: ") + e.what()});
    }
  }
  void skip(const std::string& name, const std::string& why) { r_.checks.push_back({name, "skipped", why}); }

 private:
  report::Verify& r_;
};

// f-vector of NBC sets by the rank criterion: an independent S contains a
// broken circuit iff some j lies in the span of the members of S after j.
inline std::vector<long long> nbc_by_rank(const Arrangement& arr, const std::vector<int>& sigma) {
  const std::size_t n = arr.size();
  std::vector<int> pos(n);
  for (std::size_t t = 0; t < n; ++t) pos[sigma[t]] = static_cast<int>(t);
  std::vector<long long> f(arr.d + 1, 0);
  for (IndexSet s = 0; s <= full_set(n); ++s) {
    if (arr.rank_of(s) != static_cast<std::size_t>(set_size(s))) {
      if (s == full_set(n)) break;
      continue;
    }
    bool nbc = true;
    for (std::size_t j = 0; j < n && nbc; ++j) {
      IndexSet later = 0;
      for (int i : members(s))
        if (pos[i] > pos[j]) later |= IndexSet{1} << i;
      if (contains(later, static_cast<int>(j))) continue;
      if (arr.rank_of(later | (IndexSet{1} << j)) == arr.rank_of(later)) nbc = false;
    }
    if (nbc) ++f[set_size(s)];
    if (s == full_set(n)) break;
  }
  while (f.size() > 1 && f.back() == 0) f.pop_back();
  return f;
}

inline std::string vec_str(const std::vector<long long>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

inline std::string int_str(const std::vector<int>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

template <class R>
std::string round_trip(const R& r) {
  std::string a = report::serialize(r);
  std::string b = report::serialize(report::parse<R>(a));
  return a == b ? "" : "serialize -> parse -> serialize changed the text";
}

// Claimed sheaf dump versus the invariants it must satisfy.
inline void check_claimed(Suite& s, const nlohmann::json& claim, const FlatLattice& lat, const report::Mes& actual) {
  report::Mes c;
  try {
    c = claim.get<report::Mes>();
  } catch (const std::exception& e) {
    s.check("claimed_sheaf.schema", [&] { return std::string("unreadable sheaf dump: ") + e.what(); });
    return;
  }
  s.check("claimed_sheaf.schema", [&]() -> std::string {
    if (c.elements.size() != static_cast<std::size_t>(lat.size()))
      return std::to_string(c.elements.size()) + " elements, lattice has " + std::to_string(lat.size());
    for (int x = 0; x < lat.size(); ++x)
      if (c.elements[x].stalk.dims.size() != static_cast<std::size_t>(c.D / 2 + 1))
        return "stalk at " + c.elements[x].element + " is not truncated at D = " + std::to_string(c.D);
    for (int x = 0; x < lat.size(); ++x)
      if (c.elements[x].element != set_str(lat.flat(x)))
        return "element " + std::to_string(x) + " is " + c.elements[x].element + ", expected " + set_str(lat.flat(x));
    return "";
  });
  if (c.elements.size() != static_cast<std::size_t>(lat.size())) return;
  auto base = [&](int x) { return polynomial_ring_series(lat.rank(x), c.D); };
  s.check("claimed_sheaf.support_stalk", [&]() -> std::string {
    int x = lat.find(0);
    if (!(c.elements[x].stalk == base(x))) return "stalk at the support is " + c.elements[x].stalk.str() + ", not A";
    return "";
  });
  s.check("claimed_sheaf.free_stalks", [&]() -> std::string {
    for (int x = 0; x < lat.size(); ++x) {
      HilbertSeries h(c.D, {});
      for (int g : c.elements[x].generators) {
        if (g % 2) return "odd generator degree at " + c.elements[x].element;
        h = h + base(x).shifted(g / 2);
      }
      if (!(h == c.elements[x].stalk))
        return "stalk at " + c.elements[x].element + " is " + c.elements[x].stalk.str() + " but generators " +
               int_str(c.elements[x].generators) + " give " + h.str();
    }
    return "";
  });
  s.check("claimed_sheaf.degree_bound", [&]() -> std::string {
    for (int x = 1; x < lat.size(); ++x) {
      int bound = 2 * lat.rank(x);
      for (int g : c.elements[x].generators)
        if (g >= bound) return "stalk generator in degree " + std::to_string(g) + " at " + c.elements[x].element;
      for (int g : c.elements[x].costalk_generators)
        if (g < bound) return "costalk generator in degree " + std::to_string(g) + " at " + c.elements[x].element;
    }
    return "";
  });
  s.check("claimed_sheaf.matches_mes", [&]() -> std::string {
    for (int x = 0; x < lat.size(); ++x)
      if (!(c.elements[x].stalk == actual.elements[x].stalk))
        return "stalk at " + c.elements[x].element + " is " + c.elements[x].stalk.str() + ", the minimal extension sheaf has " +
               actual.elements[x].stalk.str();
    return "";
  });
}

}  // namespace detail

inline report::Verify run_verify(const io::Input& in, const VerifyOptions& o) {
  report::Verify r;
  r.D = o.D;
  r.seed = o.seed;
  detail::Suite s(r);
  const Arrangement& arr = in.arr;
  const int D = o.D;
  const int d = static_cast<int>(arr.d);
  FlatLattice lat(arr);
  const bool central = arr.is_central();
  const bool simple = is_simple(arr, lat);

  s.check("flats.graded", [&]() -> std::string {
    if (lat.flat(0) != 0 || lat.rank(0) != 0) return "bottom flat is not the empty set";
    for (int x = 0; x < lat.size(); ++x)
      for (int y : lat.lower_covers(x))
        if (lat.rank(y) + 1 != lat.rank(x)) return "cover " + set_str(lat.flat(y)) + " < " + set_str(lat.flat(x)) + " skips a rank";
    return "";
  });
  s.check("flats.intervals", [&]() -> std::string {
    for (IndexSet f : lat.flats()) {
      Arrangement loc = localization(arr, f), res = restriction(arr, f);
      FlatLattice ll(loc), lr(res);
      int below = 0, above = 0;
      for (IndexSet e : lat.flats()) {
        below += is_subset(e, f);
        above += is_subset(f, e);
      }
      if (ll.size() != below) return "localization at " + set_str(f) + " has the wrong lattice";
      if (lr.size() != above) return "restriction to " + set_str(f) + " has the wrong lattice";
    }
    return "";
  });

  auto c = matroid_complex(arr);
  s.check("matroid.h_vector", [&]() -> std::string {
    auto h = h_polynomial(c, d);
    long long sum = 0;
    for (auto x : h) {
      if (x < 0) return "negative entry in " + detail::vec_str(h);
      sum += x;
    }
    if (sum != static_cast<long long>(c.facets().size())) return "h(1) differs from the number of bases";
    return "";
  });

  std::vector<std::vector<int>> orders{o.sigma};
  {
    std::vector<int> rev(o.sigma.rbegin(), o.sigma.rend());
    orders.push_back(rev);
    std::mt19937_64 rng(o.seed);
    for (int t = 0; t < 3; ++t) {
      std::vector<int> p = o.sigma;
      std::shuffle(p.begin(), p.end(), rng);
      orders.push_back(p);
    }
  }
  auto hbc = trim(h_polynomial(broken_circuit_complex(c, o.sigma), d));
  s.check("nbc.order_independence", [&]() -> std::string {
    for (auto& sigma : orders) {
      auto h = trim(h_polynomial(broken_circuit_complex(c, sigma), d));
      if (h != hbc) return "order " + detail::int_str(report::one_based(sigma)) + " gives " + detail::vec_str(h);
    }
    return "";
  });
  if (arr.size() > 16)
    s.skip("nbc.rank_enumeration", "more than 16 hyperplanes");
  else
    s.check("nbc.rank_enumeration", [&]() -> std::string {
    for (auto& sigma : orders) {
      auto f = f_vector(broken_circuit_complex(c, sigma));
      auto g = detail::nbc_by_rank(arr, sigma);
      if (f != g) return "broken circuit complex has f = " + detail::vec_str(f) + ", rank criterion gives " + detail::vec_str(g);
    }
    return "";
  });
  if (central && d > 0)
    s.check("nbc.degree_below_rank", [&]() -> std::string {
      return static_cast<int>(hbc.size()) - 1 < d ? "" : "h^bc has degree " + std::to_string(hbc.size() - 1);
    });
  s.check("face_ring.hilbert", [&]() -> std::string {
    auto bc = broken_circuit_complex(c, o.sigma);
    for (const SimplicialComplex* k : {&c, &bc}) {
      auto a = face_ring(*k, D)->hilbert(), b = face_count_series(*k, D);
      if (!(a == b)) return "quotient ring " + a.str() + " vs face count " + b.str();
    }
    return "";
  });

  MesData m = mes_of(arr, D);
  report::Mes mr = report::mes(m);
  s.check("mes.pure", [&] { return mr.pure ? "" : std::string("minimal extension sheaf is not pure"); });
  s.check("mes.degree_bound", [&] { return mr.failure; });
  if (central) {
    s.check("mes.sections_equal_R", [&]() -> std::string {
      auto rh = ring_R(arr, D)->hilbert();
      return mr.sections == rh ? "" : "sections " + mr.sections.str() + " vs R " + rh.str();
    });
    s.check("ih.equivariant_free", [&]() -> std::string {
      auto expect = HilbertSeries::rational(ih_poincare(arr, o.sigma), d, D);
      return mr.sections == expect ? "" : "sections " + mr.sections.str() + " vs h^bc(t^2)/(1-t^2)^d " + expect.str();
    });
    auto model = [&](const char* name, const RingSheaf& rs) {
      s.check(name, [&]() -> std::string {
        if (!is_pure(rs.sheaf, *rs.lp)) return "not pure";
        auto dc = mes_degree_check(rs.sheaf, lat);
        if (!dc.ok) return dc.failure;
        for (int x = 0; x < lat.size(); ++x)
          if (!(rs.sheaf.stalks[x].hilbert() == mr.elements[x].stalk)) return "stalk at " + set_str(lat.flat(x)) + " differs from the MES";
        return "";
      });
    };
    model("sheaf_R.minimal_extension", sheaf_R(arr, D));
    model("sheaf_Rbc.minimal_extension", sheaf_Rbc(arr, o.sigma, D));
    s.check("ideal_identity", [&]() -> std::string {
      for (IndexSet f : lat.flats())
        if (!check_ideal_identity(arr, f, D)) return "fails at " + set_str(f);
      return "";
    });
  } else {
    for (auto n : {"mes.sections_equal_R", "ih.equivariant_free", "sheaf_R.minimal_extension", "sheaf_Rbc.minimal_extension",
                   "ideal_identity"})
      s.skip(n, "arrangement is not central");
  }

  report::Decompose dr = report::decompose(arr, D);
  s.check("decomposition", [&] { return dr.failure; });

  report::Morse morse = report::morse(arr, m);
  if (simple)
    s.check("morse.free", [&]() -> std::string {
      return morse.certified ? "" : "relative sections are not free of rank " + std::to_string(morse.vertices) + " in degree " +
                                        std::to_string(2 * morse.d);
    });
  else
    s.skip("morse.free", "arrangement is not simple");

  std::optional<report::Gmes> gr;
  if (!central) {
    s.skip("gmes", "arrangement is not central");
  } else if (!is_unimodular(arr) && !o.force) {
    s.skip("gmes", "arrangement is not unimodular");
  } else {
    s.check("gmes", [&]() -> std::string {
      gr = report::gmes(arr, D, o.force);
      for (auto& cnd : gr->conditions)
        if (!cnd.pass) return cnd.name + ": " + cnd.detail;
      if (!simple && gr->hat_A_passes) return "A-hat passes although the arrangement is not simple";
      if (!gr->pushforward_ok) return "pushforward: " + gr->pushforward_failure;
      return "";
    });
  }

  if (in.sheaf) detail::check_claimed(s, *in.sheaf, lat, mr);

  s.check("report.round_trip", [&]() -> std::string {
    std::string why;
    auto keep = [&](std::string w) {
      if (why.empty()) why = std::move(w);
    };
    keep(detail::round_trip(report::flats(arr, o.sigma)));
    keep(detail::round_trip(mr));
    keep(detail::round_trip(dr));
    keep(detail::round_trip(morse));
    if (central) keep(detail::round_trip(report::ih(arr, o.sigma, D)));
    if (gr) keep(detail::round_trip(*gr));
    keep(detail::round_trip(r));
    return why;
  });

  r.passed = std::none_of(r.checks.begin(), r.checks.end(), [](const report::Check& k) { return k.status == "fail"; });
  return r;
}

}  // namespace hypic
