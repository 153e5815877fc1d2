#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypic/gmes.hpp"
#include "hypic/invariants.hpp"

// Hilbert series are written in polynomial degree: dims[k] is the dimension
// in cohomological degree 2k. Generator degrees are cohomological.
namespace hypic {

inline void to_json(nlohmann::json& j, const HilbertSeries& h) {
  j = nlohmann::json{{"D", h.D}, {"dims", h.dims}};
  if (!h.closed_form.empty()) j["closed_form"] = h.closed_form;
}

inline void from_json(const nlohmann::json& j, HilbertSeries& h) {
  h.D = j.at("D").get<int>();
  h.dims = j.at("dims").get<std::vector<long long>>();
  h.closed_form = j.contains("closed_form") ? j.at("closed_form").get<std::string>() : "";
}

namespace report {

using Json = nlohmann::json;

inline std::vector<int> flat_members(IndexSet f) {
  std::vector<int> m;
  for (int i : members(f)) m.push_back(i + 1);
  return m;
}

struct FlatEntry {
  std::vector<int> flat;
  int rank = 0;
  std::vector<int> covers;  // positions of the lower covers in the flat list
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FlatEntry, flat, rank, covers)

struct Flats {
  std::size_t dim = 0;
  std::vector<std::string> labels;
  bool central = false, simple = false, unimodular = false;
  std::vector<int> order;
  std::vector<FlatEntry> flats;
  std::vector<long long> matroid_f, matroid_h, nbc_f, nbc_h;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Flats, dim, labels, central, simple, unimodular, order, flats, matroid_f, matroid_h,
                                   nbc_f, nbc_h)

struct StalkPoincare {
  std::vector<int> flat;
  std::vector<long long> poincare;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(StalkPoincare, flat, poincare)

struct Ih {
  std::vector<int> order;
  std::vector<long long> poincare;  // coefficients of t^0, t^2, ...
  std::string poincare_str;
  HilbertSeries equivariant;
  std::vector<StalkPoincare> stalks;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Ih, order, poincare, poincare_str, equivariant, stalks)

struct StalkEntry {
  std::string element;
  HilbertSeries stalk;
  std::vector<int> generators;
  std::vector<int> costalk_generators;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(StalkEntry, element, stalk, generators, costalk_generators)

// The sheaf dump of a minimal extension sheaf on the lattice of flats.
struct Mes {
  int D = 0;
  std::string support;
  std::vector<StalkEntry> elements;
  HilbertSeries sections;
  bool pure = false;
  bool degree_check = false;
  std::string failure;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Mes, D, support, elements, sections, pure, degree_check, failure)

struct SummandEntry {
  std::vector<int> flat;
  std::vector<std::size_t> multiplicity;  // multiplicity[k]: copies of L_F shifted by 2k
  std::size_t costalk_rank = 0;
  std::size_t bases = 0;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SummandEntry, flat, multiplicity, costalk_rank, bases)

struct Decompose {
  int D = 0;
  bool pure = false, concentrated = false, costalks_ok = false, hilbert_identity = false;
  std::vector<SummandEntry> flats;
  std::string failure;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Decompose, D, pure, concentrated, costalks_ok, hilbert_identity, flats, failure)

struct Morse {
  int D = 0;
  int d = 0;
  int vertices = 0;
  bool simple = false;
  HilbertSeries restricted, relative;
  std::vector<int> generators;
  bool free = false, certified = false;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Morse, D, d, vertices, simple, restricted, relative, generators, free, certified)

struct Condition {
  std::string name;
  bool pass = false;
  std::string detail;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Condition, name, pass, detail)

struct GmesFlat {
  std::vector<int> flat;
  std::vector<int> generators;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(GmesFlat, flat, generators)

struct GmesStalk {
  std::string element;
  HilbertSeries stalk;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(GmesStalk, element, stalk)

struct Gmes {
  int D = 0;
  bool unimodular = false;
  std::string warning;
  bool simple = false;
  std::vector<Condition> conditions;
  std::vector<GmesFlat> flats;
  std::vector<GmesStalk> stalks;
  bool hat_A_passes = false;
  bool pushforward_ok = false;
  std::string pushforward_failure;
  bool passed = false;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Gmes, D, unimodular, warning, simple, conditions, flats, stalks, hat_A_passes,
                                   pushforward_ok, pushforward_failure, passed)

struct Check {
  std::string name;
  std::string status;  // pass, fail or skipped
  std::string detail;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Check, name, status, detail)

struct Verify {
  int D = 0;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  bool passed = false;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Verify, D, seed, checks, passed)

// Canonical text: keys sorted, two-space indent, trailing newline.
template <class R>
std::string serialize(const R& r) {
  return Json(r).dump(2) + "\n";
}

template <class R>
R parse(const std::string& text) {
  return Json::parse(text).get<R>();
}

// ---------------------------------------------------------------------------
// Builders.

inline std::vector<int> one_based(const std::vector<int>& sigma) {
  std::vector<int> o;
  for (int i : sigma) o.push_back(i + 1);
  return o;
}

inline Flats flats(const Arrangement& arr, const std::vector<int>& sigma) {
  Flats r;
  FlatLattice lat(arr);
  r.dim = arr.d;
  r.labels = arr.labels;
  r.central = is_central(arr);
  r.simple = is_simple(arr, lat);
  r.unimodular = is_unimodular(arr);
  r.order = one_based(sigma);
  for (int x = 0; x < lat.size(); ++x) r.flats.push_back({flat_members(lat.flat(x)), lat.rank(x), lat.lower_covers(x)});
  auto c = matroid_complex(arr);
  auto bc = broken_circuit_complex(c, sigma);
  r.matroid_f = f_vector(c);
  r.matroid_h = h_polynomial(c, static_cast<int>(arr.d));
  r.nbc_f = f_vector(bc);
  r.nbc_h = trim(h_polynomial(bc, static_cast<int>(arr.d)));
  return r;
}

inline Ih ih(const Arrangement& arr, const std::vector<int>& sigma, int D) {
  Ih r;
  r.order = one_based(sigma);
  r.poincare = ih_poincare(arr, sigma);
  r.poincare_str = q_poly_in_t(r.poincare);
  r.equivariant = equivariant_ih_hilbert(arr, D);
  FlatLattice lat(arr);
  for (IndexSet f : lat.flats()) r.stalks.push_back({flat_members(f), ic_stalk_poincare(arr, f, sigma)});
  return r;
}

inline Mes mes(const MesData& m) {
  Mes r;
  const PosetSheaf& sh = m.mes.sheaf;
  r.D = sh.D;
  r.support = sh.poset->name(m.mes.support);
  auto rig = check_rigidity(sh, m.mes.support);
  for (int x = 0; x < sh.poset->size(); ++x)
    r.elements.push_back({sh.poset->name(x), sh.stalks[x].hilbert(), rig.stalk_generators[x], rig.costalk_generators[x]});
  r.sections = equivariant_ih_hilbert(m);
  r.pure = is_pure(sh, *m.lp);
  auto dc = mes_degree_check(sh, m.lattice);
  r.degree_check = dc.ok;
  r.failure = dc.failure;
  return r;
}

inline Decompose decompose(const Arrangement& arr, int D) {
  Decompose r;
  auto d = decomposition_report(arr, D);
  FlatLattice lat(arr);
  r.D = D;
  r.pure = d.pure;
  r.concentrated = d.concentrated;
  r.costalks_ok = d.costalks_ok;
  r.hilbert_identity = d.table.hilbert_identity;
  r.failure = d.failure;
  for (int x = 0; x < lat.size() && d.pure; ++x)
    r.flats.push_back({flat_members(lat.flat(x)), d.table.multiplicity[x], d.costalk_rank[x], d.bases[x]});
  return r;
}

inline Morse morse(const Arrangement& arr, const MesData& m) {
  Morse r;
  auto md = morse_sections(m);
  r.D = m.mes.sheaf.D;
  r.d = md.d;
  r.vertices = md.vertices;
  r.simple = is_simple(arr, m.lattice);
  r.restricted = md.restricted;
  r.relative = md.relative.module.hilbert();
  r.generators = md.freeness.generator_degrees();
  r.free = md.freeness.free;
  r.certified = md.certified;
  return r;
}

inline Gmes gmes(const Arrangement& arr, int D, bool force) {
  Gmes r;
  auto ep = extended_poset(arr, force);
  r.D = D;
  r.unimodular = ep.unimodular;
  if (!ep.unimodular)
    r.warning = "arrangement is not unimodular; the GMES statements are not claimed here and this run is exploratory";
  const FlatLattice& lat = *ep.lattice;
  r.simple = is_simple(arr, lat);
  auto a = hat_A(ep, D);
  auto rr = hat_R(ep, D);
  auto rep = verify_gmes(rr, a);
  const std::pair<const char*, const GmesCondition*> conds[] = {
      {"condition 1", &rep.c1}, {"condition 2", &rep.c2}, {"condition 3", &rep.c3},
      {"condition 4", &rep.c4}, {"minimality", &rep.minimal}};
  for (auto& [name, c] : conds) r.conditions.push_back({name, c->pass, c->detail});
  for (int f = 0; f < lat.size(); ++f) r.flats.push_back({flat_members(lat.flat(f)), rep.generator_degrees[f]});
  for (int x = 0; x < ep.size(); ++x) r.stalks.push_back({ep.poset->name(x), rep.stalk_hilbert[x]});
  r.hat_A_passes = verify_gmes(a, a).passed();
  auto pf = compare_pushforward(ep, D);
  r.pushforward_ok = pf.ok;
  r.pushforward_failure = pf.failure;
  r.passed = rep.passed() && pf.ok && (r.simple || !r.hat_A_passes);
  return r;
}

}  // namespace report
}  // namespace hypic
