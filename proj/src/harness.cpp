#include "sumlab/harness.hpp"

#include "sumlab/energy.hpp"
#include "sumlab/geometry.hpp"
#include "sumlab/incidence.hpp"
#include "sumlab/parallel.hpp"
#include "sumlab/proximity.hpp"

#include <toml.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sumlab {

namespace {

using nlohmann::json;

Rat as_rat(std::uint64_t v) { return Rat(static_cast<unsigned long>(v)); }

Exponent ex(long num, long den, long eps = 0) { return Exponent{rat(num, den), Rat(eps)}; }

BoundTerm term(Exponent a, Exponent b = {}, Exponent aa = {}, Exponent bb = {}) { return BoundTerm{{a, b, aa, bb}}; }

std::uint64_t card(const Cards& c, int i) {
  switch (i) {
    case kA: return c.a;
    case kB: return c.b;
    case kAA: return c.aa;
    default: return c.bb;
  }
}

json spec_json(const PolySpec& s) {
  return {{"name", s.name}, {"g", format_unipoly(s.g)}, {"p", format_unipoly(s.p)}, {"h", format_unipoly(s.h)}};
}

PolySpec spec_from_json(const json& j) {
  return make_spec(j.at("g").get<std::string>(), j.at("p").get<std::string>(), j.at("h").get<std::string>(),
                   j.value("name", std::string()));
}

std::string spec_label(const PolySpec& s) { return s.name.empty() ? s.describe() : s.name; }

json claims_json(const std::vector<ClaimReport>& claims) {
  json out = json::array();
  for (const ClaimReport& c : claims) out.push_back(c.to_json());
  return out;
}

bool enabled(const SuiteSettings& s, const std::string& name, std::uint64_t size, json& skipped) {
  if (std::find(s.verifiers.begin(), s.verifiers.end(), name) == s.verifiers.end()) return false;
  auto it = s.max_size.find(name);
  if (it != s.max_size.end() && size > it->second) {
    skipped.push_back(name);
    return false;
  }
  return true;
}

// Longest monotone piece of each of the `levels` heaviest level sets of f on A x B.
std::vector<std::vector<Point2>> heavy_monotone_sets(const PolySpec& spec, const FiniteSet& A, const FiniteSet& B,
                                                      std::size_t levels) {
  std::map<Rat, std::vector<Point2>> by_value;
  for (const Rat& a : A)
    for (const Rat& b : B) by_value[eval_f(spec, a, b)].push_back({a, b});
  std::vector<const std::vector<Point2>*> order;
  for (const auto& [v, pts] : by_value) order.push_back(&pts);
  // stable: ties keep the smaller level value
  std::stable_sort(order.begin(), order.end(), [](auto* x, auto* y) { return x->size() > y->size(); });
  std::vector<std::vector<Point2>> out;
  for (std::size_t i = 0; i < order.size() && i < levels; ++i) {
    MonotoneDecomposition d = monotone_decompose(*order[i]);
    if (!d.pieces.empty()) out.push_back(d.pieces.front().points);
  }
  return out;
}

// Worst phi-to-aprimes count over a1 at up to 16 spread positions, each against
// a2 = a1, the farthest a2 meeting the hypothesis, and eight positions in between.
ClaimReport worst_phi_claim(const FiniteSet& A, const Rat& t) {
  const std::size_t n = A.size();
  const AvgIndexFn ph = phi(A);
  const Rat gap = t * as_rat(ph.ambient.size()) / 8;
  std::set<std::size_t> starts;
  for (std::size_t s = 0; s < 16; ++s) starts.insert(s * (n - 1) / 15);
  std::optional<ClaimReport> worst;
  std::size_t pairs = 0;
  for (std::size_t i : starts) {
    std::size_t far = i;
    while (far + 1 < n && ph.at(far + 1) - ph.at(i) <= gap) ++far;
    std::set<std::size_t> js = {i, far};
    for (std::size_t s = 1; s < 9; ++s) js.insert(i + (far - i) * s / 9);
    for (std::size_t j : js) {
      ClaimReport r = verify_claim_phi_to_aprimes(A, A[i], A[j], t);
      if (r.verdict == Verdict::inapplicable) continue;
      ++pairs;
      if (!worst || r.failed() > worst->failed() || (r.failed() == worst->failed() && r.lhs < worst->lhs)) worst = r;
    }
  }
  if (!worst) return inapplicable("phi-to-aprimes", "|A|=" + std::to_string(n), "no pair meets the hypothesis");
  worst->note = "pairs checked=" + std::to_string(pairs);
  return *worst;
}

std::vector<ClaimReport> host_invariants(const PolySpec& spec, const FiniteSet& B, const Rat& t, json& measured) {
  const std::string inst = "|B|=" + std::to_string(B.size()) + " t=" + to_string(t);
  const StEnergy st = energy_St(spec, B, t);
  std::uint64_t asymmetric = 0;
  for (const auto& [d, m] : st.p_delta.levels)
    if (st.p_delta.multiplicity(-d) != m) ++asymmetric;
  std::vector<ClaimReport> out{decide("hosts-symmetric", inst, as_rat(asymmetric), "==", 0, "levels with |P_d| != |P_-d|")};
  const HostSelection hs = select_hosts(spec, B, t);
  if (hs.empty) {
    out.push_back(inapplicable("hosts-balanced", inst, "S_t is empty"));
    return out;
  }
  std::map<Rat, std::uint64_t> s_levels;
  for (auto [c1, c2] : hs.S) s_levels[spec.h.eval(B[c1]) - spec.h.eval(B[c2])]++;
  std::uint64_t lo = UINT64_MAX, hi = 0, star = 0;
  for (auto [b1, b2] : hs.R) {
    const Rat d = spec.h.eval(B[b2]) - spec.h.eval(B[b1]);
    auto it = s_levels.find(d);
    const std::uint64_t deg = it == s_levels.end() ? 0 : it->second;
    lo = std::min(lo, deg);
    hi = std::max(hi, deg);
    star += deg;
  }
  const std::uint64_t nb = B.size();
  const std::string tag = inst + " m=" + std::to_string(hs.m);
  out.push_back(decide("hosts-balanced", tag, as_rat(hs.R.size()), "==", as_rat(hs.S.size())));
  out.push_back(decide("hosts-degree-lower", tag, as_rat(lo), ">=", as_rat(hs.m)));
  out.push_back(decide("hosts-degree-upper", tag, as_rat(hi), "<=", as_rat(2 * hs.m - 1)));
  out.push_back(decide("hosts-star", tag, as_rat(star), "==", as_rat(hs.st_star)));
  out.push_back(decide("hosts-dyadic", tag, as_rat(hs.st_star) * as_rat(dyadic_class_count(nb * nb)), ">=",
                       as_rat(hs.st)));
  measured["hosts"] = {{"m", hs.m}, {"R", hs.R.size()}, {"S", hs.S.size()}, {"st", hs.st}, {"stStar", hs.st_star}};
  return out;
}

void run_energy(const Instance& inst, InstanceReport& rep) {
  const SuiteSettings& cfg = inst.settings;
  const FiniteSet A = generate(inst.a), B = generate(inst.b);
  const PolySpec& spec = inst.spec;
  const std::uint64_t na = A.size(), nb = B.size(), size = std::max(na, nb);
  const FiniteSet F = image(spec, A, B);
  const EnergyTable Q = energy_Q(spec, A, B);
  const std::uint64_t aa = sumset(A, A).size(), bb = sumset(B, B).size();
  json skipped = json::array();
  json& m = rep.measured;
  m["A"] = na;
  m["B"] = nb;
  m["image"] = F.size();
  m["Q"] = Q.squared_total;
  m["sumsetA"] = aa;
  m["sumsetB"] = bb;
  m["degree"] = spec.degree();

  Rat t;
  if (inst.t_policy == "set_t") {
    const TChoice tc = set_t(na, nb, Q.squared_total, cfg.t_constant);
    t = tc.t;
    m["tChoice"] = {{"C", to_string(tc.C)}, {"unclamped", to_string(tc.unclamped)}, {"aboveOne", tc.above_one},
                    {"belowFloor", tc.below_floor}};
  } else {
    t = parse_rat(inst.t_policy);
  }
  m["t"] = to_string(t);
  const std::string tag = spec_label(spec) + " |A|=" + std::to_string(na) + " |B|=" + std::to_string(nb);
  auto& claims = rep.claims;

  if (enabled(cfg, "cauchy-schwarz", size, skipped)) {
    claims.push_back(decide("cauchy-schwarz", tag, as_rat(Q.squared_total) * as_rat(F.size()), ">=",
                            as_rat(na * na) * as_rat(nb * nb)));
    claims.push_back(decide("image-size", tag, as_rat(F.size()), "<=", as_rat(na) * as_rat(nb)));
  }
  if (enabled(cfg, "remove-bad", size, skipped)) {
    const std::uint64_t bad = count_Q_bad(spec, A, B);
    const Rat d = spec.degree();
    m["Qbad"] = bad;
    claims.push_back(decide("remove-bad", tag, as_rat(bad), "<=", 2 * d * d * d * as_rat(na) * as_rat(nb)));
  }
  const bool want_choose = enabled(cfg, "choose-pairs", size, skipped);
  const bool want_prox = enabled(cfg, "prox-lower", size, skipped);
  if (want_choose || want_prox) {
    for (const auto& M : heavy_monotone_sets(spec, A, B, cfg.levels)) {
      if (want_choose) claims.push_back(verify_claim_choose_pairs(A, B, M, t));
      if (want_prox) claims.push_back(verify_prox_lower(A, B, M, t, cfg.prox_constant));
    }
  }
  if (enabled(cfg, "phi-to-aprimes", size, skipped)) claims.push_back(worst_phi_claim(A, t));

  std::optional<RtrLower> rtr;
  if (enabled(cfg, "rtr-lower", size, skipped)) {
    rtr = verify_rtr_lower(spec, B, t);
    claims.push_back(rtr->report);
    if (rtr->report.verdict != Verdict::inapplicable)
      m["rtr"] = {{"r", to_string(rtr->r)}, {"s", to_string(rtr->s)}, {"ttr", rtr->ttr}};
  }
  if (enabled(cfg, "psi-claims", size, skipped)) {
    const Rat r = rtr && rtr->report.verdict != Verdict::inapplicable ? rtr->r : Rat(1);
    for (ClaimReport& c : verify_psi_claims(B, t, r)) claims.push_back(std::move(c));
  }
  if (enabled(cfg, "mult-to-qth", size, skipped))
    for (ClaimReport& c : verify_mult_to_qth(spec, A, B, t)) claims.push_back(std::move(c));
  if (enabled(cfg, "host-invariants", size, skipped))
    for (ClaimReport& c : host_invariants(spec, B, t, m)) claims.push_back(std::move(c));
  if (enabled(cfg, "rt-terms", size, skipped)) rep.diagnostics["rtTerms"] = empirical_terms_rt(spec, A, B, t, cfg.eta).to_json();

  const Cards cards{na, nb, aa, bb};
  for (const char* name : {"one-set", "two-sets"}) {
    const long double v = eval_bound(find_bound(name), cards, cfg.eps);
    rep.diagnostics[name] = {{"bound", v}, {"ratio", v / static_cast<long double>(F.size())}};
  }
  if (!skipped.empty()) rep.diagnostics["skipped"] = skipped;
}

void run_geometry(const Instance& inst, InstanceReport& rep) {
  const SuiteSettings& cfg = inst.settings;
  const FiniteSet A = generate(inst.a);
  const std::uint64_t n = A.size();
  json skipped = json::array();
  rep.measured["A"] = n;
  if (enabled(cfg, "collinear", n, skipped)) {
    const CollinearReport c = collinear_triples_from_Q(A);
    rep.measured["collinear"] = c.to_json();
    rep.claims.push_back(c.lower);
  }
  const bool want_plunnecke = enabled(cfg, "plunnecke", n, skipped);
  const bool want_circle = enabled(cfg, "circle-cauchy", n, skipped);
  if (want_plunnecke || want_circle) {
    const Rat K = as_rat(sumset(A, A).size()) / as_rat(n);
    const AsquaredReport r = asquared_chain(A, K);
    rep.measured["asquared"] = r.to_json();
    if (want_plunnecke)
      for (const ClaimReport& c : r.plunnecke) rep.claims.push_back(c);
    if (want_circle) {
      const std::uint64_t q = circle_energy(A);
      rep.measured["circleEnergy"] = q;
      rep.claims.push_back(decide("circle-cauchy", "|A|=" + std::to_string(n), as_rat(q) * as_rat(r.squares_sum), ">=",
                                  as_rat(n * n) * as_rat(n * n)));
    }
  }
  if (!skipped.empty()) rep.diagnostics["skipped"] = skipped;
}

void run_points(const Instance& inst, InstanceReport& rep) {
  const SuiteSettings& cfg = inst.settings;
  std::vector<Point2> pts;
  if (inst.side > 0) {
    GenSpec L;
    L.kind = GenKind::lattice;
    L.side = inst.side;
    L.size = inst.side * inst.side;
    pts = generate_points(L);
  } else {
    const auto [P1, P2] = generate_two_line_config(inst.slope, inst.a, inst.b);
    std::set<Point2> seen;
    for (const PointConfig* P : {&P1, &P2})
      for (const Point2& p : P->points())
        if (seen.insert(p).second) pts.push_back(p);
  }
  json skipped = json::array();
  rep.measured["points"] = pts.size();
  if (enabled(cfg, "heavy-lines", pts.size(), skipped)) {
    const HeavyLineReport h = heavy_line_experiment(PointConfig(pts), cfg.eta);
    rep.measured["heavyLine"] = h.to_json();
    for (const ClaimReport& c : h.claims) rep.claims.push_back(c);
  }
  if (!skipped.empty()) rep.diagnostics["skipped"] = skipped;
}

std::vector<std::string> string_list(const toml::table& t, const char* key) {
  std::vector<std::string> out;
  const toml::node* n = t.get(key);
  if (!n) return out;
  const toml::array* a = n->as_array();
  if (!a) throw std::invalid_argument(std::string("config: ") + key + " must be an array");
  for (const toml::node& e : *a) {
    if (auto s = e.value<std::string>())
      out.push_back(*s);
    else if (auto i = e.value<std::int64_t>())
      out.push_back(std::to_string(*i));
    else
      throw std::invalid_argument(std::string("config: ") + key + " entries must be strings or integers");
  }
  return out;
}

std::vector<std::size_t> size_list(const toml::table& t, const char* key) {
  std::vector<std::size_t> out;
  for (const std::string& s : string_list(t, key)) {
    std::size_t used = 0;
    long long v = -1;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
    }
    if (v < 0 || used != s.size()) throw std::invalid_argument(std::string("config: bad size in ") + key + ": " + s);
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

// Integers or rational strings such as "1/1024".
std::optional<Rat> rat_value(const toml::table& t, const char* key) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  if (auto i = n->value_exact<std::int64_t>()) return Rat(static_cast<long>(*i));
  if (auto s = n->value<std::string>()) {
    try {
      return parse_rat(*s);
    } catch (const std::exception&) {
    }
  }
  throw std::invalid_argument(std::string("config: ") + key + " must be an integer or a rational string");
}

std::optional<std::int64_t> int_value(const toml::table& t, const char* key) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  auto v = n->value_exact<std::int64_t>();
  if (!v || *v < 0) throw std::invalid_argument(std::string("config: ") + key + " must be a nonnegative integer");
  return v;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

// ---- t and bounds ------------------------------------------------------------

TChoice set_t(std::uint64_t nA, std::uint64_t nB, std::uint64_t q, const Rat& C) {
  if (nA == 0 || nB == 0 || q == 0) throw std::invalid_argument("set_t: |A|, |B| and |Q| must be positive");
  TChoice out;
  out.C = C;
  out.unclamped = C * as_rat(nA) * as_rat(nB) / as_rat(q);
  const Rat floor = std::max(rat(1, static_cast<long>(nA)), rat(1, static_cast<long>(nB)));
  out.t = out.unclamped;
  if (out.t > 1) {
    out.above_one = true;
    out.t = 1;
  }
  if (out.t < floor) {
    out.below_floor = true;
    out.t = floor;
  }
  return out;
}

const std::vector<BoundFormula>& bound_catalog() {
  static const std::vector<BoundFormula> catalog = {
      {"one-set",
       "|A|, |B|, |A+A|, -",
       {term(ex(28, 13, -1), ex(4, 13, -1), ex(-12, 13)), term(ex(8, 3), ex(1, 3, -1), ex(-4, 3)), term(ex(2, 1)),
        term(ex(1, 1), ex(1, 1))}},
      {"two-sets",
       "|A|, |B|, |A+A|, |B+B|",
       {term(ex(256, 121, -1), ex(74, 121, -1), ex(-108, 121), ex(-24, 121)),
        term(ex(74, 29), ex(28, 29, -1), ex(-36, 29), ex(-12, 29)), term(ex(2, 1)), term(ex(1, 1), ex(1, 1))}},
      {"one-set-symmetric", "|A|, -, |A+A|, -", {term(ex(30, 11, -1), {}, ex(-12, 11))}},
      {"equal-sizes", "|A| = |B|, -, |A+A|, -", {term(ex(32, 13, -1), {}, ex(-12, 13)), term(ex(3, 1, -1), {}, ex(-4, 3))}},
      {"distances-one-set",
       "|P1|, |P2|, |Delta(P1)|, -",
       {term(ex(28, 13, -1), ex(4, 13, -1), ex(-12, 13)), term(ex(2, 1)), term(ex(1, 1), ex(1, 1))}},
      {"distances-two-sets",
       "|P1|, |P2|, |Delta(P1)|, |Delta(P2)|",
       {term(ex(256, 121, -1), ex(74, 121, -1), ex(-108, 121), ex(-24, 121)), term(ex(2, 1)),
        term(ex(1, 1), ex(1, 1))}},
  };
  return catalog;
}

const BoundFormula& find_bound(const std::string& name) {
  for (const BoundFormula& f : bound_catalog())
    if (f.name == name) return f;
  throw std::invalid_argument("unknown bound formula '" + name + "'");
}

long double eval_term(const BoundTerm& t, const Cards& cards, const Rat& eps) {
  long double v = 1;
  for (int i = 0; i < 4; ++i) {
    const Rat e = t.e[i].c + t.e[i].eps * eps;
    if (e != 0) v *= real_pow(as_rat(card(cards, i)), e);
  }
  return v;
}

long double eval_bound(const BoundFormula& f, const Cards& cards, const Rat& eps) {
  if (cards.a == 0 || cards.b == 0 || cards.aa == 0 || cards.bb == 0)
    throw std::invalid_argument("eval_bound: cardinalities must be positive");
  long double best = 0;
  bool first = true;
  for (const BoundTerm& t : f.terms) {
    const long double v = eval_term(t, cards, eps);
    if (first || v < best) best = v;
    first = false;
  }
  return best;
}

Exponent collapsed_exponent(const BoundTerm& t, const std::array<Rat, 4>& powers) {
  Exponent out;
  for (int i = 0; i < 4; ++i) {
    out.c += t.e[i].c * powers[i];
    out.eps += t.e[i].eps * powers[i];
  }
  return out;
}

// ---- settings and instances ---------------------------------------------------

const std::vector<std::string>& verifier_names() {
  static const std::vector<std::string> names = {
      "cauchy-schwarz", "remove-bad", "choose-pairs",    "prox-lower", "phi-to-aprimes", "rtr-lower", "psi-claims",
      "mult-to-qth",    "host-invariants", "rt-terms", "collinear",  "plunnecke",      "circle-cauchy", "heavy-lines"};
  return names;
}

std::map<std::string, std::uint64_t> default_size_caps() {
  return {{"remove-bad", 64}, {"choose-pairs", 64}, {"prox-lower", 32},      {"phi-to-aprimes", 64},
          {"rtr-lower", 16},  {"psi-claims", 64},   {"mult-to-qth", 16},     {"host-invariants", 64},
          {"rt-terms", 16},   {"collinear", 6},     {"heavy-lines", 200}};
}

json SuiteSettings::to_json() const {
  json caps = json::object();
  for (const auto& [k, v] : max_size) caps[k] = v;
  return {{"verifiers", verifiers},
          {"maxSize", caps},
          {"tConstant", to_string(t_constant)},
          {"eps", to_string(eps)},
          {"eta", to_string(eta)},
          {"proxConstant", to_string(prox_constant)},
          {"levels", levels}};
}

SuiteSettings SuiteSettings::from_json(const json& j) {
  SuiteSettings s;
  s.verifiers = j.at("verifiers").get<std::vector<std::string>>();
  s.max_size.clear();
  for (const auto& [k, v] : j.at("maxSize").items()) s.max_size[k] = v.get<std::uint64_t>();
  s.t_constant = parse_rat(j.at("tConstant").get<std::string>());
  s.eps = parse_rat(j.at("eps").get<std::string>());
  s.eta = parse_rat(j.at("eta").get<std::string>());
  s.prox_constant = parse_rat(j.at("proxConstant").get<std::string>());
  s.levels = j.at("levels").get<std::size_t>();
  return s;
}

std::string Instance::key() const {
  if (kind == "energy") return "energy|" + a.to_string() + "|" + b.to_string() + "|" + spec_label(spec) + "|" + t_policy;
  if (kind == "geometry") return "geometry|" + a.to_string();
  if (side > 0) return "points|lattice,side=" + std::to_string(side);
  return "points|" + a.to_string() + "|" + b.to_string() + "|slope=" + to_string(slope);
}

json Instance::to_json() const {
  json j = {{"kind", kind}, {"a", a.to_string()}, {"b", b.to_string()}, {"spec", spec_json(spec)},
            {"t", t_policy}, {"side", side},        {"slope", to_string(slope)}, {"settings", settings.to_json()}};
  return j;
}

Instance Instance::from_json(const json& j) {
  Instance in;
  in.kind = j.at("kind").get<std::string>();
  if (in.kind != "energy" && in.kind != "geometry" && in.kind != "points")
    throw std::invalid_argument("instance: unknown kind '" + in.kind + "'");
  in.a = parse_genspec(j.at("a").get<std::string>());
  in.b = parse_genspec(j.at("b").get<std::string>());
  in.spec = spec_from_json(j.at("spec"));
  in.t_policy = j.at("t").get<std::string>();
  in.side = j.at("side").get<std::size_t>();
  in.slope = parse_rat(j.at("slope").get<std::string>());
  in.settings = SuiteSettings::from_json(j.at("settings"));
  return in;
}

std::size_t InstanceReport::count(Verdict v) const {
  return static_cast<std::size_t>(std::count_if(claims.begin(), claims.end(), [v](const ClaimReport& c) { return c.verdict == v; }));
}

json InstanceReport::to_json() const {
  return {{"key", key},
          {"instance", instance},
          {"measured", measured},
          {"diagnostics", diagnostics},
          {"claims", claims_json(claims)},
          {"summary",
           {{"pass", count(Verdict::pass)}, {"fail", count(Verdict::fail)}, {"inapplicable", count(Verdict::inapplicable)}}}};
}

InstanceReport run_instance(const Instance& inst) {
  InstanceReport rep;
  rep.key = inst.key();
  rep.instance = inst.to_json();
  if (inst.kind == "energy")
    run_energy(inst, rep);
  else if (inst.kind == "geometry")
    run_geometry(inst, rep);
  else if (inst.kind == "points")
    run_points(inst, rep);
  else
    throw std::invalid_argument("run_instance: unknown kind '" + inst.kind + "'");
  return rep;
}

// ---- config and suite ----------------------------------------------------------

SuiteConfig parse_config(const std::string& text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream o;
    o << "config: " << e.description() << " at line " << e.source().begin.line;
    throw std::invalid_argument(o.str());
  }
  SuiteConfig cfg;
  if (const toml::table* s = root["suite"].as_table()) {
    if (auto v = (*s)["name"].value<std::string>()) cfg.name = *v;
    if (auto v = int_value(*s, "seed")) cfg.seed = static_cast<std::uint64_t>(*v);
    if (auto v = int_value(*s, "threads")) cfg.threads = static_cast<unsigned>(*v);
    cfg.families = string_list(*s, "families");
    cfg.sizes = size_list(*s, "sizes");
    if (s->contains("t_values")) cfg.t_values = string_list(*s, "t_values");
    cfg.geometry_sizes = size_list(*s, "geometry_sizes");
    cfg.lattice_sides = size_list(*s, "lattice_sides");
    for (const std::string& v : string_list(*s, "line_slopes")) cfg.line_slopes.push_back(parse_rat(v));
    for (const std::string& f : cfg.families) parse_genspec(f);  // reject bad families early
    for (const std::string& t : cfg.t_values)
      if (t != "set_t") parse_rat(t);
  }
  if (const toml::array* specs = root["spec"].as_array()) {
    for (const toml::node& n : *specs) {
      const toml::table* t = n.as_table();
      if (!t) throw std::invalid_argument("config: [[spec]] entries must be tables");
      auto get = [&](const char* k, const char* fallback) {
        auto v = (*t)[k].value<std::string>();
        if (!v && !fallback) throw std::invalid_argument(std::string("config: [[spec]] needs ") + k);
        return v ? *v : std::string(fallback);
      };
      cfg.specs.push_back(make_spec(get("g", nullptr), get("p", "0"), get("h", nullptr), get("name", "")));
    }
  }
  if (const toml::table* v = root["verifiers"].as_table()) {
    SuiteSettings& st = cfg.settings;
    if (v->contains("enabled")) {
      st.verifiers = string_list(*v, "enabled");
      for (const std::string& name : st.verifiers)
        if (std::find(verifier_names().begin(), verifier_names().end(), name) == verifier_names().end())
          throw std::invalid_argument("config: unknown verifier '" + name + "'");
    }
    if (auto x = rat_value(*v, "t_constant")) st.t_constant = *x;
    if (auto x = rat_value(*v, "eps")) st.eps = *x;
    if (auto x = rat_value(*v, "eta")) st.eta = *x;
    if (auto x = rat_value(*v, "prox_constant")) st.prox_constant = *x;
    if (auto x = int_value(*v, "levels")) st.levels = static_cast<std::size_t>(*x);
    if (const toml::table* caps = (*v)["max_size"].as_table()) {
      for (const auto& [k, node] : *caps) {
        auto x = node.value_exact<std::int64_t>();
        if (!x || *x < 0) throw std::invalid_argument("config: max_size." + std::string(k.str()) + " must be a nonnegative integer");
        st.max_size[std::string(k.str())] = static_cast<std::uint64_t>(*x);
      }
    }
  }
  if (const toml::table* o = root["output"].as_table()) {
    if (auto v = (*o)["jsonl"].value<std::string>()) cfg.jsonl = *v;
    if (auto v = (*o)["csv"].value<std::string>()) cfg.csv = *v;
    if (auto v = (*o)["replay_dir"].value<std::string>()) cfg.replay_dir = *v;
  }
  return cfg;
}

SuiteConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<Instance> expand_instances(const SuiteConfig& cfg) {
  std::vector<Instance> out;
  auto sized = [&](const std::string& family, std::size_t n, std::uint64_t seed) {
    GenSpec g = parse_genspec(family);
    g.size = n;
    g.seed = seed;
    return g;
  };
  for (const std::string& fam : cfg.families)
    for (std::size_t n : cfg.sizes)
      for (const PolySpec& spec : cfg.specs)
        for (const std::string& t : cfg.t_values) {
          Instance in;
          in.kind = "energy";
          in.a = sized(fam, n, cfg.seed);
          in.b = sized(fam, n, cfg.seed + 1);
          in.spec = spec;
          in.t_policy = t;
          in.settings = cfg.settings;
          out.push_back(in);
        }
  for (const std::string& fam : cfg.families)
    for (std::size_t n : cfg.geometry_sizes) {
      Instance in;
      in.kind = "geometry";
      in.a = in.b = sized(fam, n, cfg.seed);
      in.settings = cfg.settings;
      out.push_back(in);
    }
  for (std::size_t side : cfg.lattice_sides) {
    Instance in;
    in.kind = "points";
    in.side = side;
    in.a = in.b = sized("ap", side, cfg.seed);
    in.settings = cfg.settings;
    out.push_back(in);
  }
  for (const Rat& slope : cfg.line_slopes)
    for (const std::string& fam : cfg.families)
      for (std::size_t n : cfg.geometry_sizes) {
        Instance in;
        in.kind = "points";
        in.slope = slope;
        in.a = sized(fam, n, cfg.seed);
        in.b = sized(fam, n, cfg.seed + 1);
        in.settings = cfg.settings;
        out.push_back(in);
      }
  return out;
}

std::vector<InstanceReport> run_suite(const SuiteConfig& cfg) {
  const std::vector<Instance> instances = expand_instances(cfg);
  std::vector<InstanceReport> reports(instances.size());
  parallel_for(instances.size(), [&](std::size_t i) { reports[i] = run_instance(instances[i]); }, cfg.threads);
  return reports;
}

SuiteSummary summarize(const std::vector<InstanceReport>& reports) {
  SuiteSummary s;
  s.instances = reports.size();
  for (const InstanceReport& r : reports) {
    if (r.failed())
      ++s.failed;
    else
      ++s.passed;
    for (const ClaimReport& c : r.claims) {
      auto& row = s.per_claim[c.claim];
      ++row[c.verdict == Verdict::pass ? 0 : c.verdict == Verdict::fail ? 1 : 2];
      if (c.verdict == Verdict::inapplicable) ++s.inapplicable;
    }
  }
  return s;
}

SuiteSummary write_reports(const std::vector<InstanceReport>& reports, const std::vector<Instance>& instances,
                           const std::string& jsonl_path, const std::string& csv_path, const std::string& replay_dir) {
  if (reports.size() != instances.size()) throw std::invalid_argument("write_reports: reports and instances differ in length");
  SuiteSummary s = summarize(reports);
  if (!jsonl_path.empty()) {
    std::ofstream out(jsonl_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + jsonl_path);
    for (const InstanceReport& r : reports) out << r.to_json().dump() << '\n';
  }
  if (!csv_path.empty()) {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + csv_path);
    out << "key,kind,pass,fail,inapplicable\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const InstanceReport& r = reports[i];
      out << csv_field(r.key) << ',' << instances[i].kind << ',' << r.count(Verdict::pass) << ','
          << r.count(Verdict::fail) << ',' << r.count(Verdict::inapplicable) << '\n';
    }
  }
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (!reports[i].failed() || replay_dir.empty()) continue;
    std::filesystem::create_directories(replay_dir);
    char name[32];
    std::snprintf(name, sizeof name, "fail-%04zu.json", i);
    const std::string path = (std::filesystem::path(replay_dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << json{{"key", reports[i].key}, {"instance", instances[i].to_json()}}.dump(2) << '\n';
    s.replay_files.push_back(path);
  }
  return s;
}

InstanceReport replay(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("replay: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument("replay: " + std::string(e.what()));
  }
  return run_instance(Instance::from_json(j.at("instance")));
}

// ---- expansion scan ---------------------------------------------------------------

long double loglog_slope(const std::vector<std::uint64_t>& xs, const std::vector<std::uint64_t>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("loglog_slope: need two or more points");
  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const long double n = xs.size();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] == 0 || ys[i] == 0) throw std::invalid_argument("loglog_slope: values must be positive");
    const long double x = std::log(static_cast<long double>(xs[i])), y = std::log(static_cast<long double>(ys[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const long double den = n * sxx - sx * sx;
  if (den == 0) throw std::invalid_argument("loglog_slope: x values must differ");
  return (n * sxy - sx * sy) / den;
}

json ScanReport::to_json() const {
  json rows_j = json::array();
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ScanRow& r = rows[i];
    json b = json::object();
    for (const auto& [k, v] : r.bounds) b[k] = {{"bound", v}, {"ratio", v / static_cast<long double>(r.image)}};
    rows_j.push_back({{"n", r.n}, {"image", r.image}, {"sumsetA", r.sum_a}, {"sumsetB", r.sum_b}, {"bounds", b}});
    if (i > 0 && r.image < rows[i - 1].image) monotone = false;
  }
  return {{"spec", spec}, {"family", family}, {"rows", rows_j}, {"slope", slope}, {"monotone", monotone},
          {"claims", claims_json(claims)}};
}

ScanReport expansion_scan(const PolySpec& spec, const std::string& family, const std::vector<std::size_t>& sizes,
                          std::uint64_t seed, bool two_sets, const Rat& eps) {
  ScanReport rep;
  rep.spec = spec_label(spec);
  rep.family = family;
  std::vector<std::uint64_t> ns, images;
  for (std::size_t n : sizes) {
    GenSpec g = parse_genspec(family);
    g.size = n;
    g.seed = seed;
    const FiniteSet A = generate(g);
    FiniteSet B = A;
    if (two_sets) {
      g.seed = seed + 1;
      B = generate(g);
    }
    ScanRow row;
    row.n = n;
    row.image = image(spec, A, B).size();
    row.sum_a = sumset(A, A).size();
    row.sum_b = sumset(B, B).size();
    const Cards cards{A.size(), B.size(), row.sum_a, row.sum_b};
    for (const char* name : {"one-set", "two-sets", "one-set-symmetric", "equal-sizes"}) row.bounds[name] = eval_bound(find_bound(name), cards, eps);
    rep.claims.push_back(decide("image-size", "n=" + std::to_string(n), as_rat(row.image), "<=",
                                as_rat(A.size()) * as_rat(B.size())));
    ns.push_back(n);
    images.push_back(row.image);
    rep.rows.push_back(std::move(row));
  }
  if (ns.size() >= 2) rep.slope = loglog_slope(ns, images);
  return rep;
}

}  // namespace sumlab
