#include "sumlab/incidence.hpp"

#include "sumlab/keys.hpp"
#include "sumlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace sumlab {

namespace {

Rat as_rat(std::uint64_t n) { return Rat(static_cast<unsigned long>(n)); }

// G(z - u) as a polynomial in z.
UniPoly shifted(const UniPoly& G, const Rat& u) {
  const UniPoly z_minus_u{Rat(-u), Rat(1)};
  UniPoly acc;
  for (auto it = G.coeffs().rbegin(); it != G.coeffs().rend(); ++it) acc = acc * z_minus_u + UniPoly::constant(*it);
  return acc;
}

std::uint64_t floor_pow2(std::uint64_t v) {
  std::uint64_t m = 1;
  while (m <= v / 2) m <<= 1;
  return m;
}

}  // namespace

CurveSig canonical_sig(const UniPoly& G, const Rat& u1, const Rat& u2, const Rat& w) {
  if (G.degree() >= 2) return {u1, u2, w};
  if (G.degree() == 1) return {Rat(u1 - u2 - w / G.lc()), Rat(0), Rat(0)};
  return {Rat(0), Rat(0), w};
}

BiPoly curve_polynomial(const UniPoly& G, const CurveSig& sig) {
  return BiPoly::from_x(shifted(G, sig.u1)) - BiPoly::from_y(shifted(G, sig.u2)) + BiPoly::constant(sig.w);
}

void CurveMultiset::add(const CurveSig& sig, const Generator& gen) {
  ++sigs[sig];
  if (logged < log_cap) {
    log[sig].push_back(gen);
    ++logged;
  }
}

std::uint64_t CurveMultiset::total() const {
  std::uint64_t n = 0;
  for (const auto& [s, m] : sigs) n += m;
  return n;
}

std::uint64_t CurveMultiset::max_multiplicity() const {
  std::uint64_t n = 0;
  for (const auto& [s, m] : sigs) n = std::max(n, m);
  return n;
}

std::uint64_t GridPoints::size() const {
  const std::uint64_t n = ambient.size();
  if (n == 0) return 0;
  const std::uint64_t w = std::min<std::uint64_t>(window, n - 1);
  // n diagonal pairs plus 2 * sum over d = 1..w of (n - d)
  return n + 2 * (w * n - w * (w + 1) / 2);
}

IncidenceInstance build_incidence_rt(const BadPairOracle& oracle, const FiniteSet& A, const FiniteSet& B, const Rat& t,
                                     std::size_t log_cap) {
  const PolySpec& spec = oracle.spec();
  const PairSet P = build_P(oracle, B, t);
  IncidenceInstance inst;
  inst.G = spec.g;
  inst.points.ambient = sumset(A, A);
  inst.points.window = close_window(inst.points.ambient.size(), t);
  inst.curves.log_cap = log_cap;

  const std::size_t na = A.size(), wa = close_window(na, t);
  std::vector<Rat> pB, hB;
  for (const Rat& b : B) {
    pB.push_back(spec.p.eval(b));
    hB.push_back(spec.h.eval(b));
  }
  for (auto [i, j] : P.members) {
    const Rat w = hB[i] - hB[j];
    for (std::size_t a1 = 0; a1 < na; ++a1) {
      const std::size_t lo = a1 > wa ? a1 - wa : 0, hi = std::min(na - 1, a1 + wa);
      const Rat u1 = A[a1] - pB[i];
      for (std::size_t a2 = lo; a2 <= hi; ++a2)
        inst.curves.add(canonical_sig(spec.g, u1, A[a2] - pB[j], w), {A[a1], A[a2], B[i], B[j]});
    }
  }
  return inst;
}

IncidenceInstance build_incidence_rt(const PolySpec& spec, const FiniteSet& A, const FiniteSet& B, const Rat& t,
                                     std::size_t log_cap) {
  return build_incidence_rt(BadPairOracle(spec), A, B, t, log_cap);
}

IncidenceInstance build_incidence_ttr(const PolySpec& spec, const FiniteSet& B, const IndexPairs& S, const Rat& t,
                                      const Rat& r, std::size_t log_cap) {
  if (!(t > 0 && t <= r && r <= 1)) throw std::invalid_argument("build_incidence_ttr: need 0 < t <= r <= 1");
  const Rat ratio = t / r;
  IncidenceInstance inst;
  inst.G = spec.h;
  inst.points.ambient = sumset(B, B);
  inst.points.window = close_window(inst.points.ambient.size(), ratio);
  inst.curves.log_cap = log_cap;

  const std::size_t nb = B.size(), wb = close_window(nb, ratio);
  std::vector<Rat> hB;
  for (const Rat& b : B) hB.push_back(spec.h.eval(b));
  for (auto [i, j] : S) {
    if (i >= nb || j >= nb) throw std::out_of_range("build_incidence_ttr: pair index outside B");
    const Rat w = hB[i] - hB[j];
    for (std::size_t b1 = 0; b1 < nb; ++b1) {
      const std::size_t lo = b1 > wb ? b1 - wb : 0, hi = std::min(nb - 1, b1 + wb);
      for (std::size_t b2 = lo; b2 <= hi; ++b2)
        inst.curves.add(canonical_sig(spec.h, B[b1], B[b2], w), {B[b1], B[b2], B[i], B[j]});
    }
  }
  return inst;
}

std::uint64_t count_incidences(const IncidenceInstance& inst) {
  const FiniteSet& X = inst.points.ambient;
  const std::size_t n = X.size();
  if (n == 0 || inst.curves.sigs.empty()) return 0;

  // Every shift u appearing in a signature gets the row G(X[k] - u).
  std::map<Rat, std::size_t> shift_row;
  for (const auto& [sig, m] : inst.curves.sigs) {
    shift_row.try_emplace(sig.u1, 0);
    shift_row.try_emplace(sig.u2, 0);
  }
  std::vector<Rat> values;
  values.reserve(shift_row.size() * n + inst.curves.sigs.size());
  std::size_t row = 0;
  for (auto& [u, idx] : shift_row) {
    idx = row++;
    for (const Rat& x : X) values.push_back(inst.G.eval(x - u));
  }
  struct Task {
    std::size_t r1, r2, w;
    std::uint64_t mult;
  };
  std::vector<Task> tasks;
  tasks.reserve(inst.curves.sigs.size());
  for (const auto& [sig, m] : inst.curves.sigs) {
    tasks.push_back({shift_row[sig.u1], shift_row[sig.u2], values.size(), m});
    values.push_back(sig.w);
  }
  const std::uint32_t win = static_cast<std::uint32_t>(std::min(inst.points.window, n - 1));

  return with_keys(values, [&](const auto& keys) -> std::uint64_t {
    using Key = typename std::decay_t<decltype(keys)>::value_type;
    std::vector<SortedRow<Key>> rows(row);
    parallel_for(row, [&](std::size_t r) { rows[r] = SortedRow<Key>(keys.begin() + r * n, keys.begin() + (r + 1) * n); });
    return parallel_sum(tasks.size(), [&](std::size_t ti) -> std::uint64_t {
      const Task& task = tasks[ti];
      const Key* lhs = keys.data() + task.r1 * n;
      const Key& w = keys[task.w];
      std::uint64_t hits = 0;
      for (std::uint32_t k1 = 0; k1 < n; ++k1) {
        const std::uint32_t lo = k1 > win ? k1 - win : 0;
        const std::uint32_t hi = std::min<std::uint32_t>(static_cast<std::uint32_t>(n - 1), k1 + win);
        hits += rows[task.r2].count(lhs[k1] + w, lo, hi);
      }
      return hits * task.mult;
    });
  });
}

DyadicPartition dyadic_partition(const CurveMultiset& curves) {
  DyadicPartition out;
  for (const auto& [sig, m] : curves.sigs) {
    DyadicBucket& b = out[floor_pow2(m)];
    ++b.distinct;
    b.mass += m;
  }
  return out;
}

std::vector<ClaimReport> verify_mult_to_qth(const PolySpec& spec, const FiniteSet& A, const FiniteSet& B,
                                            const Rat& t) {
  const char* name = "mult-to-qth";
  const std::string inst = "spec=" + spec.describe() + " |A|=" + std::to_string(A.size()) +
                           " |B|=" + std::to_string(B.size()) + " t=" + to_string(t);
  if (spec.g.degree() < 2) return {inapplicable(name, inst, "needs deg g >= 2")};
  if (!(t > 0 && t <= 1) || t * as_rat(A.size()) < 1) return {inapplicable(name, inst, "needs t in (0, 1] and t|A| >= 1")};
  const BadPairOracle oracle(spec);
  const IncidenceInstance rt = build_incidence_rt(oracle, A, B, t);
  if (rt.curves.sigs.empty()) return {inapplicable(name, inst, "no curves")};
  const std::uint64_t st = energy_St(oracle, B, t).st;
  const Rat na = as_rat(A.size());
  const Rat rhs = kMultToQthConstant * t * na * na * as_rat(st);
  std::vector<ClaimReport> out;
  for (const auto& [m, b] : dyadic_partition(rt.curves))
    out.push_back(decide(name, inst + " m=" + std::to_string(m), as_rat(m) * as_rat(m) * as_rat(b.distinct), "<=", rhs,
                         "distinct=" + std::to_string(b.distinct) + " st=" + std::to_string(st)));
  return out;
}

long double real_pow(const Rat& x, const Rat& e) {
  if (x < 0) throw std::domain_error("real_pow: negative base");
  if (e == 0) return 1.0L;
  if (x == 0) return 0.0L;
  return std::exp(to_ld(e) * std::log(to_ld(x)));
}

long double TermValues::max() const { return std::max({I, II, III, IV}); }

nlohmann::json TermValues::to_json() const {
  return {{"I", static_cast<double>(I)},
          {"II", static_cast<double>(II)},
          {"III", static_cast<double>(III)},
          {"IV", static_cast<double>(IV)}};
}

long double sharir_zahl_rhs(std::uint64_t n_points, std::uint64_t n_curves, int k, const Rat& eps) {
  if (k < 1) throw std::invalid_argument("sharir_zahl_rhs: k must be positive");
  const Rat P = as_rat(n_points), G = as_rat(n_curves);
  const long den = 5L * k - 4;
  return real_pow(P, rat(2L * k, den)) * real_pow(G, rat(5L * k - 6, den) + eps) +
         real_pow(P, rat(2, 3)) * real_pow(G, rat(2, 3)) + to_ld(P) + to_ld(G);
}

nlohmann::json IncidenceReport::to_json() const {
  nlohmann::json b = nlohmann::json::array();
  for (const auto& [m, bucket] : buckets) b.push_back({{"m", m}, {"distinct", bucket.distinct}, {"mass", bucket.mass}});
  nlohmann::json j = {{"instance", instance},
                      {"nPoints", n_points},
                      {"nCurves", n_curves},
                      {"distinctCurves", distinct_curves},
                      {"buckets", b},
                      {"measured", measured},
                      {"st", st},
                      {"terms", terms.to_json()},
                      {"szRHS", static_cast<double>(sz_rhs)}};
  if (instance == "ttr") {
    j["r"] = to_string(r);
    j["s"] = to_string(s);
  }
  return j;
}

namespace {

void fill_common(IncidenceReport& rep, const IncidenceInstance& inst, const Rat& eta) {
  rep.n_points = inst.points.size();
  rep.n_curves = inst.curves.total();
  rep.distinct_curves = inst.curves.distinct();
  rep.buckets = dyadic_partition(inst.curves);
  rep.measured = count_incidences(inst);
  rep.sz_rhs = 0;
  for (const auto& [m, b] : rep.buckets) rep.sz_rhs += static_cast<long double>(m) * sharir_zahl_rhs(rep.n_points, b.distinct, 3, eta);
}

}  // namespace

IncidenceReport empirical_terms_rt(const PolySpec& spec, const FiniteSet& A, const FiniteSet& B, const Rat& t,
                                   const Rat& eta) {
  const BadPairOracle oracle(spec);
  const IncidenceInstance inst = build_incidence_rt(oracle, A, B, t);
  IncidenceReport rep;
  rep.instance = "rt";
  fill_common(rep, inst, eta);
  rep.st = energy_St(oracle, B, t).st;

  const Rat a = as_rat(A.size()), b = as_rat(B.size()), aa = as_rat(inst.points.ambient.size()), st = as_rat(rep.st);
  rep.terms.I = real_pow(t, 2) * real_pow(a, rat(18, 11) + 2 * eta) * real_pow(b, rat(14, 11) + 3 * eta) *
                real_pow(aa, rat(12, 11)) * real_pow(st, rat(2, 11));
  rep.terms.II = real_pow(t, rat(5, 3)) * real_pow(a, rat(4, 3)) * real_pow(b, rat(2, 3) + eta) *
                 real_pow(aa, rat(4, 3)) * real_pow(st, rat(1, 3));
  rep.terms.III = to_ld(t * aa * aa * b);
  rep.terms.IV = to_ld(t * t * a * a * b * b);
  return rep;
}

IncidenceReport empirical_terms_ttr(const PolySpec& spec, const FiniteSet& B, const Rat& t, const Rat& eta) {
  if (spec.h.degree() < 2) throw std::invalid_argument("empirical_terms_ttr: needs deg h >= 2");
  const HostSelection hosts = select_hosts(spec, B, t);
  if (hosts.empty) throw std::invalid_argument("empirical_terms_ttr: S_t is empty");
  const Rat b = as_rat(B.size());
  const Rat scale = 64 * t * b * b;
  IncidenceReport rep;
  rep.instance = "ttr";
  rep.r = std::max<Rat>(as_rat(hosts.R.size()) / scale, t);
  rep.s = as_rat(hosts.S.size()) / scale;
  rep.st = hosts.st;
  const IncidenceInstance inst = build_incidence_ttr(spec, B, hosts.S, t, rep.r);
  fill_common(rep, inst, eta);

  const Rat bb = as_rat(inst.points.ambient.size()), st = as_rat(rep.st), &r = rep.r, &s = rep.s;
  rep.terms.I = real_pow(s, rat(7, 11)) * real_pow(t, 2) / real_pow(r, rat(15, 11)) *
                real_pow(b, rat(32, 11) + 5 * eta) * real_pow(bb, rat(12, 11)) * real_pow(st, rat(2, 11));
  rep.terms.II = real_pow(s, rat(1, 3)) * real_pow(t, rat(5, 3)) / real_pow(r, rat(4, 3)) * real_pow(b, 2 + eta) *
                 real_pow(bb, rat(4, 3)) * real_pow(st, rat(1, 3));
  rep.terms.III = to_ld(t / r * b * bb * bb);
  rep.terms.IV = to_ld(s * t * t / r * b * b * b * b);
  return rep;
}

}  // namespace sumlab
