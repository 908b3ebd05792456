#pragma once

#include "sumlab/energy.hpp"
#include "sumlab/report.hpp"

#include <json.hpp>

#include <compare>
#include <cstdint>
#include <map>
#include <vector>

namespace sumlab {

// Curve G(x1 - u1) + w = G(x2 - u2). For deg G <= 1 the curve only depends on
// u1 - u2 - w / lc(G), so signatures are folded to (that value, 0, 0).
struct CurveSig {
  Rat u1, u2, w;
  auto operator<=>(const CurveSig& o) const {
    if (auto c = cmp(u1, o.u1); c != 0) return c <=> 0;
    if (auto c = cmp(u2, o.u2); c != 0) return c <=> 0;
    return cmp(w, o.w) <=> 0;
  }
  bool operator==(const CurveSig& o) const { return u1 == o.u1 && u2 == o.u2 && w == o.w; }
};

CurveSig canonical_sig(const UniPoly& G, const Rat& u1, const Rat& u2, const Rat& w);

// The expanded curve polynomial G(x - u1) - G(y - u2) + w.
BiPoly curve_polynomial(const UniPoly& G, const CurveSig& sig);

// A generating 4-tuple: (a1', a2', b1, b2) for R_t, (b1', b2', c1, c2) for T_{t,r}.
struct Generator {
  Rat p1, p2, q1, q2;
};

struct CurveMultiset {
  std::map<CurveSig, std::uint64_t> sigs;
  std::map<CurveSig, std::vector<Generator>> log;  // at most log_cap entries in total
  std::size_t log_cap = 0;
  std::size_t logged = 0;

  void add(const CurveSig& sig, const Generator& gen);
  std::uint64_t total() const;
  std::size_t distinct() const { return sigs.size(); }
  std::uint64_t max_multiplicity() const;
};

// Index pairs (i, j) of `ambient` with |i - j| <= window.
struct GridPoints {
  FiniteSet ambient;
  std::size_t window = 0;
  std::uint64_t size() const;
};

struct IncidenceInstance {
  UniPoly G;
  GridPoints points;
  CurveMultiset curves;
};

// Points: t-close pairs of A + A. Curves: one per (a1', a2', b1, b2) with both
// pairs t-close and (b1, b2) not bad.
IncidenceInstance build_incidence_rt(const BadPairOracle& oracle, const FiniteSet& A, const FiniteSet& B, const Rat& t,
                                     std::size_t log_cap = 0);
IncidenceInstance build_incidence_rt(const PolySpec& spec, const FiniteSet& A, const FiniteSet& B, const Rat& t,
                                     std::size_t log_cap = 0);

// Points: t/r-close pairs of B + B. Curves: one per (b1', b2', c1, c2) with
// (b1', b2') t/r-close and (c1, c2) in S. Throws std::invalid_argument unless
// 0 < t <= r <= 1.
IncidenceInstance build_incidence_ttr(const PolySpec& spec, const FiniteSet& B, const IndexPairs& S, const Rat& t,
                                      const Rat& r, std::size_t log_cap = 0);

// Incidences counted with curve multiplicity.
std::uint64_t count_incidences(const IncidenceInstance& inst);

struct DyadicBucket {
  std::uint64_t distinct = 0;  // |Gamma_m'|
  std::uint64_t mass = 0;      // |Gamma_m|
};

// m in {1, 2, 4, ...} -> curves with multiplicity in [m, 2m).
using DyadicPartition = std::map<std::uint64_t, DyadicBucket>;
DyadicPartition dyadic_partition(const CurveMultiset& curves);

// m^2 |Gamma_m'| <= C t |A|^2 |S_t| for every bucket, C = 4. One report per
// bucket; inapplicable when deg g < 2 or t|A| < 1.
std::vector<ClaimReport> verify_mult_to_qth(const PolySpec& spec, const FiniteSet& A, const FiniteSet& B, const Rat& t);
inline constexpr long kMultToQthConstant = 4;

struct TermValues {
  long double I = 0, II = 0, III = 0, IV = 0;
  long double max() const;
  nlohmann::json to_json() const;
};

// Four-term incidence bound for a k-dimensional family, implicit constant omitted.
long double sharir_zahl_rhs(std::uint64_t n_points, std::uint64_t n_curves, int k, const Rat& eps);

struct IncidenceReport {
  std::string instance;
  std::uint64_t n_points = 0, n_curves = 0, distinct_curves = 0;
  DyadicPartition buckets;
  std::uint64_t measured = 0;  // I(Pi, Gamma)
  std::uint64_t st = 0;
  TermValues terms;
  long double sz_rhs = 0;  // sum over buckets of m * RHS(|Pi|, |Gamma_m'|)
  Rat r = 0, s = 0;        // T_{t,r} instances only
  nlohmann::json to_json() const;
};

IncidenceReport empirical_terms_rt(const PolySpec& spec, const FiniteSet& A, const FiniteSet& B, const Rat& t,
                                   const Rat& eta = 0);
// Hosts from select_hosts; r and s as in the host lemma. Throws std::invalid_argument
// when deg h < 2 or S_t is empty.
IncidenceReport empirical_terms_ttr(const PolySpec& spec, const FiniteSet& B, const Rat& t, const Rat& eta = 0);

// x^e for x >= 0 in extended precision.
long double real_pow(const Rat& x, const Rat& e);

}  // namespace sumlab
