#pragma once

#include "sumlab/energy.hpp"
#include "sumlab/finite_set.hpp"
#include "sumlab/point.hpp"
#include "sumlab/report.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace sumlab {

// x -> average over y in base of i_ambient(x + y), with ambient = base + base.
struct AvgIndexFn {
  FiniteSet base, ambient;
  std::vector<Rat> values;  // aligned with base

  const Rat& at(std::size_t i) const { return values[i]; }
  // Throws MembershipError when x is not in base.
  const Rat& operator()(const Rat& x) const;
};

AvgIndexFn phi(const FiniteSet& A);
AvgIndexFn psi(const FiniteSet& B);

// table[i][j] = i_{X+X}(X[i] + X[j]), 1-based.
std::vector<std::vector<std::uint32_t>> sum_index_table(const FiniteSet& X, const FiniteSet& XX);

enum class Direction { increasing, decreasing };

// Direction in which the set is monotone (increasing wins when both hold).
std::optional<Direction> monotone_direction(const std::vector<Point2>& points);

struct MonotonePiece {
  Direction dir = Direction::increasing;
  std::vector<Point2> points;  // x ascending, y following dir
};

struct MonotoneDecomposition {
  std::vector<MonotonePiece> pieces;
  std::optional<Rat> source_level;
};

// Repeatedly removes a longest monotone chain, preferring strict chains on ties.
// Throws std::invalid_argument on duplicate points.
MonotoneDecomposition monotone_decompose(std::vector<Point2> points);

// Piece-count bound for points on the zero set of a degree-`deg` curve.
inline std::size_t monotone_piece_bound(int deg) { return 4 * static_cast<std::size_t>(deg) * deg; }

// Orders a monotone set as (w_1, z_1), ..., with w nondecreasing and z monotone.
// Throws std::invalid_argument when the set is not monotone.
std::vector<Point2> order_monotone(const std::vector<Point2>& M);

// Indices 1 <= i <= |M| - k, k = floor(t|M|/32), meeting the three proximity
// conditions on (w_i, w_{i+k}), (z_i, z_{i+k}) and phi; pass iff >= |M|/2.
ClaimReport verify_claim_choose_pairs(const FiniteSet& A, const FiniteSet& B, const std::vector<Point2>& M,
                                      const Rat& t);

// Indices 1 <= i <= |A| - l, l = floor(t|A|/8), with
// i_{A+A}(a2 + x_{i+l}) - i_{A+A}(a1 + x_i) <= t|A+A|; pass iff >= |A|/2.
ClaimReport verify_claim_phi_to_aprimes(const FiniteSet& A, const Rat& a1, const Rat& a2, const Rat& t);

// 6-tuples (a1, a2, a1', a2', b1, b2) with (a1, b1), (a2, b2) in M and the pairs
// (a1, a2), (a1', a2'), (a1 + a1', a2 + a2'), (b1, b2) all t-close.
std::uint64_t count_prox_6tuples(const FiniteSet& A, const FiniteSet& B, const std::vector<Point2>& M,
                                 const Rat& t);
// Tuples produced by the choose (i, j, i', j') recipe; never exceeds the exact count.
std::uint64_t count_prox_6tuples_constructive(const FiniteSet& A, const FiniteSet& B,
                                              const std::vector<Point2>& M, const Rat& t);
// Exact count >= c t^2 |A|^2 |M|^2 with c = 1/1024 unless overridden.
ClaimReport verify_prox_lower(const FiniteSet& A, const FiniteSet& B, const std::vector<Point2>& M, const Rat& t,
                              const Rat& c = rat(1, 1024));

// Indices with psi(y_{i+k}) - psi(y_i) > t|B+B|/(4r), k = floor(t|B|); pass iff <= 4r|B|.
ClaimReport verify_psi_skip(const FiniteSet& B, const Rat& t, const Rat& r);
// Indices with i_{B+B}(b2 + y_{i+l}) - i_{B+B}(b1 + y_i) <= t|B+B|/r,
// l = floor(t|B|/(8r)); pass iff >= |B|/2.
ClaimReport verify_psi_to_bprime(const FiniteSet& B, const Rat& b1, const Rat& b2, const Rat& t, const Rat& r);
// psi-skip plus the worst psi-to-bprime instance over pairs b1 <= b2 meeting its hypothesis.
std::vector<ClaimReport> verify_psi_claims(const FiniteSet& B, const Rat& t, const Rat& r);

struct RtrLower {
  HostSelection hosts;
  Rat r = 0, s = 0;
  std::uint64_t ttr = 0;
  ClaimReport report;
};

// |T_{t,r}| >= (t/(128 r)) |B|^2 |S_t*| on the selected hosts.
RtrLower verify_rtr_lower(const PolySpec& spec, const FiniteSet& B, const Rat& t);

}  // namespace sumlab
