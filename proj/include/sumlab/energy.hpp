#pragma once

#include "sumlab/finite_set.hpp"
#include "sumlab/polynomial.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

namespace sumlab {

// Level value -> multiplicity, with running totals.
struct EnergyTable {
  std::map<Rat, std::uint64_t> levels;
  std::uint64_t total = 0;
  std::uint64_t squared_total = 0;

  void add(const Rat& level, std::uint64_t count = 1);
  std::uint64_t multiplicity(const Rat& level) const;
  // Recomputes both totals from the levels.
  bool consistent() const;

  void write_csv(std::ostream& out) const;
  static EnergyTable read_csv(std::istream& in);
};

// Positions into an ambient FiniteSet, 0-based.
using IndexPair = std::pair<std::uint32_t, std::uint32_t>;
using IndexPairs = std::vector<IndexPair>;

struct ClassifiedPair {
  std::uint32_t i, j;
  bool t_close, bad;
};

// Every ordered pair of the ambient set with its flags; `members` lists the
// t-close, non-bad ones in lexicographic order.
struct PairSet {
  FiniteSet ambient;
  Rat t;
  std::vector<ClassifiedPair> pairs;
  IndexPairs members;
  // t|B| < 1: outside the standing assumption t|A|, t|B| >= 1.
  bool below_standing_assumption = false;

  bool admitted(std::uint32_t i, std::uint32_t j) const { return flags_[i * ambient.size() + j]; }

  std::vector<char> flags_;
};

EnergyTable energy_Q(const PolySpec& spec, const FiniteSet& A, const FiniteSet& B);
std::uint64_t count_Q_bad(const BadPairOracle& oracle, const FiniteSet& A, const FiniteSet& B);
std::uint64_t count_Q_bad(const PolySpec& spec, const FiniteSet& A, const FiniteSet& B);

PairSet build_P(const BadPairOracle& oracle, const FiniteSet& B, const Rat& t);
PairSet build_P(const PolySpec& spec, const FiniteSet& B, const Rat& t);

struct StEnergy {
  EnergyTable p_delta;  // delta = h(b1) - h(b2) -> |P_delta|
  std::uint64_t st = 0;  // sum over delta of |P_delta| |P_{-delta}|
};

StEnergy energy_St(const BadPairOracle& oracle, const FiniteSet& B, const Rat& t);
StEnergy energy_St(const PolySpec& spec, const FiniteSet& B, const Rat& t);

std::uint64_t energy_Rt(const BadPairOracle& oracle, const FiniteSet& A, const FiniteSet& B, const Rat& t);
std::uint64_t energy_Rt(const PolySpec& spec, const FiniteSet& A, const FiniteSet& B, const Rat& t);

// 6-tuples with (beta1, beta2) in (B+B)^2 and (b1', b2') in B^2 both t/r-close,
// (c1, c2) in S, and h(beta1 - b1') + h(c1) = h(beta2 - b2') + h(c2).
// Throws std::invalid_argument unless 0 < t <= r <= 1.
std::uint64_t energy_Ttr(const PolySpec& spec, const FiniteSet& B, const IndexPairs& S, const Rat& t, const Rat& r);

struct HostSelection {
  bool empty = true;
  std::uint64_t m = 0;
  std::vector<Rat> delta_class;  // Delta_m, ascending
  IndexPairs R, S;               // unions of P_delta and P_{-delta} over Delta_m
  std::uint64_t st = 0;          // |S_t|
  std::uint64_t st_star = 0;     // |S_t intersect (R x S)| = sum over Delta_m of |P_delta|^2
};

HostSelection select_hosts(const BadPairOracle& oracle, const FiniteSet& B, const Rat& t);
HostSelection select_hosts(const PolySpec& spec, const FiniteSet& B, const Rat& t);

// floor(log2 n) + 1 for n >= 1.
std::uint64_t dyadic_class_count(std::uint64_t n);

}  // namespace sumlab
