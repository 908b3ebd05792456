#pragma once

#include "sumlab/finite_set.hpp"
#include "sumlab/geometry.hpp"
#include "sumlab/poly.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace sumlab {

enum class GenKind { ap, gap, gp, convex, random, lattice, perturbed_ap };

std::string to_string(GenKind k);
GenKind parse_gen_kind(const std::string& name);

struct GenSpec {
  GenKind kind = GenKind::ap;
  std::size_t size = 0;
  std::uint64_t seed = 0;
  Rat start = 0;  // ap, perturbed_ap, gap; gp uses 1 unless set
  Rat step = 1;   // ap, perturbed_ap
  Rat ratio = 2;  // gp
  bool start_set = false;
  std::vector<std::size_t> dims;  // gap
  std::vector<Rat> steps;         // gap
  UniPoly convex_fn = UniPoly{Rat(0), Rat(0), Rat(1)};
  std::uint64_t range = 0;        // random; raised to at least size^3
  Rat jitter = rat(1, 4);         // perturbed_ap, as a fraction of step
  std::size_t side = 0;           // lattice

  // Canonical comma-separated form, e.g. "ap,size=8,seed=0,start=0,step=1".
  std::string to_string() const;
};

// Accepts the canonical form; missing keys keep their defaults. Throws
// std::invalid_argument on unknown kinds or keys.
GenSpec parse_genspec(const std::string& text);

// Exactly `size` distinct rationals, identical for identical specs. Throws
// std::invalid_argument on impossible specs (gp with ratio +-1, non-convex g,
// jitter above 1/4, collisions in a gap, lattice kind).
FiniteSet generate(const GenSpec& spec);

// The side x side integer lattice for kind = lattice.
std::vector<Point2> generate_points(const GenSpec& spec);

// Range actually used by kind = random.
std::uint64_t effective_range(const GenSpec& spec);

// P1 = {(a, 0)}, P2 = {(s b, b)}.
std::pair<PointConfig, PointConfig> generate_two_line_config(const Rat& s, const GenSpec& A, const GenSpec& B);

// Uniform integer in [0, n) without modulo bias.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

// Engine seeded from (seed, salt) through std::seed_seq.
std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t salt = 0);

}  // namespace sumlab
