#include <doctest.h>

#include "sumlab/constructions.hpp"
#include "sumlab/parallel.hpp"

#include <thread>

using namespace sumlab;

namespace {

GenSpec spec_of(GenKind kind, std::size_t size, std::uint64_t seed = 0) {
  GenSpec s;
  s.kind = kind;
  s.size = size;
  s.seed = seed;
  return s;
}

FiniteSet productset_of(const FiniteSet& A) { return productset(A, A); }

}  // namespace

TEST_CASE("arithmetic and geometric progressions") {
  CHECK(generate(spec_of(GenKind::ap, 5)) == FiniteSet::from_ints({0, 1, 2, 3, 4}));
  for (std::size_t n : {1u, 2u, 9u, 40u}) {
    GenSpec s = spec_of(GenKind::ap, n);
    s.start = rat(-7, 3);
    s.step = rat(5, 2);
    const FiniteSet A = generate(s);
    CHECK(A.size() == n);
    CHECK(sumset(A, A).size() == 2 * n - 1);
    GenSpec g = spec_of(GenKind::gp, n);
    g.ratio = rat(-3, 2);
    const FiniteSet G = generate(g);
    CHECK(G.size() == n);
    CHECK(productset_of(G).size() == 2 * n - 1);
  }
  GenSpec bad = spec_of(GenKind::gp, 4);
  bad.ratio = 1;
  CHECK_THROWS_AS(generate(bad), std::invalid_argument);
  bad.ratio = -1;
  CHECK_THROWS_AS(generate(bad), std::invalid_argument);
  CHECK_THROWS_AS(generate(spec_of(GenKind::ap, 0)), std::invalid_argument);
}

TEST_CASE("convex sets") {
  const FiniteSet C = generate(spec_of(GenKind::convex, 4));
  CHECK(C == FiniteSet::from_ints({1, 4, 9, 16}));
  GenSpec cubic = spec_of(GenKind::convex, 30);
  cubic.convex_fn = parse_unipoly("0 -3 1/2 1");
  const FiniteSet D = generate(cubic);
  REQUIRE(D.size() == 30);
  for (std::size_t i = 2; i < D.size(); ++i) CHECK(D[i] - D[i - 1] > D[i - 1] - D[i - 2]);
  GenSpec lin = spec_of(GenKind::convex, 5);
  lin.convex_fn = parse_unipoly("0 1");
  CHECK_THROWS_AS(generate(lin), std::invalid_argument);
  GenSpec dip = spec_of(GenKind::convex, 6);
  dip.convex_fn = parse_unipoly("0 -7 1");  // gaps strictly increase but values repeat
  CHECK_THROWS_AS(generate(dip), std::invalid_argument);
}

TEST_CASE("generalized progressions") {
  GenSpec g = parse_genspec("gap,dims=4x4,steps=1x100");
  CHECK(g.size == 16);
  const FiniteSet A = generate(g);
  CHECK(A.size() == 16);
  CHECK(sumset(A, A).size() == 49);
  GenSpec coll = parse_genspec("gap,dims=3x3,steps=1x2");
  CHECK_THROWS_AS(generate(coll), std::invalid_argument);
  GenSpec mismatch = parse_genspec("gap,size=5,dims=2x2,steps=1x10");
  CHECK_THROWS_AS(generate(mismatch), std::invalid_argument);
}

TEST_CASE("random and perturbed sets are seeded") {
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    const GenSpec r = spec_of(GenKind::random, 32, seed);
    const FiniteSet A = generate(r);
    CHECK(A.size() == 32);
    CHECK(A == generate(r));
    CHECK(A[31] < Rat(32UL * 32 * 32));
    CHECK(A[0] >= 0);
    CHECK(effective_range(r) == 32768);
    GenSpec p = spec_of(GenKind::perturbed_ap, 40, seed);
    p.step = 3;
    const FiniteSet P = generate(p);
    REQUIRE(P.size() == 40);
    CHECK(P == generate(p));
    for (std::size_t i = 0; i < P.size(); ++i) {
      const Rat off = P[i] - Rat(3 * static_cast<long>(i));
      CHECK(off >= rat(-3, 4));
      CHECK(off <= rat(3, 4));
    }
  }
  CHECK(generate(spec_of(GenKind::random, 32, 1)) != generate(spec_of(GenKind::random, 32, 2)));
  GenSpec wide = spec_of(GenKind::random, 8);
  wide.range = 1000000;
  CHECK(effective_range(wide) == 1000000);
  GenSpec shaky = spec_of(GenKind::perturbed_ap, 4);
  shaky.jitter = rat(1, 2);
  CHECK_THROWS_AS(generate(shaky), std::invalid_argument);

  // generation inside worker threads gives the same sets
  std::vector<FiniteSet> out(8);
  parallel_for(8, [&](std::size_t i) { out[i] = generate(spec_of(GenKind::random, 20, i)); }, 4);
  for (std::size_t i = 0; i < 8; ++i) CHECK(out[i] == generate(spec_of(GenKind::random, 20, i)));
}

TEST_CASE("uniform_below stays in range") {
  auto rng = seeded_engine(5);
  for (std::uint64_t n : {1ULL, 2ULL, 7ULL, 1000ULL}) {
    for (int k = 0; k < 200; ++k) CHECK(uniform_below(rng, n) < n);
  }
  CHECK_THROWS_AS(uniform_below(rng, 0), std::invalid_argument);
  auto a = seeded_engine(11, 3), b = seeded_engine(11, 3), c = seeded_engine(11, 4);
  CHECK(a() == b());
  CHECK(a() != c());
}

TEST_CASE("genspec text form round trips") {
  for (const char* text : {"ap,size=8,seed=0,start=-1/2,step=3", "gp,size=6,seed=0,start=2,ratio=-3",
                           "convex,size=5,seed=0,g=1 0 2", "random,size=10,seed=7,range=5000",
                           "perturbed_ap,size=9,seed=4,start=0,step=2,jitter=1/8",
                           "gap,size=12,seed=0,start=1,dims=3x4,steps=1x50", "lattice,size=16,seed=0,side=4"}) {
    const GenSpec s = parse_genspec(text);
    CHECK(s.to_string() == text);
    if (s.kind != GenKind::lattice) CHECK(generate(s) == generate(parse_genspec(s.to_string())));
  }
  CHECK(parse_genspec(" ap , size = 3 ").size == 3);
  CHECK_THROWS_AS(parse_genspec("hexagon,size=3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_genspec("ap,colour=3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_genspec("ap,size=-3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_genspec("ap,size"), std::invalid_argument);
}

TEST_CASE("lattice points and two-line configurations") {
  const GenSpec L = parse_genspec("lattice,side=8");
  CHECK(L.size == 64);
  const auto pts = generate_points(L);
  CHECK(pts.size() == 64);
  CHECK_THROWS_AS(generate(L), std::invalid_argument);
  CHECK_THROWS_AS(generate_points(spec_of(GenKind::ap, 3)), std::invalid_argument);

  const GenSpec A = spec_of(GenKind::ap, 6), B = spec_of(GenKind::random, 4, 3);
  const auto [P1, P2] = generate_two_line_config(0, A, B);
  CHECK(P1.size() == 6);
  CHECK(P2.size() == 4);
  for (const Point2& p : P2.points()) CHECK(p.x == 0);
  for (Rat s : {Rat(0), rat(1, 3), Rat(-2)}) {
    const auto [Q1, Q2] = generate_two_line_config(s, A, B);
    CHECK(squared_distance_set_between(Q1, Q2) == image(two_line_spec(s), generate(A), generate(B)));
  }
}
