#include <doctest.h>

#include "energy_oracles.hpp"
#include "sumlab/energy.hpp"
#include "sumlab/parallel.hpp"

#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace sumlab;

namespace {
FiniteSet S(std::initializer_list<long> v) { return FiniteSet::from_ints(v); }

FiniteSet random_set(std::mt19937_64& rng, std::size_t n, long range) {
  std::set<long> v;
  std::uniform_int_distribution<long> d(-range, range);
  while (v.size() < n) v.insert(d(rng));
  return FiniteSet::from_ints(std::vector<long>(v.begin(), v.end()));
}

const PolySpec kSum = make_spec("0 1", "0", "0 1");
const PolySpec kSquares = make_spec("0 0 1", "0", "0 0 1");
const PolySpec kCubic = make_spec("0 -3 0 1", "0 1", "0 0 1");
const PolySpec kSheared = make_spec("1 0 2", "0 0 1", "0 1 1");

std::vector<PolySpec> specs() { return {kSum, kSquares, kCubic, kSheared}; }
}  // namespace

TEST_CASE("EnergyTable totals and csv round trip") {
  EnergyTable e;
  e.add(rat(1, 2), 3);
  e.add(Rat(-4));
  e.add(rat(1, 2));
  CHECK(e.total == 5);
  CHECK(e.squared_total == 17);
  CHECK(e.multiplicity(rat(1, 2)) == 4);
  CHECK(e.multiplicity(Rat(7)) == 0);
  CHECK(e.consistent());
  std::stringstream ss;
  e.write_csv(ss);
  CHECK(ss.str() == "numerator,denominator,multiplicity\n-4,1,1\n1,2,4\n");
  EnergyTable back = EnergyTable::read_csv(ss);
  CHECK(back.levels == e.levels);
  CHECK(back.squared_total == e.squared_total);
  std::istringstream broken("numerator,denominator,multiplicity\n1,0,3\n");
  CHECK_THROWS_AS(EnergyTable::read_csv(broken), std::invalid_argument);
}

TEST_CASE("energy_Q examples") {
  CHECK(energy_Q(kSum, S({1, 2}), S({1, 2})).squared_total == 6);
  for (const PolySpec& s : specs()) CHECK(energy_Q(s, S({3}), S({-1})).squared_total == 1);
  FiniteSet R5 = S({0, 1, 2, 3, 4});
  EnergyTable q = energy_Q(kSquares, R5, R5);
  CHECK(q.squared_total == oracle::Q(kSquares, R5, R5));
  CHECK(q.total == 25);
  CHECK(q.consistent());
}

TEST_CASE("energy_Q against the quadruple loop, with Cauchy-Schwarz and degree bounds") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 24; ++trial) {
    const PolySpec s = specs()[trial % 4];
    FiniteSet A = random_set(rng, 2 + trial % 5, 6), B = random_set(rng, 2 + (trial / 2) % 5, 6);
    if (trial % 3 == 0) A = FiniteSet::from_unsorted({rat(1, 2), rat(3, 2), rat(-2, 3), Rat(2)});
    EnergyTable q = energy_Q(s, A, B);
    CHECK(q.squared_total == oracle::Q(s, A, B));
    std::uint64_t nA = A.size(), nB = B.size(), d = s.degree();
    CHECK(q.squared_total * image(s, A, B).size() >= nA * nA * nB * nB);
    CHECK(q.squared_total <= d * nA * nA * nB);
    CHECK(q.squared_total <= d * nA * nB * nB);
  }
}

TEST_CASE("count_Q_bad") {
  FiniteSet R3 = S({1, 2, 3});
  // Only the diagonal is bad; a1^2 = a2^2 forces a1 = a2 on positive A.
  CHECK(count_Q_bad(kSquares, R3, R3) == 9);
  CHECK(count_Q_bad(kSquares, R3, R3) == oracle::Q(kSquares, R3, R3, true));
  // Symmetric B adds the pairs (b, -b).
  FiniteSet Bs = S({-2, -1, 1, 2});
  CHECK(count_Q_bad(kSquares, R3, Bs) == oracle::Q(kSquares, R3, Bs, true));
  CHECK(count_Q_bad(kSum, R3, R3) == 0);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const PolySpec s = specs()[1 + trial % 3];
    FiniteSet A = random_set(rng, 2 + trial % 4, 5), B = random_set(rng, 2 + trial % 5, 5);
    std::uint64_t c = count_Q_bad(s, A, B), d = s.degree();
    if (trial < 15) CHECK(c == oracle::Q(s, A, B, true));
    CHECK(c <= 2 * d * d * d * A.size() * B.size());
  }
}

TEST_CASE("build_P flags and symmetry") {
  FiniteSet R3 = S({1, 2, 3});
  PairSet P = build_P(kSquares, R3, Rat(1));
  CHECK(P.members == IndexPairs{{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}});
  CHECK_FALSE(P.below_standing_assumption);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 12; ++trial) {
    const PolySpec s = specs()[trial % 4];
    FiniteSet B = trial % 2 ? random_set(rng, 7, 4) : S({-3, -2, -1, 0, 1, 2, 3});
    Rat t = rat(1 + trial % 4, 7);
    PairSet p = build_P(s, B, t);
    CHECK(p.pairs.size() == B.size() * B.size());
    for (const ClassifiedPair& c : p.pairs) {
      CHECK(c.t_close == is_t_close(B, B[c.i], B[c.j], t));
      CHECK(c.bad == oracle::bad(s, B[c.i], B[c.j]));
      CHECK(p.admitted(c.i, c.j) == (c.t_close && !c.bad));
      CHECK(p.admitted(c.i, c.j) == p.admitted(c.j, c.i));
    }
    StEnergy st = energy_St(s, B, t);
    for (const auto& [d, m] : st.p_delta.levels) CHECK(st.p_delta.multiplicity(-d) == m);
  }
  CHECK(build_P(kSquares, S({1, 2, 3, 4, 5}), rat(1, 10)).below_standing_assumption);
}

TEST_CASE("energy_St") {
  FiniteSet R3 = S({1, 2, 3});
  StEnergy st = energy_St(kSquares, R3, Rat(1));
  CHECK(st.st == oracle::St(kSquares, R3, Rat(1)));
  CHECK(st.st == st.p_delta.squared_total);
  CHECK(energy_St(kSquares, S({5}), Rat(1)).st == 0);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 16; ++trial) {
    const PolySpec s = specs()[trial % 4];
    FiniteSet B = trial % 2 ? random_set(rng, 6, 5) : S({0, 1, 2, 3, 4, 5});
    std::uint64_t prev = 0;
    for (int k = 1; k <= 6; ++k) {
      Rat t = rat(k, 6);
      std::uint64_t v = energy_St(s, B, t).st;
      CHECK(v == oracle::St(s, B, t));
      CHECK(v >= prev);
      prev = v;
      std::uint64_t n = B.size(), dh = s.h.degree();
      CHECK(Rat(static_cast<long>(v)) <= Rat(static_cast<long>(3 * dh * n * n * n)) * t);
    }
  }
}

TEST_CASE("energy_Rt against the six-fold loop") {
  FiniteSet one = S({2});
  CHECK(energy_Rt(kSum, one, S({-1}), Rat(1)) == 1);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 12; ++trial) {
    const PolySpec s = specs()[trial % 4];
    FiniteSet A = random_set(rng, 3 + trial % 2, 4), B = random_set(rng, 3 + (trial / 4) % 2, 4);
    std::uint64_t prev = 0;
    for (Rat t : {rat(1, 4), rat(1, 2), Rat(1)}) {
      std::uint64_t v = energy_Rt(s, A, B, t);
      CHECK(v == oracle::Rt(s, A, B, t));
      CHECK(v >= prev);
      prev = v;
    }
    // At t = 1 each tuple of Q' lifts to |A|^2 distinct elements.
    std::uint64_t qprime = oracle::Q(s, A, B) - oracle::Q(s, A, B, true);
    CHECK(prev >= A.size() * A.size() * qprime);
  }
}

TEST_CASE("energy_Ttr") {
  FiniteSet B = S({0, 1, 2, 3, 4, 5});
  PairSet P = build_P(kSquares, B, Rat(1));
  CHECK(energy_Ttr(kSquares, B, P.members, Rat(1), Rat(1)) == oracle::Ttr(kSquares, B, P.members, Rat(1), Rat(1)));
  CHECK_THROWS_AS(energy_Ttr(kSquares, B, P.members, rat(1, 2), rat(1, 3)), std::invalid_argument);
  CHECK_THROWS_AS(energy_Ttr(kSquares, B, P.members, Rat(0), Rat(1)), std::invalid_argument);

  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const PolySpec s = specs()[trial % 4];
    FiniteSet Bt = random_set(rng, 5, 5);
    Rat t = rat(1, 5);
    HostSelection hs = select_hosts(s, Bt, t);
    if (hs.empty) continue;
    for (Rat r : {t, rat(1, 2), Rat(1)}) {
      CHECK(energy_Ttr(s, Bt, hs.S, t, r) == oracle::Ttr(s, Bt, hs.S, t, r));
    }
    // r = t leaves the proximity on (beta, b') vacuous.
    CHECK(energy_Ttr(s, Bt, hs.S, t, t) == energy_Ttr(s, Bt, hs.S, Rat(1), Rat(1)));
  }
}

TEST_CASE("select_hosts") {
  CHECK(select_hosts(kSquares, S({4}), Rat(1)).empty);

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const PolySpec s = specs()[trial % 4];
    FiniteSet B = trial % 3 ? random_set(rng, 8, 6) : S({0, 1, 2, 3, 4, 5, 6, 7});
    Rat t = rat(1 + trial % 4, 4);
    HostSelection hs = select_hosts(s, B, t);
    StEnergy st = energy_St(s, B, t);
    REQUIRE(hs.st == st.st);
    if (hs.empty) {
      CHECK(st.st == 0);
      continue;
    }
    CHECK(hs.R.size() == hs.S.size());
    CHECK(std::set<IndexPair>(hs.R.begin(), hs.R.end()) == std::set<IndexPair>(hs.S.begin(), hs.S.end()));
    CHECK(2 * hs.m * hs.R.size() >= hs.st_star);
    std::uint64_t nb = B.size();
    CHECK(hs.st_star * dyadic_class_count(nb * nb) >= hs.st);

    // Recount each pair's S-degree.
    std::vector<Rat> hB;
    for (const Rat& b : B) hB.push_back(s.h.eval(b));
    std::uint64_t star = 0;
    for (auto [b1, b2] : hs.R) {
      std::uint64_t deg = 0;
      for (auto [c1, c2] : hs.S)
        if (hB[b1] + hB[c1] == hB[b2] + hB[c2]) ++deg;
      CHECK(deg >= hs.m);
      CHECK(deg < 2 * hs.m);
      star += deg;
    }
    CHECK(star == hs.st_star);

    // No other dyadic class carries more weight; ties went to the smaller m.
    std::map<std::uint64_t, std::uint64_t> w;
    for (const auto& [d, m] : st.p_delta.levels) w[std::uint64_t{1} << (dyadic_class_count(m) - 1)] += m * m;
    for (const auto& [m, x] : w) {
      CHECK(x <= hs.st_star);
      if (x == hs.st_star) CHECK(m >= hs.m);
    }
  }
  // Uniform multiplicities: one class holds everything.
  HostSelection u = select_hosts(kSquares, S({0, 1}), Rat(1));
  CHECK(u.st_star == u.st);
}

TEST_CASE("counts do not depend on the worker count") {
  FiniteSet A = S({0, 1, 3, 4, 7, 9}), B = S({-2, -1, 0, 2, 3, 5});
  set_default_threads(1);
  std::uint64_t rt1 = energy_Rt(kCubic, A, B, rat(1, 2));
  std::uint64_t qb1 = count_Q_bad(kSquares, A, B);
  HostSelection hs = select_hosts(kSquares, B, Rat(1));
  std::uint64_t t1 = energy_Ttr(kSquares, B, hs.S, rat(1, 3), rat(2, 3));
  set_default_threads(4);
  CHECK(energy_Rt(kCubic, A, B, rat(1, 2)) == rt1);
  CHECK(count_Q_bad(kSquares, A, B) == qb1);
  CHECK(energy_Ttr(kSquares, B, hs.S, rat(1, 3), rat(2, 3)) == t1);
  set_default_threads(1);
}

TEST_CASE("dyadic_class_count") {
  CHECK(dyadic_class_count(1) == 1);
  CHECK(dyadic_class_count(2) == 2);
  CHECK(dyadic_class_count(3) == 2);
  CHECK(dyadic_class_count(1024) == 11);
  CHECK_THROWS(dyadic_class_count(0));
}
