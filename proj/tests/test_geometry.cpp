#include <doctest.h>

#include "sumlab/geometry.hpp"

#include <random>
#include <set>
#include <sstream>

using namespace sumlab;

namespace {

std::vector<Point2> lattice(long side) {
  std::vector<Point2> v;
  for (long i = 0; i < side; ++i)
    for (long j = 0; j < side; ++j) v.push_back({Rat(i), Rat(j)});
  return v;
}

FiniteSet random_set(std::mt19937_64& rng, std::size_t n, long range) {
  std::set<long> v;
  std::uniform_int_distribution<long> d(-range, range);
  while (v.size() < n) v.insert(d(rng));
  return FiniteSet::from_ints(std::vector<long>(v.begin(), v.end()));
}

std::uint64_t brute_triples(const std::vector<Point2>& P) {
  std::uint64_t c = 0;
  for (const Point2& p : P)
    for (const Point2& q : P)
      for (const Point2& r : P) c += orientation(p, q, r) == 0;
  return c;
}

std::uint64_t brute_circle(const FiniteSet& A) {
  std::uint64_t c = 0;
  for (const Rat& a : A)
    for (const Rat& b : A)
      for (const Rat& x : A)
        for (const Rat& y : A) c += a * a + b * b == x * x + y * y;
  return c;
}

}  // namespace

TEST_CASE("point configurations and files") {
  CHECK_THROWS_AS(PointConfig({{1, 2}, {1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(PointConfig({{1, 2}}, {1, 2}), std::invalid_argument);
  std::istringstream in("# header\n1 2\n1/2 -3  # trailing\n\n0 0\n");
  const PointConfig P = read_points(in);
  REQUIRE(P.size() == 3);
  CHECK(P[1] == Point2{rat(1, 2), Rat(-3)});
  std::ostringstream out;
  write_points(out, P);
  CHECK(out.str() == "1 2\n1/2 -3\n0 0\n");
  std::istringstream bad("1 2 3\n");
  CHECK_THROWS_AS(read_points(bad), std::invalid_argument);
}

TEST_CASE("squared distance sets") {
  const PointConfig P1({{1, 0}, {2, 0}}), P2({{0, 1}, {0, 2}});
  const FiniteSet between = squared_distance_set_between(P1, P2);
  CHECK(between == FiniteSet::from_ints({2, 5, 8}));
  CHECK(!between.contains(0));
  CHECK(squared_distance_set_between(P1, PointConfig({{2, 0}})).contains(0));

  std::vector<Point2> line;
  for (long i = 0; i < 9; ++i) line.push_back({Rat(3 * i), Rat(0)});
  const FiniteSet d = squared_distance_set(PointConfig(line));
  CHECK(d.size() - 1 == 8);  // 0 plus n - 1 nonzero values
  CHECK(d.contains(0));

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const FiniteSet A = random_set(rng, 2 + trial, 40);
    std::vector<Point2> pts;
    for (const Rat& a : A) pts.push_back({a, Rat(0)});
    CHECK(diffset(A, A).size() == 2 * squared_distance_set(PointConfig(pts)).size() - 1);
  }
}

TEST_CASE("two-line polynomial realizes distances between the lines") {
  CHECK(two_line_spec(0).f() == make_spec("0 0 1", "0", "0 0 1").f());
  CHECK(image(two_line_spec(1), FiniteSet::from_ints({1, 2}), FiniteSet::from_ints({1})) ==
        FiniteSet::from_ints({1, 2}));
  std::mt19937_64 rng(4);
  for (Rat s : {Rat(0), Rat(1), rat(-2, 3), rat(5, 2)}) {
    const FiniteSet A = random_set(rng, 6, 12), B = random_set(rng, 5, 12);
    std::vector<Point2> P1, P2;
    for (const Rat& a : A) P1.push_back({a, Rat(0)});
    for (const Rat& b : B) P2.push_back({Rat(s * b), b});
    CHECK(image(two_line_spec(s), A, B) == squared_distance_set_between(PointConfig(P1), PointConfig(P2)));
  }
}

TEST_CASE("circle energy") {
  CHECK(circle_energy(FiniteSet::from_ints({0, 1})) == 6);
  const FiniteSet R10 = FiniteSet::from_ints({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  CHECK(circle_energy(R10) == brute_circle(R10));
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 8; ++trial) {
    const FiniteSet A = random_set(rng, 3 + trial, 15);
    const std::uint64_t q = circle_energy(A);
    CHECK(q == brute_circle(A));
    std::vector<Rat> sq;
    for (const Rat& a : A) sq.push_back(a * a);
    const FiniteSet S = FiniteSet::from_unsorted(sq);
    const std::uint64_t n = A.size();
    CHECK(q * sumset(S, S).size() >= n * n * n * n);
  }
}

TEST_CASE("line grouping and collinear triples") {
  const LineKey k = line_through({Rat(0), Rat(1)}, {Rat(2), Rat(3)});
  CHECK(k == line_through({Rat(5), Rat(6)}, {Rat(-1), Rat(0)}));
  CHECK(k.a == 1);
  CHECK(k.b == -1);
  CHECK(k.c == -1);
  CHECK(line_through({rat(1, 2), Rat(0)}, {rat(1, 2), Rat(7)}) == LineKey{Int(2), Int(0), Int(1)});
  CHECK_THROWS_AS(line_through({Rat(1), Rat(1)}, {Rat(1), Rat(1)}), std::invalid_argument);

  std::mt19937_64 rng(6);
  std::uniform_int_distribution<long> c(-4, 4);
  for (int trial = 0; trial < 6; ++trial) {
    std::set<Point2> s;
    while (s.size() < 40u + 5u * trial) s.insert({Rat(c(rng)), rat(c(rng), 1 + trial % 3)});
    const std::vector<Point2> P(s.begin(), s.end());
    const auto lines = group_lines(P);
    std::uint64_t pairs = 0;
    for (const auto& [key, kk] : lines) pairs += kk * (kk - 1) / 2;
    CHECK(pairs == P.size() * (P.size() - 1) / 2);
    CHECK(collinear_triples(P) == brute_triples(P));
  }
  const auto L = lattice(4);
  CHECK(collinear_triples(L) == brute_triples(L));
  CHECK(collinear_triples({}) == 0);
  CHECK(collinear_triples({{Rat(1), Rat(1)}}) == 1);
}

TEST_CASE("collinear triples from the circle energy") {
  CHECK(orientation({0, 0}, {-3, 9}, {-1, 3}) == 0);
  const CollinearReport r = collinear_triples_from_Q(FiniteSet::from_ints({0, 1, 2, 3}));
  CHECK(!r.zero_added);
  CHECK(r.identity_failures == 0);
  CHECK(r.identity_checks == 16 * r.q);
  CHECK(r.q == circle_energy(FiniteSet::from_ints({0, 1, 2, 3})));
  CHECK(r.lower.passed());

  const CollinearReport s = collinear_triples_from_Q(FiniteSet::from_ints({1, 3, 4, 7}));
  CHECK(s.zero_added);
  CHECK(s.A.size() == 5);
  CHECK(s.lower.passed());
  CHECK(s.to_json()["zeroAdded"] == true);
}

TEST_CASE("A^2 + A^2 chain") {
  for (long n : {5L, 16L}) {
    std::vector<long> v;
    for (long i = 1; i <= n; ++i) v.push_back(i);
    const FiniteSet A = FiniteSet::from_ints(v);
    const AsquaredReport r = asquared_chain(A, 2);
    CHECK(r.triple_sum == static_cast<std::uint64_t>(3 * n - 2));
    CHECK(r.diff_sum == static_cast<std::uint64_t>(3 * n - 2));
    CHECK(r.doubling_hypothesis);
    std::set<long> sq;
    for (long a = 1; a <= n; ++a)
      for (long b = 1; b <= n; ++b) sq.insert(a * a + b * b);
    CHECK(r.squares_sum == sq.size());
    CHECK(r.chain_rhs == doctest::Approx(std::pow(static_cast<double>(n), 6)));
    for (const ClaimReport& c : r.plunnecke) CHECK(c.passed());
  }
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const AsquaredReport r = asquared_chain(random_set(rng, 4 + trial, 30), 1);
    CHECK(!r.doubling_hypothesis);
    for (const ClaimReport& c : r.plunnecke) CHECK(c.passed());
  }
}

TEST_CASE("heavy line experiment") {
  const HeavyLineReport r = heavy_line_experiment(PointConfig(lattice(8)));
  REQUIRE(r.applicable);
  CHECK(r.n == 64);
  CHECK(r.m == 8);
  CHECK((r.line.a == 0 || r.line.b == 0));
  CHECK(r.k == 8);
  CHECK(r.incidences == r.q_prime);
  for (const ClaimReport& c : r.claims) CHECK(c.verdict != Verdict::fail);
  CHECK(!r.heavy_regime);

  // Q and Q' by direct enumeration in the original coordinates.
  const auto L5 = lattice(5);
  const HeavyLineReport s = heavy_line_experiment(PointConfig(L5));
  std::vector<Point2> P1;
  for (const Point2& p : L5)
    if (s.line.a * p.x + s.line.b * p.y == s.line.c) P1.push_back(p);
  REQUIRE(P1.size() == s.m);
  // a x + b y - c is a fixed multiple of the signed distance to the line
  auto height2 = [&](const Point2& p) -> Rat {
    const Rat v = s.line.a * p.x + s.line.b * p.y - s.line.c;
    return v * v;
  };
  std::uint64_t q = 0, qp = 0;
  for (const Point2& a : P1)
    for (const Point2& b : P1)
      for (const Point2& p : L5)
        for (const Point2& x : L5)
          if (squared_distance(a, p) == squared_distance(b, x)) {
            ++q;
            qp += height2(p) != height2(x);
          }
  CHECK(s.q == q);
  CHECK(s.q_prime == qp);
  CHECK(s.incidences == qp);

  std::vector<Point2> line;
  for (long i = 0; i < 10; ++i) line.push_back({Rat(i), Rat(2 * i + 1)});
  const HeavyLineReport t = heavy_line_experiment(PointConfig(line));
  CHECK(t.m == 10);
  CHECK(t.q_prime == 0);
  CHECK(t.incidences == 0);

  // slanted heavy line through rational points
  std::vector<Point2> slant = line;
  slant.push_back({Rat(0), Rat(5)});
  slant.push_back({rat(7, 2), Rat(-1)});
  const HeavyLineReport u = heavy_line_experiment(PointConfig(slant));
  CHECK(u.m == 10);
  CHECK(u.line == line_through(line[0], line[1]));
  CHECK(u.incidences == u.q_prime);
  CHECK(u.q_prime > 0);
  for (const ClaimReport& c : u.claims) CHECK(c.verdict != Verdict::fail);

  const HeavyLineReport none = heavy_line_experiment(PointConfig({{Rat(1), Rat(1)}}));
  CHECK(!none.applicable);
  CHECK(none.to_json()["applicable"] == false);
}
