#include <doctest.h>

#include "energy_oracles.hpp"
#include "sumlab/parallel.hpp"
#include "sumlab/proximity.hpp"

#include <random>
#include <set>

using namespace sumlab;

namespace {
FiniteSet S(std::initializer_list<long> v) { return FiniteSet::from_ints(v); }
FiniteSet range_set(long lo, long hi) {
  std::vector<long> v;
  for (long i = lo; i <= hi; ++i) v.push_back(i);
  return FiniteSet::from_ints(v);
}
FiniteSet random_set(std::mt19937_64& rng, std::size_t n, long range) {
  std::set<long> v;
  std::uniform_int_distribution<long> d(-range, range);
  while (v.size() < n) v.insert(d(rng));
  return FiniteSet::from_ints(std::vector<long>(v.begin(), v.end()));
}
Point2 P(long x, long y) { return {Rat(x), Rat(y)}; }

Rat phi_by_definition(const FiniteSet& A, const Rat& a) {
  FiniteSet AA = sumset(A, A);
  Rat s = 0;
  for (const Rat& b : A) s += Rat(static_cast<unsigned long>(index_of(AA, a + b)));
  return s / Rat(static_cast<unsigned long>(A.size()));
}

std::uint64_t six_loop(const FiniteSet& A, const FiniteSet& B, const std::vector<Point2>& M, const Rat& t) {
  FiniteSet AA = sumset(A, A);
  std::uint64_t c = 0;
  for (const Point2& p : M)
    for (const Point2& q : M) {
      if (!is_t_close(A, p.x, q.x, t) || !is_t_close(B, p.y, q.y, t)) continue;
      for (const Rat& x : A)
        for (const Rat& y : A)
          if (is_t_close(A, x, y, t) && is_t_close(AA, p.x + x, q.x + y, t)) ++c;
    }
  return c;
}

bool is_monotone_by_definition(const std::vector<Point2>& M) {
  bool inc = true, dec = true;
  for (const Point2& p : M)
    for (const Point2& q : M)
      if (p.x < q.x) {
        if (p.y > q.y) inc = false;
        if (p.y < q.y) dec = false;
      }
  return inc || dec;
}
}  // namespace

TEST_CASE("phi and psi") {
  AvgIndexFn f = phi(S({0, 1}));
  CHECK(f.ambient == S({0, 1, 2}));
  CHECK(f(Rat(0)) == rat(3, 2));
  CHECK(f(Rat(1)) == rat(5, 2));
  CHECK_THROWS_AS(f(Rat(7)), MembershipError);

  for (long n : {1, 2, 5, 12}) {
    FiniteSet A = range_set(0, n - 1);
    AvgIndexFn g = phi(A);
    for (long i = 0; i < n; ++i) CHECK(g.at(i) == Rat(i + 1) + rat(n - 1, 2));
  }

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    FiniteSet B = random_set(rng, 3 + trial * 3, 40);
    if (trial % 3 == 0) B = FiniteSet::from_unsorted({rat(1, 3), rat(1, 2), Rat(2), rat(7, 3), Rat(10)});
    AvgIndexFn g = psi(B);
    for (std::size_t i = 0; i < B.size(); ++i) {
      CHECK(g.at(i) == phi_by_definition(B, B[i]));
      CHECK(g.at(i) >= 1);
      CHECK(g.at(i) <= Rat(static_cast<unsigned long>(g.ambient.size())));
      if (i > 0) CHECK(g.at(i) >= g.at(i - 1));
    }
  }
}

TEST_CASE("monotone decomposition") {
  std::vector<Point2> circle;
  for (long x = -5; x <= 5; ++x)
    for (long y = -5; y <= 5; ++y)
      if (x * x + y * y == 25) circle.push_back(P(x, y));
  REQUIRE(circle.size() == 12);
  MonotoneDecomposition d = monotone_decompose(circle);
  CHECK(d.pieces.size() == 4);
  std::vector<Point2> arc = {P(0, 5), P(3, 4), P(4, 3), P(5, 0)};
  bool found = false;
  std::size_t largest = 0;
  for (const auto& piece : d.pieces) {
    largest = std::max(largest, piece.points.size());
    if (piece.points == arc) found = true;
  }
  CHECK(found);
  CHECK(largest == 4);
  CHECK(d.pieces.size() <= monotone_piece_bound(2));

  std::vector<Point2> line;
  for (long i = 0; i < 9; ++i) line.push_back(P(i, 7 - 2 * i));
  CHECK(monotone_decompose(line).pieces.size() == 1);
  CHECK(monotone_decompose({P(1, 1)}).pieces.size() == 1);
  CHECK_THROWS_AS(monotone_decompose({P(1, 1), P(1, 1)}), std::invalid_argument);

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    std::set<Point2> pts;
    std::uniform_int_distribution<long> c(-6, 6);
    while (pts.size() < static_cast<std::size_t>(5 + trial)) pts.insert(P(c(rng), c(rng)));
    std::vector<Point2> in(pts.begin(), pts.end());
    MonotoneDecomposition md = monotone_decompose(in);
    std::vector<Point2> all;
    for (const auto& piece : md.pieces) {
      CHECK(is_monotone_by_definition(piece.points));
      CHECK(monotone_direction(piece.points).has_value());
      CHECK(order_monotone(piece.points) == piece.points);
      all.insert(all.end(), piece.points.begin(), piece.points.end());
    }
    std::sort(all.begin(), all.end());
    CHECK(all == in);
    CHECK(monotone_direction(in).has_value() == is_monotone_by_definition(in));
  }

  // Points of a cubic curve y = x^3 - 9x on a grid.
  std::vector<Point2> cubic;
  for (long x = -5; x <= 5; ++x) cubic.push_back(P(x, x * x * x - 9 * x));
  CHECK(monotone_decompose(cubic).pieces.size() <= monotone_piece_bound(3));
}

TEST_CASE("claim: choose pairs from M") {
  FiniteSet A = range_set(1, 10), B = range_set(1, 10);
  std::vector<Point2> M;
  for (long i = 1; i <= 10; ++i) M.push_back(P(i, i));
  ClaimReport r = verify_claim_choose_pairs(A, B, M, rat(1, 2));  // k = 0
  CHECK(r.passed());
  CHECK(r.lhs == 10);

  // 200 points on the parabola y = x^2.
  std::mt19937_64 rng(4);
  std::set<long> xs;
  std::uniform_int_distribution<long> d(1, 5000);
  while (xs.size() < 200) xs.insert(d(rng));
  std::vector<Rat> av, bv;
  std::vector<Point2> conic;
  for (long x : xs) {
    av.push_back(Rat(x));
    bv.push_back(Rat(x * x));
    conic.push_back(P(x, x * x));
  }
  FiniteSet Ac(av), Bc(bv);
  ClaimReport rc = verify_claim_choose_pairs(Ac, Bc, conic, rat(1, 2));
  CHECK(rc.passed());
  CHECK(rc.lhs >= 100);

  // Clustered A: two tight clumps far apart, decreasing M.
  std::vector<long> clumps;
  for (long i = 0; i < 60; ++i) clumps.push_back(i);
  for (long i = 0; i < 60; ++i) clumps.push_back(100000 + i * 1000);
  FiniteSet Ak = FiniteSet::from_ints(clumps);
  std::vector<Point2> dec;
  for (std::size_t i = 0; i < Ak.size(); ++i) dec.push_back({Ak[i], Rat(static_cast<long>(200 - i))});
  std::vector<long> ys;
  for (long i = 81; i <= 200; ++i) ys.push_back(i);
  ClaimReport rk = verify_claim_choose_pairs(Ak, FiniteSet::from_ints(ys), dec, Rat(1));
  CHECK(rk.passed());

  CHECK(verify_claim_choose_pairs(A, B, {P(1, 2), P(2, 1), P(3, 3)}, rat(1, 2)).verdict == Verdict::inapplicable);
  CHECK(verify_claim_choose_pairs(A, B, {P(100, 1)}, rat(1, 2)).verdict == Verdict::inapplicable);
}

TEST_CASE("claim: phi to a-primes") {
  FiniteSet A = range_set(0, 39);
  ClaimReport same = verify_claim_phi_to_aprimes(A, Rat(7), Rat(7), rat(1, 2));
  CHECK(same.passed());
  CHECK(same.lhs == 40 - 2);  // l = floor(40/16) = 2; every i qualifies

  ClaimReport adj = verify_claim_phi_to_aprimes(A, Rat(7), Rat(8), rat(1, 2));
  CHECK(adj.passed());
  CHECK(adj.lhs >= 37);

  std::mt19937_64 rng(8);
  FiniteSet R = random_set(rng, 300, 100000);
  AvgIndexFn f = phi(R);
  Rat gap = rat(1, 2) * Rat(static_cast<unsigned long>(f.ambient.size())) / 8;
  int tried = 0;
  for (std::size_t i = 0; i + 1 < R.size() && tried < 10; i += 29) {
    std::size_t j = i + 1;
    while (j + 1 < R.size() && f.at(j + 1) - f.at(i) <= gap) ++j;
    ClaimReport rep = verify_claim_phi_to_aprimes(R, R[i], R[j], rat(1, 2));
    CHECK(rep.passed());
    ++tried;
  }

  CHECK(verify_claim_phi_to_aprimes(A, Rat(8), Rat(7), rat(1, 2)).verdict == Verdict::inapplicable);
  CHECK(verify_claim_phi_to_aprimes(A, Rat(0), Rat(39), rat(1, 2)).verdict == Verdict::inapplicable);
}

TEST_CASE("six-tuple counts") {
  FiniteSet A = range_set(0, 5), B = range_set(0, 5);
  std::vector<Point2> M = {P(0, 5), P(1, 3), P(2, 2), P(4, 1), P(5, 0)};
  CHECK(count_prox_6tuples(A, B, M, Rat(1)) == 36 * 25);

  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 12; ++trial) {
    FiniteSet At = random_set(rng, 5 + trial % 4, 20), Bt = random_set(rng, 6, 20);
    std::vector<Point2> Mt;
    for (std::size_t i = 0; i < std::min(At.size(), Bt.size()); ++i)
      Mt.push_back({At[i], trial % 2 ? Bt[i] : Bt[Bt.size() - 1 - i]});
    for (Rat t : {rat(1, 5), rat(1, 2), Rat(1)}) {
      std::uint64_t exact = count_prox_6tuples(At, Bt, Mt, t);
      CHECK(exact == six_loop(At, Bt, Mt, t));
      CHECK(count_prox_6tuples_constructive(At, Bt, Mt, t) <= exact);
    }
  }

  FiniteSet D = range_set(0, 15);
  std::vector<Point2> diag;
  for (long i = 0; i <= 15; ++i) diag.push_back(P(i, i));
  std::uint64_t c = count_prox_6tuples(D, D, diag, rat(1, 2));
  CHECK(c == six_loop(D, D, diag, rat(1, 2)));
  CHECK(Rat(static_cast<unsigned long>(c)) >= rat(1, 1024) * rat(1, 4) * 256 * 256);
  ClaimReport rep = verify_prox_lower(D, D, diag, rat(1, 2));
  CHECK(rep.passed());

  // The recipe alone already clears the bound whenever the claims hold.
  std::vector<Point2> big;
  FiniteSet E = range_set(0, 63);
  for (long i = 0; i <= 63; ++i) big.push_back(P(i, 63 - i));
  std::uint64_t recipe = count_prox_6tuples_constructive(E, E, big, rat(1, 2));
  CHECK(Rat(static_cast<unsigned long>(recipe)) >= rat(1, 1024) * rat(1, 4) * 64 * 64 * 64 * 64);
  CHECK(recipe <= count_prox_6tuples(E, E, big, rat(1, 2)));

  CHECK(verify_prox_lower(D, D, diag, rat(1, 100)).verdict == Verdict::inapplicable);
}

TEST_CASE("psi claims") {
  FiniteSet B = range_set(0, 63);
  auto reps = verify_psi_claims(B, rat(1, 4), rat(1, 2));
  REQUIRE(reps.size() == 2);
  CHECK(reps[0].passed());
  CHECK(reps[1].passed());
  CHECK(verify_psi_skip(B, rat(1, 4), Rat(1)).passed());
  CHECK(verify_psi_to_bprime(B, Rat(10), Rat(10), rat(1, 4), rat(1, 2)).passed());
  CHECK(verify_psi_to_bprime(B, Rat(11), Rat(10), rat(1, 4), rat(1, 2)).verdict == Verdict::inapplicable);
  CHECK(verify_psi_skip(B, rat(1, 2), rat(1, 4)).verdict == Verdict::inapplicable);

  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 8; ++trial) {
    FiniteSet R = random_set(rng, 40 + 10 * trial, 5000);
    for (auto [t, r] : {std::pair{rat(1, 8), rat(1, 4)}, std::pair{rat(1, 4), rat(1, 4)}, std::pair{rat(1, 10), Rat(1)}})
      for (const ClaimReport& c : verify_psi_claims(R, t, r)) CHECK_FALSE(c.failed());
  }
}

TEST_CASE("rtr lower bound") {
  PolySpec sq = make_spec("0 0 1", "0", "0 0 1");
  RtrLower res = verify_rtr_lower(sq, range_set(0, 39), rat(1, 2));
  CHECK(res.report.passed());
  CHECK(res.r >= rat(1, 2));
  CHECK(res.ttr > 0);

  // r = t: the proximity restriction on (beta, b') is vacuous.
  RtrLower small = verify_rtr_lower(sq, range_set(1, 12), rat(1, 3));
  CHECK(small.report.passed());

  PolySpec lin = make_spec("0 0 1", "0", "0 1");
  CHECK(verify_rtr_lower(lin, range_set(0, 9), rat(1, 2)).report.verdict == Verdict::inapplicable);

  std::mt19937_64 rng(31);
  PolySpec cub = make_spec("0 1", "0", "0 1 0 1");
  for (int trial = 0; trial < 4; ++trial) {
    FiniteSet Bt = random_set(rng, 12, 8);
    RtrLower rr = verify_rtr_lower(trial % 2 ? cub : sq, Bt, rat(1, 3));
    CHECK_FALSE(rr.report.failed());
  }
}

TEST_CASE("T_{t,r} is invariant under swapping the two index roles") {
  PolySpec sq = make_spec("0 0 1", "0", "1 0 1");
  FiniteSet B = S({-3, -1, 0, 2, 3, 5, 6});
  IndexPairs Sp = {{0, 1}, {2, 5}, {3, 3}, {6, 4}, {1, 4}};
  IndexPairs swapped;
  for (auto [i, j] : Sp) swapped.emplace_back(j, i);
  for (auto [t, r] : {std::pair{rat(1, 3), rat(1, 2)}, std::pair{Rat(1), Rat(1)}}) {
    std::uint64_t a = energy_Ttr(sq, B, Sp, t, r);
    CHECK(a == energy_Ttr(sq, B, swapped, t, r));
    CHECK(a == oracle::Ttr(sq, B, Sp, t, r));
  }
}
