#include "sumlab/proximity.hpp"

#include "sumlab/parallel.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sumlab {

namespace {

Rat as_rat(std::size_t n) { return Rat(static_cast<unsigned long>(n)); }

std::string describe(std::initializer_list<std::pair<const char*, std::string>> fields) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [k, v] : fields) {
    out << (first ? "" : " ") << k << '=' << v;
    first = false;
  }
  return out.str();
}

std::string num(std::size_t n) { return std::to_string(n); }

bool valid_t(const Rat& t) { return t > 0 && t <= 1; }

}  // namespace

const Rat& AvgIndexFn::operator()(const Rat& x) const {
  std::size_t i = base.find(x);
  if (i == FiniteSet::npos) throw MembershipError("average index: " + to_string(x) + " is not in the base set");
  return values[i];
}

std::vector<std::vector<std::uint32_t>> sum_index_table(const FiniteSet& X, const FiniteSet& XX) {
  const std::size_t n = X.size();
  std::vector<std::vector<std::uint32_t>> T(n, std::vector<std::uint32_t>(n));
  parallel_for(n, [&](std::size_t i) {
    std::size_t p = 0;
    for (std::size_t j = 0; j < n; ++j) {
      Rat s = X[i] + X[j];
      while (p < XX.size() && XX[p] < s) ++p;
      if (p == XX.size() || XX[p] != s) throw std::logic_error("sum_index_table: sum missing from ambient set");
      T[i][j] = static_cast<std::uint32_t>(p + 1);
    }
  });
  return T;
}

namespace {

AvgIndexFn avg_index(const FiniteSet& X) {
  AvgIndexFn f;
  f.base = X;
  if (X.empty()) return f;
  f.ambient = sumset(X, X);
  auto T = sum_index_table(X, f.ambient);
  for (const auto& row : T) {
    std::uint64_t s = 0;
    for (auto v : row) s += v;
    f.values.push_back(Rat(static_cast<unsigned long>(s)) / as_rat(X.size()));
  }
  return f;
}

}  // namespace

AvgIndexFn phi(const FiniteSet& A) { return avg_index(A); }
AvgIndexFn psi(const FiniteSet& B) { return avg_index(B); }

std::optional<Direction> monotone_direction(const std::vector<Point2>& points) {
  std::vector<Point2> s = points;
  std::sort(s.begin(), s.end());
  // Per distinct x: min and max y. Increasing needs max of each column <= min of every later column.
  bool inc = true, dec = true;
  Rat prev_max, prev_min;
  bool have = false;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t j = i;
    while (j < s.size() && s[j].x == s[i].x) ++j;
    const Rat& lo = s[i].y;
    const Rat& hi = s[j - 1].y;
    if (have) {
      if (prev_max > lo) inc = false;
      if (prev_min < hi) dec = false;
      prev_max = std::max(prev_max, hi);
      prev_min = std::min(prev_min, lo);
    } else {
      prev_max = hi;
      prev_min = lo;
      have = true;
    }
    i = j;
  }
  if (inc) return Direction::increasing;
  if (dec) return Direction::decreasing;
  return std::nullopt;
}

namespace {

// Longest nondecreasing (strictly increasing when `strict`) subsequence of ys,
// as positions in order.
std::vector<std::size_t> longest_chain(const std::vector<Rat>& ys, bool strict) {
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> tails, parent(ys.size(), none);
  auto less = [&](std::size_t a, std::size_t b) { return ys[a] < ys[b]; };
  for (std::size_t i = 0; i < ys.size(); ++i) {
    auto it = strict ? std::lower_bound(tails.begin(), tails.end(), i, less)
                     : std::upper_bound(tails.begin(), tails.end(), i, less);
    if (it != tails.begin()) parent[i] = *(it - 1);
    if (it == tails.end())
      tails.push_back(i);
    else
      *it = i;
  }
  std::vector<std::size_t> chain;
  if (tails.empty()) return chain;
  for (std::size_t i = tails.back(); i != none; i = parent[i]) chain.push_back(i);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

// Sorted so that chains in `dir` are subsequences; strict chains also need
// equal-x points ordered against the direction.
std::vector<Point2> sorted_for(std::vector<Point2> pts, Direction dir, bool strict = false) {
  bool y_up = (dir == Direction::increasing) != strict;
  std::sort(pts.begin(), pts.end(), [y_up](const Point2& a, const Point2& b) {
    if (a.x != b.x) return a.x < b.x;
    return y_up ? a.y < b.y : a.y > b.y;
  });
  return pts;
}

std::vector<std::size_t> best_chain(const std::vector<Point2>& sorted, Direction dir, bool strict) {
  std::vector<Rat> ys;
  ys.reserve(sorted.size());
  for (const Point2& p : sorted) ys.push_back(dir == Direction::increasing ? p.y : Rat(-p.y));
  return longest_chain(ys, strict);
}

}  // namespace

MonotoneDecomposition monotone_decompose(std::vector<Point2> points) {
  std::sort(points.begin(), points.end());
  if (std::adjacent_find(points.begin(), points.end()) != points.end())
    throw std::invalid_argument("monotone_decompose: duplicate points");
  MonotoneDecomposition out;
  // Longest chain wins; ties prefer strict chains, then decreasing ones.
  const std::pair<Direction, bool> order[] = {{Direction::decreasing, true},
                                              {Direction::increasing, true},
                                              {Direction::decreasing, false},
                                              {Direction::increasing, false}};
  while (!points.empty()) {
    std::vector<Point2> best_src;
    std::vector<std::size_t> best;
    Direction best_dir = Direction::increasing;
    for (auto [dir, strict] : order) {
      auto src = sorted_for(points, dir, strict);
      auto chain = best_chain(src, dir, strict);
      if (chain.size() > best.size()) {
        best = std::move(chain);
        best_src = std::move(src);
        best_dir = dir;
      }
    }
    MonotonePiece piece;
    piece.dir = best_dir;
    std::vector<char> used(best_src.size(), 0);
    for (std::size_t i : best) used[i] = 1;
    std::vector<Point2> rest;
    for (std::size_t i = 0; i < best_src.size(); ++i) (used[i] ? piece.points : rest).push_back(best_src[i]);
    piece.points = sorted_for(std::move(piece.points), best_dir);
    std::sort(rest.begin(), rest.end());
    points = std::move(rest);
    out.pieces.push_back(std::move(piece));
  }
  return out;
}

std::vector<Point2> order_monotone(const std::vector<Point2>& M) {
  auto dir = monotone_direction(M);
  if (!dir) throw std::invalid_argument("order_monotone: point set is not monotone");
  return sorted_for(M, *dir);
}

namespace {

struct Indexed {
  std::vector<std::size_t> ia, ib;  // 0-based, in monotone order
};

std::optional<Indexed> index_points(const FiniteSet& A, const FiniteSet& B, const std::vector<Point2>& ordered) {
  Indexed out;
  for (const Point2& p : ordered) {
    std::size_t i = A.find(p.x), j = B.find(p.y);
    if (i == FiniteSet::npos || j == FiniteSet::npos) return std::nullopt;
    out.ia.push_back(i);
    out.ib.push_back(j);
  }
  return out;
}

std::size_t absdiff(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

// Number of i in [0, n - l) with T2[i + l] - T1[i] <= w.
std::uint64_t shifted_count(const std::vector<std::uint32_t>& T1, const std::vector<std::uint32_t>& T2, std::size_t l,
                            std::size_t w) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i + l < T1.size(); ++i)
    if (static_cast<std::int64_t>(T2[i + l]) - static_cast<std::int64_t>(T1[i]) <= static_cast<std::int64_t>(w)) ++c;
  return c;
}

}  // namespace

ClaimReport verify_claim_choose_pairs(const FiniteSet& A, const FiniteSet& B, const std::vector<Point2>& M,
                                      const Rat& t) {
  const char* name = "choose-pairs-from-M";
  std::string inst = describe({{"|A|", num(A.size())}, {"|B|", num(B.size())}, {"|M|", num(M.size())}, {"t", to_string(t)}});
  if (M.empty() || !valid_t(t)) return inapplicable(name, inst, "need nonempty M and t in (0, 1]");
  auto dir = monotone_direction(M);
  if (!dir) return inapplicable(name, inst, "M is not monotone");
  std::vector<Point2> ordered = sorted_for(M, *dir);
  auto idx = index_points(A, B, ordered);
  if (!idx) return inapplicable(name, inst, "M is not contained in A x B");
  const std::size_t n = M.size();
  const std::size_t k = floor_u64(t * as_rat(n) / 32);
  AvgIndexFn ph = phi(A);
  const Rat phi_gap = t * as_rat(ph.ambient.size()) / 8;
  const std::size_t wa = close_window(A.size(), t), wb = close_window(B.size(), t);
  std::uint64_t count = 0;
  for (std::size_t i = 0; i + k < n; ++i) {
    std::size_t a1 = idx->ia[i], a2 = idx->ia[i + k];
    bool ok = a2 - a1 <= wa && absdiff(idx->ib[i], idx->ib[i + k]) <= wb && ph.at(a2) - ph.at(a1) <= phi_gap;
    if (ok) ++count;
  }
  return decide(name, inst + " k=" + num(k), as_rat(count), ">=", as_rat(n) / 2);
}

ClaimReport verify_claim_phi_to_aprimes(const FiniteSet& A, const Rat& a1, const Rat& a2, const Rat& t) {
  const char* name = "phi-to-aprimes";
  std::string inst = describe({{"|A|", num(A.size())}, {"a1", to_string(a1)}, {"a2", to_string(a2)}, {"t", to_string(t)}});
  std::size_t i1 = A.find(a1), i2 = A.find(a2);
  if (i1 == FiniteSet::npos || i2 == FiniteSet::npos || !valid_t(t))
    return inapplicable(name, inst, "a1, a2 must lie in A and t in (0, 1]");
  if (a1 > a2) return inapplicable(name, inst, "needs a1 <= a2");
  AvgIndexFn ph = phi(A);
  if (ph.at(i2) - ph.at(i1) > t * as_rat(ph.ambient.size()) / 8)
    return inapplicable(name, inst, "phi gap exceeds t|A+A|/8");
  auto T = sum_index_table(A, ph.ambient);
  const std::size_t l = floor_u64(t * as_rat(A.size()) / 8);
  std::uint64_t c = shifted_count(T[i1], T[i2], l, close_window(ph.ambient.size(), t));
  return decide(name, inst + " l=" + num(l), as_rat(c), ">=", as_rat(A.size()) / 2);
}

std::uint64_t count_prox_6tuples(const FiniteSet& A, const FiniteSet& B, const std::vector<Point2>& M,
                                 const Rat& t) {
  if (!valid_t(t)) throw std::invalid_argument("count_prox_6tuples: t must lie in (0, 1]");
  auto idx = index_points(A, B, M);
  if (!idx) throw MembershipError("count_prox_6tuples: M is not contained in A x B");
  if (M.empty()) return 0;
  const FiniteSet AA = sumset(A, A);
  const auto T = sum_index_table(A, AA);
  const std::size_t na = A.size();
  const std::size_t wa = close_window(na, t), wb = close_window(B.size(), t), ws = close_window(AA.size(), t);
  const std::size_t span = 2 * wa + 1;

  // C[a1][a2 - a1 + wa] = #{(a1', a2') t-close with (a1 + a1', a2 + a2') t-close}
  std::vector<std::vector<std::int64_t>> C(na, std::vector<std::int64_t>(span, -1));
  std::vector<std::vector<char>> need(na, std::vector<char>(span, 0));
  const std::size_t n = M.size();
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      if (absdiff(idx->ia[p], idx->ia[q]) <= wa && absdiff(idx->ib[p], idx->ib[q]) <= wb)
        need[idx->ia[p]][idx->ia[q] + wa - idx->ia[p]] = 1;
  parallel_for(na, [&](std::size_t a1) {
    for (std::size_t d = 0; d < span; ++d) {
      if (!need[a1][d]) continue;
      std::size_t a2 = a1 + d - wa;
      const auto& row2 = T[a2];
      std::int64_t c = 0;
      for (std::size_t j1 = 0; j1 < na; ++j1) {
        std::int64_t v = T[a1][j1];
        std::size_t lo = j1 > wa ? j1 - wa : 0, hi = std::min(na - 1, j1 + wa);
        auto first = std::lower_bound(row2.begin() + lo, row2.begin() + hi + 1,
                                      static_cast<std::uint32_t>(std::max<std::int64_t>(0, v - static_cast<std::int64_t>(ws))));
        auto last = std::upper_bound(first, row2.begin() + hi + 1, static_cast<std::uint32_t>(v + ws));
        c += last - first;
      }
      C[a1][d] = c;
    }
  });
  std::uint64_t total = 0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      if (absdiff(idx->ia[p], idx->ia[q]) <= wa && absdiff(idx->ib[p], idx->ib[q]) <= wb)
        total += static_cast<std::uint64_t>(C[idx->ia[p]][idx->ia[q] + wa - idx->ia[p]]);
  return total;
}

std::uint64_t count_prox_6tuples_constructive(const FiniteSet& A, const FiniteSet& B,
                                              const std::vector<Point2>& M, const Rat& t) {
  if (!valid_t(t)) throw std::invalid_argument("count_prox_6tuples_constructive: t must lie in (0, 1]");
  if (M.empty()) return 0;
  std::vector<Point2> ordered = order_monotone(M);
  auto idx = index_points(A, B, ordered);
  if (!idx) throw MembershipError("count_prox_6tuples_constructive: M is not contained in A x B");
  const std::size_t n = M.size(), na = A.size();
  const std::size_t k = floor_u64(t * as_rat(n) / 32), l = floor_u64(t * as_rat(na) / 8);
  AvgIndexFn ph = phi(A);
  const auto T = sum_index_table(A, ph.ambient);
  const Rat phi_gap = t * as_rat(ph.ambient.size()) / 8;
  const std::size_t wa = close_window(na, t), wb = close_window(B.size(), t), ws = close_window(ph.ambient.size(), t);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i + k < n; ++i) {
    std::size_t a1 = idx->ia[i], ak = idx->ia[i + k];
    if (!(ak - a1 <= wa && absdiff(idx->ib[i], idx->ib[i + k]) <= wb && ph.at(ak) - ph.at(a1) <= phi_gap)) continue;
    for (std::size_t j = i; j <= i + k; ++j)
      total += shifted_count(T[a1], T[idx->ia[j]], l, ws) * (l + 1);
  }
  return total;
}

ClaimReport verify_prox_lower(const FiniteSet& A, const FiniteSet& B, const std::vector<Point2>& M, const Rat& t,
                              const Rat& c) {
  const char* name = "prox-lower-bound";
  std::string inst = describe({{"|A|", num(A.size())}, {"|B|", num(B.size())}, {"|M|", num(M.size())}, {"t", to_string(t)}});
  if (!valid_t(t) || t * as_rat(A.size()) < 1 || t * as_rat(B.size()) < 1)
    return inapplicable(name, inst, "needs t|A|, t|B| >= 1");
  if (M.empty() || !monotone_direction(M)) return inapplicable(name, inst, "M must be nonempty and monotone");
  if (!index_points(A, B, M)) return inapplicable(name, inst, "M is not contained in A x B");
  std::uint64_t exact = count_prox_6tuples(A, B, M, t);
  std::uint64_t recipe = count_prox_6tuples_constructive(A, B, M, t);
  Rat nA = as_rat(A.size()), nM = as_rat(M.size());
  ClaimReport rep = decide(name, inst, as_rat(exact), ">=", c * t * t * nA * nA * nM * nM,
                           "constructive=" + std::to_string(recipe));
  if (recipe > exact) {
    rep.verdict = Verdict::fail;
    rep.note += " exceeds the exact count";
  }
  return rep;
}

namespace {

bool valid_tr(const Rat& t, const Rat& r) { return t > 0 && t <= r && r <= 1; }

}  // namespace

ClaimReport verify_psi_skip(const FiniteSet& B, const Rat& t, const Rat& r) {
  const char* name = "psi-skip";
  std::string inst = describe({{"|B|", num(B.size())}, {"t", to_string(t)}, {"r", to_string(r)}});
  if (B.empty() || !valid_tr(t, r)) return inapplicable(name, inst, "needs nonempty B and 0 < t <= r <= 1");
  AvgIndexFn ps = psi(B);
  const std::size_t n = B.size(), k = floor_u64(t * as_rat(n));
  const Rat gap = t * as_rat(ps.ambient.size()) / (4 * r);
  std::uint64_t c = 0;
  for (std::size_t i = 0; i + k < n; ++i)
    if (ps.at(i + k) - ps.at(i) > gap) ++c;
  return decide(name, inst + " k=" + num(k), as_rat(c), "<=", 4 * r * as_rat(n));
}

ClaimReport verify_psi_to_bprime(const FiniteSet& B, const Rat& b1, const Rat& b2, const Rat& t, const Rat& r) {
  const char* name = "psi-to-bprime";
  std::string inst = describe({{"|B|", num(B.size())}, {"b1", to_string(b1)}, {"b2", to_string(b2)},
                               {"t", to_string(t)}, {"r", to_string(r)}});
  std::size_t i1 = B.find(b1), i2 = B.find(b2);
  if (i1 == FiniteSet::npos || i2 == FiniteSet::npos || !valid_tr(t, r))
    return inapplicable(name, inst, "b1, b2 must lie in B and 0 < t <= r <= 1");
  if (b1 > b2) return inapplicable(name, inst, "needs b1 <= b2");
  AvgIndexFn ps = psi(B);
  if (ps.at(i2) - ps.at(i1) > t * as_rat(ps.ambient.size()) / (4 * r))
    return inapplicable(name, inst, "psi gap exceeds t|B+B|/(4r)");
  auto T = sum_index_table(B, ps.ambient);
  const std::size_t l = floor_u64(t * as_rat(B.size()) / (8 * r));
  std::uint64_t c = shifted_count(T[i1], T[i2], l, floor_u64(t * as_rat(ps.ambient.size()) / r));
  return decide(name, inst + " l=" + num(l), as_rat(c), ">=", as_rat(B.size()) / 2);
}

std::vector<ClaimReport> verify_psi_claims(const FiniteSet& B, const Rat& t, const Rat& r) {
  std::vector<ClaimReport> out{verify_psi_skip(B, t, r)};
  std::string inst = describe({{"|B|", num(B.size())}, {"t", to_string(t)}, {"r", to_string(r)}});
  if (B.empty() || !valid_tr(t, r)) {
    out.push_back(inapplicable("psi-to-bprime", inst, "needs nonempty B and 0 < t <= r <= 1"));
    return out;
  }
  AvgIndexFn ps = psi(B);
  auto T = sum_index_table(B, ps.ambient);
  const std::size_t n = B.size();
  const std::size_t l = floor_u64(t * as_rat(n) / (8 * r));
  const std::size_t ws = floor_u64(t * as_rat(ps.ambient.size()) / r);
  const Rat gap = t * as_rat(ps.ambient.size()) / (4 * r);
  // Every b1 against b2 = b1, the farthest b2 meeting the hypothesis, and up to
  // eight evenly spaced b2 in between.
  std::optional<std::uint64_t> worst;
  std::size_t wi = 0, wj = 0, pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t far = i;
    while (far + 1 < n && ps.at(far + 1) - ps.at(i) <= gap) ++far;
    std::set<std::size_t> js = {i, far};
    for (std::size_t s = 1; s < 9; ++s) js.insert(i + (far - i) * s / 9);
    for (std::size_t j : js) {
      ++pairs;
      std::uint64_t c = shifted_count(T[i], T[j], l, ws);
      if (!worst || c < *worst) {
        worst = c;
        wi = i;
        wj = j;
      }
    }
  }
  if (!worst) {
    out.push_back(inapplicable("psi-to-bprime", inst, "no pair meets the hypothesis"));
    return out;
  }
  out.push_back(decide("psi-to-bprime", inst + " l=" + num(l) + " worst=(" + to_string(B[wi]) + "," + to_string(B[wj]) + ")",
                       as_rat(*worst), ">=", as_rat(n) / 2, "pairs checked=" + std::to_string(pairs)));
  return out;
}

RtrLower verify_rtr_lower(const PolySpec& spec, const FiniteSet& B, const Rat& t) {
  const char* name = "rtr-lower";
  RtrLower out;
  std::string inst = describe({{"spec", spec.describe()}, {"|B|", num(B.size())}, {"t", to_string(t)}});
  if (spec.h.degree() < 2) {
    out.report = inapplicable(name, inst, "needs deg h >= 2");
    return out;
  }
  if (!valid_t(t) || t * as_rat(B.size()) < 1) {
    out.report = inapplicable(name, inst, "needs t in (0, 1] and t|B| >= 1");
    return out;
  }
  out.hosts = select_hosts(spec, B, t);
  if (out.hosts.empty) {
    out.report = inapplicable(name, inst, "S_t is empty");
    return out;
  }
  const Rat nb = as_rat(B.size());
  const Rat scale = 64 * t * nb * nb;
  out.r = std::max<Rat>(as_rat(out.hosts.R.size()) / scale, t);
  out.s = as_rat(out.hosts.S.size()) / scale;
  out.ttr = energy_Ttr(spec, B, out.hosts.S, t, out.r);
  out.report = decide(name, inst + " r=" + to_string(out.r) + " m=" + std::to_string(out.hosts.m), as_rat(out.ttr), ">=",
                      t / (128 * out.r) * nb * nb * as_rat(out.hosts.st_star),
                      "st*=" + std::to_string(out.hosts.st_star));
  return out;
}

}  // namespace sumlab
