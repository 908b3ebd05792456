#include "sumlab/geometry.hpp"

#include "sumlab/keys.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace sumlab {

namespace {

Rat as_rat(std::uint64_t n) { return Rat(static_cast<unsigned long>(n)); }

std::uint64_t choose3(std::uint64_t k) { return k < 3 ? 0 : k * (k - 1) * (k - 2) / 6; }

// Sum over distinct values of multiplicity^2.
std::uint64_t squared_multiplicities(const std::vector<Rat>& values) {
  return with_keys(values, [](const auto& keys) -> std::uint64_t {
    using Key = typename std::decay_t<decltype(keys)>::value_type;
    std::unordered_map<Key, std::uint64_t, KeyHash<Key>> cnt;
    for (const auto& k : keys) ++cnt[k];
    std::uint64_t s = 0;
    for (const auto& [k, c] : cnt) s += c * c;
    return s;
  });
}

// Points scaled by a common denominator to integer coordinates.
std::vector<std::pair<Int, Int>> integral(const std::vector<Point2>& pts) {
  Int L = 1;
  for (const Point2& p : pts) {
    mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), p.x.get_den_mpz_t());
    mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), p.y.get_den_mpz_t());
  }
  std::vector<std::pair<Int, Int>> out;
  out.reserve(pts.size());
  for (const Point2& p : pts) out.emplace_back(Int(p.x * L), Int(p.y * L));
  return out;
}

struct Dir64Hash {
  std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& d) const noexcept {
    return std::hash<std::int64_t>()(d.first) * 0x9e3779b97f4a7c15ULL ^ std::hash<std::int64_t>()(d.second);
  }
};

// For every line with >= 2 points: (index of its first point, index of its second point, point count).
struct LineHit {
  std::size_t first, second;
  std::uint64_t count;
};

template <class Coord, class DirMap>
std::vector<LineHit> scan_lines(const std::vector<std::pair<Coord, Coord>>& c) {
  using Dir = std::pair<Coord, Coord>;
  auto reduce = [](Coord dx, Coord dy) -> Dir {
    Coord g;
    if constexpr (std::is_same_v<Coord, Int>) {
      g = gcd(dx, dy);
    } else {
      g = std::gcd(dx, dy);
    }
    dx /= g;
    dy /= g;
    if (dx < 0 || (dx == 0 && dy < 0)) {
      dx = -dx;
      dy = -dy;
    }
    return {dx, dy};
  };
  std::vector<LineHit> hits;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i) {
    // direction -> (seen an earlier point, later points, first later point)
    DirMap dirs;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      auto& e = dirs[reduce(c[j].first - c[i].first, c[j].second - c[i].second)];
      if (j < i) {
        e.earlier = true;
      } else {
        if (e.later == 0) e.second = j;
        ++e.later;
      }
    }
    for (const auto& [d, e] : dirs)
      if (!e.earlier && e.later > 0) hits.push_back({i, e.second, e.later + 1});
  }
  return hits;
}

struct DirEntry {
  bool earlier = false;
  std::uint64_t later = 0;
  std::size_t second = 0;
};

std::vector<LineHit> all_lines(const std::vector<Point2>& pts) {
  const auto c = integral(pts);
  bool small = true;
  for (const auto& [x, y] : c) small = small && x.fits_sint_p() && y.fits_sint_p();  // |coord| < 2^31
  if (small) {
    std::vector<std::pair<std::int64_t, std::int64_t>> c64;
    for (const auto& [x, y] : c) c64.emplace_back(x.get_si(), y.get_si());
    return scan_lines<std::int64_t, std::unordered_map<std::pair<std::int64_t, std::int64_t>, DirEntry, Dir64Hash>>(c64);
  }
  return scan_lines<Int, std::map<std::pair<Int, Int>, DirEntry>>(c);
}

std::string count_str(std::uint64_t n) { return std::to_string(n); }

}  // namespace

PointConfig::PointConfig(std::vector<Point2> points, std::vector<int> tags)
    : points_(std::move(points)), tags_(std::move(tags)) {
  if (!tags_.empty() && tags_.size() != points_.size())
    throw std::invalid_argument("PointConfig: tag count differs from point count");
  std::vector<Point2> sorted = points_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("PointConfig: repeated point");
}

PointConfig read_points(std::istream& in) {
  std::vector<Point2> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream row(line);
    std::string xs, ys, extra;
    if (!(row >> xs)) continue;
    if (!(row >> ys) || (row >> extra))
      throw std::invalid_argument("point file line " + std::to_string(lineno) + ": expected 'x y'");
    pts.push_back({parse_rat(xs), parse_rat(ys)});
  }
  return PointConfig(std::move(pts));
}

PointConfig read_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open point file '" + path + "'");
  return read_points(in);
}

void write_points(std::ostream& out, const PointConfig& P) {
  for (const Point2& p : P.points()) out << to_string(p.x) << ' ' << to_string(p.y) << '\n';
}

Rat squared_distance(const Point2& p, const Point2& q) {
  const Rat dx = p.x - q.x, dy = p.y - q.y;
  return dx * dx + dy * dy;
}

FiniteSet squared_distance_set(const PointConfig& P) { return squared_distance_set_between(P, P); }

FiniteSet squared_distance_set_between(const PointConfig& P1, const PointConfig& P2) {
  std::vector<Rat> d;
  d.reserve(P1.size() * P2.size());
  for (const Point2& p : P1.points())
    for (const Point2& q : P2.points()) d.push_back(squared_distance(p, q));
  return FiniteSet::from_unsorted(std::move(d));
}

PolySpec two_line_spec(const Rat& s) {
  PolySpec spec;
  spec.g = UniPoly{Rat(0), Rat(0), Rat(1)};
  spec.p = UniPoly{Rat(0), Rat(-s)};
  spec.h = UniPoly{Rat(0), Rat(0), Rat(1)};
  spec.name = "two-line s=" + to_string(s);
  return spec;
}

LineKey line_through(const Point2& p, const Point2& q) {
  if (p == q) throw std::invalid_argument("line_through: points coincide");
  Rat a = q.y - p.y, b = p.x - q.x;
  Rat c = a * p.x + b * p.y;
  Int L = 1;
  for (const Rat* r : {&a, &b, &c}) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), r->get_den_mpz_t());
  LineKey k{Int(a * L), Int(b * L), Int(c * L)};
  Int g = gcd(gcd(k.a, k.b), k.c);
  k.a /= g;
  k.b /= g;
  k.c /= g;
  if (k.a < 0 || (k.a == 0 && k.b < 0)) {
    k.a = -k.a;
    k.b = -k.b;
    k.c = -k.c;
  }
  return k;
}

std::string to_string(const LineKey& L) {
  return L.a.get_str() + "x + " + L.b.get_str() + "y = " + L.c.get_str();
}

std::map<LineKey, std::uint64_t> group_lines(const std::vector<Point2>& points) {
  std::map<LineKey, std::uint64_t> out;
  for (const LineHit& h : all_lines(points)) out[line_through(points[h.first], points[h.second])] = h.count;
  return out;
}

std::uint64_t collinear_triples(const std::vector<Point2>& points) {
  const std::uint64_t n = points.size();
  std::uint64_t s = 0;
  for (const LineHit& h : all_lines(points)) s += choose3(h.count);
  return n + 3 * n * (n > 0 ? n - 1 : 0) + 6 * s;
}

std::uint64_t circle_energy(const FiniteSet& A) {
  std::vector<Rat> levels;
  levels.reserve(A.size() * A.size());
  for (const Rat& a : A)
    for (const Rat& b : A) levels.push_back(a * a + b * b);
  return squared_multiplicities(levels);
}

Rat orientation(const Point2& p, const Point2& q, const Point2& r) {
  return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
}

CollinearReport collinear_triples_from_Q(const FiniteSet& A) {
  CollinearReport rep;
  rep.zero_added = !A.contains(0);
  if (rep.zero_added) {
    std::vector<Rat> v = A.elements();
    v.push_back(0);
    rep.A = FiniteSet::from_unsorted(std::move(v));
  } else {
    rep.A = A;
  }
  const FiniteSet& X = rep.A;

  std::map<Rat, std::vector<std::pair<const Rat*, const Rat*>>> levels;
  for (const Rat& a : X)
    for (const Rat& b : X) levels[a * a + b * b].emplace_back(&a, &b);
  for (const auto& [v, reps] : levels) {
    rep.q += reps.size() * reps.size();
    for (auto [a, b] : reps)
      for (auto [c, d] : reps)
        for (const Rat& x : X)
          for (const Rat& y : X) {
            const Point2 p1{x, y}, p2{x + *a - *c, y + *d + *b}, p3{x + *d - *b, y + *a + *c};
            ++rep.identity_checks;
            if (orientation(p1, p2, p3) != 0) ++rep.identity_failures;
          }
  }

  const FiniteSet gx = diffset(sumset(X, X), X), gy = sumset(sumset(X, X), X);
  std::vector<Point2> grid;
  grid.reserve(gx.size() * gy.size());
  for (const Rat& x : gx)
    for (const Rat& y : gy) grid.push_back({x, y});
  rep.grid_points = grid.size();
  rep.grid_triples = collinear_triples(grid);
  const std::uint64_t na = X.size();
  rep.lower = decide("collinear-triples", "|A|=" + count_str(na) + (rep.zero_added ? " (0 added)" : ""),
                     as_rat(rep.grid_triples), ">=", as_rat(na * na * rep.q),
                     "identity failures=" + count_str(rep.identity_failures));
  if (rep.identity_failures > 0) rep.lower.verdict = Verdict::fail;
  return rep;
}

nlohmann::json CollinearReport::to_json() const {
  return {{"size", A.size()},          {"zeroAdded", zero_added},         {"Q", q},
          {"identityChecks", identity_checks}, {"identityFailures", identity_failures},
          {"gridPoints", grid_points}, {"gridTriples", grid_triples},      {"claim", lower.to_json()}};
}

AsquaredReport asquared_chain(const FiniteSet& A, const Rat& K) {
  AsquaredReport rep;
  rep.n = A.size();
  if (A.empty()) throw std::invalid_argument("asquared_chain: empty set");
  std::vector<Rat> sq;
  for (const Rat& a : A) sq.push_back(a * a);
  const FiniteSet S2 = FiniteSet::from_unsorted(std::move(sq));
  const FiniteSet AA = sumset(A, A);
  rep.sumset = AA.size();
  rep.squares_sum = sumset(S2, S2).size();
  rep.diff_sum = sumset(diffset(A, A), A).size();
  rep.triple_sum = sumset(AA, A).size();
  rep.K_given = K;
  rep.K_measured = as_rat(rep.sumset) / as_rat(rep.n);
  rep.doubling_hypothesis = as_rat(rep.sumset) <= K * as_rat(rep.n);

  const long double n = static_cast<long double>(rep.n), lg = std::log(n);
  const long double big = static_cast<long double>(std::max(rep.diff_sum, rep.triple_sum));
  rep.chain_lhs = static_cast<long double>(rep.squares_sum) * std::pow(big, 4) * lg;
  rep.chain_rhs = std::pow(n, 6);
  const long double k = to_ld(rep.doubling_hypothesis ? K : rep.K_measured);
  rep.final_bound = lg > 0 ? n * n / (std::pow(k, 12) * lg) : 0;

  // K^3 |A| with K = |A + A| / |A|
  const Rat cube = as_rat(rep.sumset) * as_rat(rep.sumset) * as_rat(rep.sumset) / (as_rat(rep.n) * as_rat(rep.n));
  const std::string inst = "|A|=" + count_str(rep.n) + " |A+A|=" + count_str(rep.sumset);
  rep.plunnecke.push_back(decide("plunnecke-A+A+A", inst, as_rat(rep.triple_sum), "<=", cube));
  rep.plunnecke.push_back(decide("plunnecke-A-A+A", inst, as_rat(rep.diff_sum), "<=", cube));
  return rep;
}

nlohmann::json AsquaredReport::to_json() const {
  nlohmann::json claims = nlohmann::json::array();
  for (const ClaimReport& c : plunnecke) claims.push_back(c.to_json());
  return {{"size", n},
          {"sumset", sumset},
          {"squaresSumset", squares_sum},
          {"diffPlusSet", diff_sum},
          {"tripleSumset", triple_sum},
          {"Kgiven", to_string(K_given)},
          {"Kmeasured", to_string(K_measured)},
          {"doublingHypothesis", doubling_hypothesis},
          {"chainLhs", static_cast<double>(chain_lhs)},
          {"chainRhs", static_cast<double>(chain_rhs)},
          {"chainRatio", static_cast<double>(chain_rhs > 0 ? chain_lhs / chain_rhs : 0)},
          {"finalBound", static_cast<double>(final_bound)},
          {"finalRatio", static_cast<double>(final_bound > 0 ? squares_sum / final_bound : 0)},
          {"claims", claims}};
}

HeavyLineReport heavy_line_experiment(const PointConfig& P, const Rat& eta) {
  HeavyLineReport rep;
  rep.n = P.size();
  const auto lines = group_lines(P.points());
  if (lines.empty()) {
    rep.reason = "needs a line through at least 2 points";
    return rep;
  }
  auto best = lines.begin();
  for (auto it = lines.begin(); it != lines.end(); ++it)
    if (it->second > best->second) best = it;  // map order: ties keep the smallest key
  rep.line = best->first;
  rep.m = best->second;
  rep.applicable = true;

  // Direction (-b, a) of the line is sent to the positive x-axis.
  const Rat dx(-rep.line.b), dy(rep.line.a);
  Point2 origin;
  for (const Point2& p : P.points())
    if (rep.line.a * p.x + rep.line.b * p.y == rep.line.c) {
      origin = p;
      break;
    }
  std::vector<Point2> pts, on_line;
  for (const Point2& p : P.points()) {
    const Rat X = p.x - origin.x, Y = p.y - origin.y;
    pts.push_back({dx * X + dy * Y, dx * Y - dy * X});
    if (pts.back().y == 0) on_line.push_back(pts.back());
  }

  rep.delta = squared_distance_set(P).size();
  rep.delta_between = squared_distance_set_between(PointConfig(on_line), PointConfig(pts)).size();
  rep.few_distances = 5 * rep.delta <= rep.n;
  rep.heavy_regime = std::pow(static_cast<long double>(rep.m), 5) >= std::pow(static_cast<long double>(rep.n), 4);

  std::vector<Rat> d;
  std::map<std::pair<Rat, Rat>, std::uint64_t> same_height;
  for (const Point2& a : on_line)
    for (const Point2& p : pts) {
      d.push_back(squared_distance(a, p));
      ++same_height[{d.back(), p.y * p.y}];
    }
  rep.q = squared_multiplicities(d);
  std::uint64_t excluded = 0;
  for (const auto& [key, c] : same_height) excluded += c * c;
  rep.q_prime = rep.q - excluded;

  std::map<Rat, std::uint64_t> columns;
  for (const Point2& p : pts) ++columns[p.x];
  for (const auto& [x, c] : columns) rep.k = std::max(rep.k, c);

  // Pi = (a_x, b_x) over P1^2; a curve (x - p_x)^2 + p_y^2 = (y - q_x)^2 + q_y^2 per (p, q), p_y != +-q_y.
  IncidenceInstance inst;
  inst.G = UniPoly{Rat(0), Rat(0), Rat(1)};
  std::vector<Rat> xs;
  for (const Point2& a : on_line) xs.push_back(a.x);
  inst.points.ambient = FiniteSet::from_unsorted(std::move(xs));
  inst.points.window = rep.m;
  for (const Point2& p : pts)
    for (const Point2& q : pts)
      if (p.y * p.y != q.y * q.y) inst.curves.add(canonical_sig(inst.G, p.x, q.x, Rat(p.y * p.y - q.y * q.y)), {});
  rep.incidences = count_incidences(inst);
  rep.max_curve_multiplicity = inst.curves.max_multiplicity();

  const long double n = static_cast<long double>(rep.n), m = static_cast<long double>(rep.m);
  rep.k_bound = std::pow(n, 25.0L / 4 + 8 * to_ld(eta)) / std::pow(m, 7) + n / m;

  const Rat m2n = as_rat(rep.m) * as_rat(rep.m) * as_rat(rep.n);
  const std::string tag = "n=" + count_str(rep.n) + " m=" + count_str(rep.m);
  rep.claims.push_back(decide("heavy-cauchy", tag, as_rat(rep.q), ">=",
                              m2n * as_rat(rep.n) / as_rat(rep.delta_between)));
  rep.claims.push_back(decide("heavy-excluded", tag, as_rat(excluded), "<=", 4 * m2n));
  if (rep.few_distances)
    rep.claims.push_back(decide("heavy-qprime-lower", tag, as_rat(rep.q_prime), ">=", m2n));
  else
    rep.claims.push_back(inapplicable("heavy-qprime-lower", tag, "needs |Delta(P)| <= n/5"));
  rep.claims.push_back(decide("heavy-incidences", tag, as_rat(rep.incidences), "==", as_rat(rep.q_prime)));
  rep.claims.push_back(decide("heavy-multiplicity", tag, as_rat(rep.max_curve_multiplicity), "<=", 2 * as_rat(rep.k)));
  return rep;
}

nlohmann::json HeavyLineReport::to_json() const {
  nlohmann::json claims_json = nlohmann::json::array();
  for (const ClaimReport& c : claims) claims_json.push_back(c.to_json());
  nlohmann::json j = {{"applicable", applicable}, {"n", n}};
  if (!applicable) {
    j["reason"] = reason;
    return j;
  }
  j.update({{"m", m},
            {"k", k},
            {"line", to_string(line)},
            {"delta", delta},
            {"deltaBetween", delta_between},
            {"Q", q},
            {"Qprime", q_prime},
            {"incidences", incidences},
            {"maxCurveMultiplicity", max_curve_multiplicity},
            {"fewDistances", few_distances},
            {"heavyRegime", heavy_regime},
            {"kBound", static_cast<double>(k_bound)},
            {"claims", claims_json}});
  return j;
}

}  // namespace sumlab
