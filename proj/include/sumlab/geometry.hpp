#pragma once

#include "sumlab/finite_set.hpp"
#include "sumlab/incidence.hpp"
#include "sumlab/point.hpp"
#include "sumlab/polynomial.hpp"
#include "sumlab/report.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sumlab {

// Distinct points with optional per-point tags.
class PointConfig {
 public:
  PointConfig() = default;
  // Throws std::invalid_argument on a repeated point or a tag list of the wrong length.
  explicit PointConfig(std::vector<Point2> points, std::vector<int> tags = {});

  std::size_t size() const { return points_.size(); }
  const std::vector<Point2>& points() const { return points_; }
  const std::vector<int>& tags() const { return tags_; }
  const Point2& operator[](std::size_t i) const { return points_[i]; }

 private:
  std::vector<Point2> points_;
  std::vector<int> tags_;
};

// One "x y" pair per line; '#' starts a comment.
PointConfig read_points(std::istream& in);
PointConfig read_points_file(const std::string& path);
void write_points(std::ostream& out, const PointConfig& P);

Rat squared_distance(const Point2& p, const Point2& q);

// Squared distances over all ordered pairs, p = q included, so 0 belongs to the
// set whenever P is nonempty.
FiniteSet squared_distance_set(const PointConfig& P);
// 0 appears exactly when the configurations share a point.
FiniteSet squared_distance_set_between(const PointConfig& P1, const PointConfig& P2);

// g = z^2, p = -s y, h = y^2: f(x, y) = (x - s y)^2 + y^2.
PolySpec two_line_spec(const Rat& s);

// Line a x + b y = c with coprime integers and the first nonzero of (a, b) positive.
struct LineKey {
  Int a, b, c;
  auto operator<=>(const LineKey& o) const {
    if (int r = cmp(a, o.a)) return r <=> 0;
    if (int r = cmp(b, o.b)) return r <=> 0;
    return cmp(c, o.c) <=> 0;
  }
  bool operator==(const LineKey& o) const { return a == o.a && b == o.b && c == o.c; }
};

// Throws std::invalid_argument when p == q.
LineKey line_through(const Point2& p, const Point2& q);
std::string to_string(const LineKey& L);

// Every line with at least two points of P, mapped to its point count.
std::map<LineKey, std::uint64_t> group_lines(const std::vector<Point2>& points);

// Ordered triples (p1, p2, p3) in points^3 lying on a common line, repeats allowed:
// N + 3N(N - 1) + 6 * sum over lines of C(k, 3).
std::uint64_t collinear_triples(const std::vector<Point2>& points);

// |{(a, b, c, d) in A^4 : a^2 + b^2 = c^2 + d^2}|.
std::uint64_t circle_energy(const FiniteSet& A);

Rat orientation(const Point2& p, const Point2& q, const Point2& r);

struct CollinearReport {
  FiniteSet A;          // with 0 added when absent
  bool zero_added = false;
  std::uint64_t q = 0;  // circle energy of A
  std::uint64_t identity_checks = 0, identity_failures = 0;
  std::uint64_t grid_points = 0, grid_triples = 0;
  ClaimReport lower;    // grid triples >= |A|^2 |Q|
  nlohmann::json to_json() const;
};

CollinearReport collinear_triples_from_Q(const FiniteSet& A);

struct AsquaredReport {
  std::uint64_t n = 0, sumset = 0, squares_sum = 0, diff_sum = 0, triple_sum = 0;
  Rat K_given = 0, K_measured = 0;
  bool doubling_hypothesis = false;  // |A + A| <= K|A|
  long double chain_lhs = 0;         // |A^2 + A^2| max{|A - A + A|, |A + A + A|}^4 log|A|
  long double chain_rhs = 0;         // |A|^6
  long double final_bound = 0;       // |A|^2 / (K^12 log|A|) with K = max(given, measured)
  std::vector<ClaimReport> plunnecke;  // |A +- A + A| <= K^3 |A| with measured K
  nlohmann::json to_json() const;
};

AsquaredReport asquared_chain(const FiniteSet& A, const Rat& K);

struct HeavyLineReport {
  bool applicable = false;
  std::string reason;
  std::uint64_t n = 0, m = 0, k = 0;  // |P|, |l cap P|, max points on a line orthogonal to l
  LineKey line;
  std::uint64_t delta = 0;            // |Delta(P)|
  std::uint64_t delta_between = 0;    // |Delta(P1, P)|
  std::uint64_t q = 0, q_prime = 0, incidences = 0;
  std::uint64_t max_curve_multiplicity = 0;
  bool few_distances = false;         // |Delta(P)| <= n/5
  bool heavy_regime = false;          // m >= n^{4/5}
  long double k_bound = 0;            // n^{25/4 + 8 eta}/m^7 + n/m
  std::vector<ClaimReport> claims;
  nlohmann::json to_json() const;
};

// Picks a line with the most points (ties: smallest LineKey) and maps it to the
// x-axis by a rational similarity, which scales every squared distance by the
// same factor.
HeavyLineReport heavy_line_experiment(const PointConfig& P, const Rat& eta = 0);

}  // namespace sumlab
