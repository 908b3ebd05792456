#pragma once

#include "sumlab/finite_set.hpp"
#include "sumlab/poly.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sumlab {

struct UnsupportedDegree : std::domain_error {
  using std::domain_error::domain_error;
};

// Sparse bivariate polynomial; key is (x-degree, y-degree), zero terms never stored.
class BiPoly {
 public:
  using Key = std::pair<int, int>;
  BiPoly() = default;
  static BiPoly constant(const Rat& c);
  static BiPoly x();
  static BiPoly y();
  static BiPoly from_x(const UniPoly& p);  // p(x)
  static BiPoly from_y(const UniPoly& p);  // p(y)

  void add_term(int i, int j, const Rat& c);
  Rat coeff(int i, int j) const;
  const std::map<Key, Rat>& terms() const { return t_; }
  bool zero() const { return t_.empty(); }
  int total_degree() const;  // -1 for zero
  int degree_x() const;
  int degree_y() const;

  Rat eval(const Rat& x, const Rat& y) const;
  // Coefficient of y^j as a polynomial in x.
  UniPoly coeff_y(int j) const;
  // Homogeneous part of total degree d.
  BiPoly homogeneous(int d) const;
  BiPoly swapped() const;  // q(y, x)
  BiPoly substitute(const BiPoly& X, const BiPoly& Y) const;
  BiPoly pow(unsigned e) const;
  BiPoly scaled(const Rat& c) const;

  friend BiPoly operator+(const BiPoly& a, const BiPoly& b);
  friend BiPoly operator-(const BiPoly& a, const BiPoly& b);
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b);
  friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.t_ == b.t_; }

  std::string pretty() const;

 private:
  std::map<Key, Rat> t_;
};

// f(x, y) = g(x + p(y)) + h(y).
struct PolySpec {
  UniPoly g, p, h;
  std::string name;

  BiPoly f() const;
  int degree() const { return f().total_degree(); }
  std::string describe() const;
};

PolySpec make_spec(const std::string& g, const std::string& p, const std::string& h,
                   std::string name = {});

Rat eval_f(const PolySpec& spec, const Rat& a, const Rat& b);
FiniteSet image(const PolySpec& spec, const FiniteSet& A, const FiniteSet& B);

// Reducible over the reals, total degree 1..4. Throws std::invalid_argument on a
// constant input and UnsupportedDegree above 4.
bool is_reducible(const BiPoly& q);
// Same question over the rationals.
bool is_reducible_over_Q(const BiPoly& q);
// Degree-2 route through the homogenized 3x3 symmetric matrix.
bool conic_is_degenerate(const BiPoly& q);
// Real (or rational) factor of the form y - a x - b, or x - b when allow_vertical.
bool has_linear_factor(const BiPoly& q, bool rational_only, bool allow_vertical = true);
// Real (or rational) factorization of a degree-4 polynomial into two quadratics.
bool has_quadratic_pair(const BiPoly& q, bool rational_only);

// u(x) - u(y) + lambda
BiPoly difference_poly(const UniPoly& u, const Rat& lambda);

struct LambdaClassification {
  FiniteSet bad;                  // lambdas making g- or h-difference reducible over R
  std::vector<Rat> q_r_disagree;  // lambdas where the Q and R answers differ
  std::vector<Rat> candidates;    // critical-value differences examined
};

LambdaClassification classify_lambdas(const PolySpec& spec);
FiniteSet bad_lambdas(const PolySpec& spec);
// Alternative route: test each lambda in h(B) - h(B) directly.
FiniteSet bad_lambdas_sampled(const PolySpec& spec, const FiniteSet& B);

// Critical-value differences of u: rational roots of the polynomial whose roots
// are u(c1) - u(c2) over critical points c1, c2 of u.
std::vector<Rat> critical_value_differences(const UniPoly& u);

// Characteristic polynomial det(lambda I - M), exact.
UniPoly charpoly(const std::vector<std::vector<Rat>>& M);

// Caches bad_lambdas for repeated pair classification.
class BadPairOracle {
 public:
  explicit BadPairOracle(const PolySpec& spec);
  bool is_bad_lambda(const Rat& lambda) const { return lambdas_.contains(lambda); }
  bool is_bad_pair(const Rat& b1, const Rat& b2) const;
  const FiniteSet& lambdas() const { return lambdas_; }
  const PolySpec& spec() const { return spec_; }

 private:
  PolySpec spec_;
  FiniteSet lambdas_;
};

bool is_bad_pair(const PolySpec& spec, const Rat& b1, const Rat& b2);

struct Decomposition {
  int inner_degree = 0;
  UniPoly outer;  // Q
  BiPoly inner;   // R, with R(0,0) = 0
};

// Searches F = Q(R(x, y)) with deg Q >= 2 and deg R <= max_inner_deg; exhaustive
// within that bound.
std::optional<Decomposition> find_decomposition(const BiPoly& F, int max_inner_deg);

struct IndecomposabilityRecord {
  bool indecomposable = true;
  int max_inner_deg = 0;
  std::vector<int> inner_degrees_searched;
  std::optional<Decomposition> witness;
};

IndecomposabilityRecord indecomposability_record(const UniPoly& q, int max_inner_deg);
bool check_indecomposable_small(const UniPoly& q, int max_inner_deg);

}  // namespace sumlab
