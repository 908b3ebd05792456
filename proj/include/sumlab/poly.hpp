#pragma once

#include "sumlab/rational.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <type_traits>
#include <vector>

namespace sumlab {

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }
inline int sign_of(const Rat& r) { return sgn(r); }

// Dense univariate polynomial over a field K, coefficients ascending by degree.
// K must be constructible from Rat and provide is_zero / sign_of overloads.
template <class K>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }
  Poly(std::initializer_list<K> coeffs) : c_(coeffs) { trim(); }
  static Poly constant(const K& k) { return Poly(std::vector<K>{k}); }
  static Poly monomial(const K& k, int deg) {
    std::vector<K> v(static_cast<std::size_t>(deg) + 1, K(Rat(0)));
    v.back() = k;
    return Poly(std::move(v));
  }
  static Poly x() { return monomial(K(Rat(1)), 1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool zero() const { return c_.empty(); }
  const K& lc() const { return c_.back(); }
  K coeff(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(i)] : K(Rat(0));
  }
  const std::vector<K>& coeffs() const { return c_; }

  template <class V>
  V eval(const V& x) const {
    V acc = V(Rat(0));
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + V(*it);
    return acc;
  }
  // GMP expression templates evaluate as rationals.
  template <class T, class U>
    requires(!std::is_same_v<T, U>)
  Rat eval(const __gmp_expr<T, U>& x) const {
    return eval(Rat(x));
  }

  Poly derivative() const {
    std::vector<K> v;
    for (std::size_t i = 1; i < c_.size(); ++i) v.push_back(c_[i] * K(Rat(static_cast<long>(i))));
    return Poly(std::move(v));
  }

  Poly operator-() const {
    std::vector<K> v;
    for (const K& k : c_) v.push_back(K(Rat(0)) - k);
    return Poly(std::move(v));
  }
  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<K> v(std::max(a.c_.size(), b.c_.size()), K(Rat(0)));
    for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] = v[i] + a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] = v[i] + b.c_[i];
    return Poly(std::move(v));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.zero() || b.zero()) return Poly();
    std::vector<K> v(a.c_.size() + b.c_.size() - 1, K(Rat(0)));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] = v[i + j] + a.c_[i] * b.c_[j];
    return Poly(std::move(v));
  }
  Poly scaled(const K& k) const {
    std::vector<K> v;
    for (const K& x : c_) v.push_back(x * k);
    return Poly(std::move(v));
  }
  Poly pow(unsigned e) const {
    Poly r = constant(K(Rat(1))), b = *this;
    while (e) {
      if (e & 1u) r = r * b;
      b = b * b;
      e >>= 1u;
    }
    return r;
  }
  // this(q(x))
  Poly compose(const Poly& q) const {
    Poly acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * q + constant(*it);
    return acc;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      if (!is_zero(a.c_[i] - b.c_[i])) return false;
    return true;
  }

  Poly monic() const { return zero() ? *this : scaled(K(Rat(1)) / lc()); }

 private:
  void trim() {
    while (!c_.empty() && is_zero(c_.back())) c_.pop_back();
  }
  std::vector<K> c_;
};

template <class K>
std::pair<Poly<K>, Poly<K>> divmod(const Poly<K>& a, const Poly<K>& b) {
  if (b.zero()) throw std::domain_error("polynomial division by zero");
  std::vector<K> r = a.coeffs();
  int db = b.degree();
  if (a.degree() < db) return {Poly<K>(), a};
  std::vector<K> q(static_cast<std::size_t>(a.degree() - db + 1), K(Rat(0)));
  K inv = K(Rat(1)) / b.lc();
  for (int i = a.degree(); i >= db; --i) {
    K coef = r[static_cast<std::size_t>(i)] * inv;
    q[static_cast<std::size_t>(i - db)] = coef;
    if (is_zero(coef)) continue;
    for (int j = 0; j <= db; ++j) {
      auto idx = static_cast<std::size_t>(i - db + j);
      r[idx] = r[idx] - coef * b.coeffs()[static_cast<std::size_t>(j)];
    }
    r[static_cast<std::size_t>(i)] = K(Rat(0));
  }
  return {Poly<K>(std::move(q)), Poly<K>(std::move(r))};
}

template <class K>
Poly<K> poly_gcd(Poly<K> a, Poly<K> b) {
  while (!b.zero()) {
    Poly<K> r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

// Standard Sturm chain p, p', -rem(...), ...
template <class K>
std::vector<Poly<K>> sturm_chain(const Poly<K>& p) {
  std::vector<Poly<K>> s;
  if (p.zero()) return s;
  s.push_back(p);
  Poly<K> d = p.derivative();
  if (d.zero()) return s;
  s.push_back(d);
  while (true) {
    Poly<K> r = divmod(s[s.size() - 2], s.back()).second;
    if (r.zero()) break;
    s.push_back(-r);
  }
  return s;
}

template <class K>
int sign_at_infinity(const Poly<K>& p, bool positive) {
  if (p.zero()) return 0;
  int s = sign_of(p.lc());
  if (!positive && (p.degree() % 2 == 1)) s = -s;
  return s;
}

template <class K>
int variations_at_infinity(const std::vector<Poly<K>>& chain, bool positive) {
  int v = 0, last = 0;
  for (const auto& q : chain) {
    int s = sign_at_infinity(q, positive);
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

// Number of distinct real roots.
template <class K>
int count_real_roots(const Poly<K>& p) {
  if (p.degree() <= 0) return 0;
  auto chain = sturm_chain(p);
  return variations_at_infinity(chain, false) - variations_at_infinity(chain, true);
}

using UniPoly = Poly<Rat>;

UniPoly parse_unipoly(const std::string& literal);
std::string format_unipoly(const UniPoly& p);
std::string pretty_unipoly(const UniPoly& p, char var = 'x');
UniPoly squarefree_part(const UniPoly& p);

int sturm_variations(const std::vector<UniPoly>& chain, const Rat& x);
// Distinct roots in the half-open interval (a, b].
int count_roots_between(const std::vector<UniPoly>& chain, const Rat& a, const Rat& b);

// A real root of a squarefree polynomial: exact when lo == hi, otherwise the
// unique root of `m` in the open interval (lo, hi) with m(lo), m(hi) nonzero.
struct RealRoot {
  UniPoly m;
  Rat lo, hi;
  bool exact() const { return lo == hi; }
};

std::vector<RealRoot> isolate_real_roots(const UniPoly& p);
std::vector<Rat> rational_roots(const UniPoly& p);
void refine(RealRoot& r);
// sign of q at the root.
int sign_at_root(const UniPoly& q, RealRoot& r);

}  // namespace sumlab
