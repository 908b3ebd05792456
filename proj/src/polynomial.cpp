#include "sumlab/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace sumlab {

BiPoly BiPoly::constant(const Rat& c) {
  BiPoly b;
  b.add_term(0, 0, c);
  return b;
}
BiPoly BiPoly::x() {
  BiPoly b;
  b.add_term(1, 0, Rat(1));
  return b;
}
BiPoly BiPoly::y() {
  BiPoly b;
  b.add_term(0, 1, Rat(1));
  return b;
}
BiPoly BiPoly::from_x(const UniPoly& p) {
  BiPoly b;
  for (int i = 0; i <= p.degree(); ++i) b.add_term(i, 0, p.coeff(i));
  return b;
}
BiPoly BiPoly::from_y(const UniPoly& p) {
  BiPoly b;
  for (int i = 0; i <= p.degree(); ++i) b.add_term(0, i, p.coeff(i));
  return b;
}

void BiPoly::add_term(int i, int j, const Rat& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = t_.try_emplace({i, j}, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) t_.erase(it);
  }
}

Rat BiPoly::coeff(int i, int j) const {
  auto it = t_.find({i, j});
  return it == t_.end() ? Rat(0) : it->second;
}

int BiPoly::total_degree() const {
  int d = -1;
  for (const auto& [k, c] : t_) d = std::max(d, k.first + k.second);
  return d;
}
int BiPoly::degree_x() const {
  int d = -1;
  for (const auto& [k, c] : t_) d = std::max(d, k.first);
  return d;
}
int BiPoly::degree_y() const {
  int d = -1;
  for (const auto& [k, c] : t_) d = std::max(d, k.second);
  return d;
}

Rat BiPoly::eval(const Rat& x, const Rat& y) const {
  Rat s = 0;
  for (const auto& [k, c] : t_) {
    Rat term = c;
    for (int i = 0; i < k.first; ++i) term *= x;
    for (int j = 0; j < k.second; ++j) term *= y;
    s += term;
  }
  return s;
}

UniPoly BiPoly::coeff_y(int j) const {
  std::vector<Rat> v;
  for (const auto& [k, c] : t_) {
    if (k.second != j) continue;
    if (v.size() <= static_cast<std::size_t>(k.first)) v.resize(static_cast<std::size_t>(k.first) + 1);
    v[static_cast<std::size_t>(k.first)] = c;
  }
  return UniPoly(std::move(v));
}

BiPoly BiPoly::homogeneous(int d) const {
  BiPoly b;
  for (const auto& [k, c] : t_)
    if (k.first + k.second == d) b.t_.emplace(k, c);
  return b;
}

BiPoly BiPoly::swapped() const {
  BiPoly b;
  for (const auto& [k, c] : t_) b.t_.emplace(Key{k.second, k.first}, c);
  return b;
}

BiPoly BiPoly::scaled(const Rat& c) const {
  BiPoly b;
  for (const auto& [k, v] : t_) b.add_term(k.first, k.second, v * c);
  return b;
}

BiPoly operator+(const BiPoly& a, const BiPoly& b) {
  BiPoly r = a;
  for (const auto& [k, c] : b.t_) r.add_term(k.first, k.second, c);
  return r;
}

BiPoly operator-(const BiPoly& a, const BiPoly& b) {
  BiPoly r = a;
  for (const auto& [k, c] : b.t_) r.add_term(k.first, k.second, -c);
  return r;
}

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
  BiPoly r;
  for (const auto& [ka, ca] : a.t_)
    for (const auto& [kb, cb] : b.t_) r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
  return r;
}

BiPoly BiPoly::pow(unsigned e) const {
  BiPoly r = constant(Rat(1)), base = *this;
  while (e) {
    if (e & 1u) r = r * base;
    base = base * base;
    e >>= 1u;
  }
  return r;
}

BiPoly BiPoly::substitute(const BiPoly& X, const BiPoly& Y) const {
  int dx = std::max(degree_x(), 0), dy = std::max(degree_y(), 0);
  std::vector<BiPoly> xp{constant(Rat(1))}, yp{constant(Rat(1))};
  for (int i = 1; i <= dx; ++i) xp.push_back(xp.back() * X);
  for (int j = 1; j <= dy; ++j) yp.push_back(yp.back() * Y);
  BiPoly r;
  for (const auto& [k, c] : t_) r = r + (xp[static_cast<std::size_t>(k.first)] * yp[static_cast<std::size_t>(k.second)]).scaled(c);
  return r;
}

std::string BiPoly::pretty() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
    const auto& [k, c] = *it;
    os << (first ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + "));
    Rat a = abs(c);
    bool unit = a == 1 && (k.first || k.second);
    if (!unit) os << a.get_str();
    if (k.first) os << (unit ? "" : "*") << "x" << (k.first > 1 ? "^" + std::to_string(k.first) : "");
    if (k.second)
      os << ((unit && !k.first) ? "" : "*") << "y" << (k.second > 1 ? "^" + std::to_string(k.second) : "");
    first = false;
  }
  return os.str();
}

BiPoly PolySpec::f() const {
  BiPoly inner = BiPoly::x() + BiPoly::from_y(p);
  BiPoly gpart;
  BiPoly power = BiPoly::constant(Rat(1));
  for (int i = 0; i <= g.degree(); ++i) {
    gpart = gpart + power.scaled(g.coeff(i));
    power = power * inner;
  }
  return gpart + BiPoly::from_y(h);
}

std::string PolySpec::describe() const {
  return "g(z)=" + pretty_unipoly(g, 'z') + "; p(y)=" + pretty_unipoly(p, 'y') +
         "; h(y)=" + pretty_unipoly(h, 'y');
}

PolySpec make_spec(const std::string& g, const std::string& p, const std::string& h, std::string name) {
  return PolySpec{parse_unipoly(g), parse_unipoly(p), parse_unipoly(h), std::move(name)};
}

Rat eval_f(const PolySpec& spec, const Rat& a, const Rat& b) {
  Rat inner = a + spec.p.eval(b);
  return spec.g.eval(inner) + spec.h.eval(b);
}

FiniteSet image(const PolySpec& spec, const FiniteSet& A, const FiniteSet& B) {
  if (A.empty() || B.empty()) throw std::invalid_argument("image: empty input");
  std::vector<Rat> v;
  v.reserve(A.size() * B.size());
  for (const Rat& b : B) {
    Rat pb = spec.p.eval(b), hb = spec.h.eval(b);
    for (const Rat& a : A) v.push_back(spec.g.eval(Rat(a + pb)) + hb);
  }
  return FiniteSet::from_unsorted(std::move(v));
}

}  // namespace sumlab
