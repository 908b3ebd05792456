#include "sumlab/poly.hpp"

#include <sstream>

namespace sumlab {

UniPoly parse_unipoly(const std::string& literal) {
  std::istringstream is(literal);
  std::vector<Rat> c;
  std::string tok;
  while (is >> tok) c.push_back(parse_rat(tok));
  if (c.empty()) throw std::invalid_argument("empty polynomial literal");
  return UniPoly(std::move(c));
}

std::string format_unipoly(const UniPoly& p) {
  if (p.zero()) return "0";
  std::string s;
  for (int i = 0; i <= p.degree(); ++i) {
    if (i) s += ' ';
    s += p.coeff(i).get_str();
  }
  return s;
}

std::string pretty_unipoly(const UniPoly& p, char var) {
  if (p.zero()) return "0";
  std::string s;
  for (int i = p.degree(); i >= 0; --i) {
    Rat c = p.coeff(i);
    if (sgn(c) == 0) continue;
    bool neg = sgn(c) < 0;
    Rat a = abs(c);
    if (!s.empty()) s += neg ? " - " : " + ";
    else if (neg) s += "-";
    if (i == 0 || a != 1) s += a.get_str();
    if (i >= 1) s += var;
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s;
}

UniPoly squarefree_part(const UniPoly& p) {
  if (p.degree() <= 0) return p;
  UniPoly g = poly_gcd(p, p.derivative());
  return divmod(p, g).first.monic();
}

int sturm_variations(const std::vector<UniPoly>& chain, const Rat& x) {
  int v = 0, last = 0;
  for (const auto& q : chain) {
    int s = sgn(q.eval(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

int count_roots_between(const std::vector<UniPoly>& chain, const Rat& a, const Rat& b) {
  if (chain.empty()) return 0;
  return sturm_variations(chain, a) - sturm_variations(chain, b);
}

namespace {

Rat cauchy_bound(const UniPoly& p) {
  Rat m = 0;
  for (int i = 0; i < p.degree(); ++i) {
    Rat a = abs(p.coeff(i) / p.lc());
    if (a > m) m = a;
  }
  return m + 1;
}

// A point of (lo, hi) where p is nonzero, preferring the midpoint.
Rat nonroot_split(const UniPoly& p, const Rat& lo, const Rat& hi) {
  for (long k = 2;; ++k) {
    for (long j = 1; j < k; ++j) {
      Rat frac(j, k);
      frac.canonicalize();
      if (frac.get_den() != k) continue;
      Rat mid = lo + (hi - lo) * frac;
      if (sgn(p.eval(mid)) != 0) return mid;
    }
  }
}

void isolate_rec(const UniPoly& p, const std::vector<UniPoly>& chain, const Rat& lo, const Rat& hi,
                 std::vector<RealRoot>& out) {
  int n = count_roots_between(chain, lo, hi);
  if (n == 0) return;
  if (n == 1) {
    out.push_back(RealRoot{p, lo, hi});
    return;
  }
  Rat mid = nonroot_split(p, lo, hi);
  isolate_rec(p, chain, lo, mid, out);
  isolate_rec(p, chain, mid, hi, out);
}

}  // namespace

std::vector<RealRoot> isolate_real_roots(const UniPoly& p) {
  std::vector<RealRoot> out;
  if (p.degree() <= 0) return out;
  UniPoly s = squarefree_part(p);
  Rat b = cauchy_bound(s);
  isolate_rec(s, sturm_chain(s), -b, b, out);
  return out;
}

void refine(RealRoot& r) {
  if (r.exact()) return;
  Rat mid = (r.lo + r.hi) / 2;
  int sm = sgn(r.m.eval(mid));
  if (sm == 0) {
    r.lo = r.hi = mid;
    r.m = UniPoly({Rat(-mid), Rat(1)});
    return;
  }
  if (sgn(r.m.eval(r.lo)) != sm) r.hi = mid;
  else r.lo = mid;
}

std::vector<Rat> rational_roots(const UniPoly& p) {
  std::vector<Rat> out;
  if (p.degree() <= 0) return out;
  UniPoly s = squarefree_part(p);
  Int den = 1;
  for (const Rat& c : s.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  Rat lcint = abs(s.lc() * Rat(den));
  Rat width = Rat(1) / (lcint * lcint);
  for (RealRoot r : isolate_real_roots(s)) {
    while (!r.exact() && r.hi - r.lo >= width) refine(r);
    Rat cand = r.exact() ? r.lo : simplest_between(r.lo, r.hi);
    if (sgn(s.eval(cand)) == 0) out.push_back(cand);
  }
  return out;
}

int sign_at_root(const UniPoly& q, RealRoot& r) {
  if (q.zero()) return 0;
  if (r.exact()) return sgn(q.eval(r.lo));
  UniPoly g = poly_gcd(r.m, q);
  if (g.degree() >= 1) {
    if (count_roots_between(sturm_chain(g), r.lo, r.hi) == 1) {
      r.m = g;
      return 0;
    }
    // The root is not a root of g, so it is a root of m/g.
    r.m = divmod(r.m, g).first.monic();
  }
  auto chain = sturm_chain(q);
  while (!r.exact() && count_roots_between(chain, r.lo, r.hi) != 0) refine(r);
  if (r.exact()) return sgn(q.eval(r.lo));
  return sgn(q.eval(r.hi));
}

}  // namespace sumlab
