#include "sumlab/polynomial.hpp"

namespace sumlab {

namespace {

UniPoly dehomogenize(const BiPoly& H, int d) {
  std::vector<Rat> v(static_cast<std::size_t>(d) + 1);
  for (int i = 0; i <= d; ++i) v[static_cast<std::size_t>(i)] = H.coeff(i, d - i);
  return UniPoly(v);
}

BiPoly homogenize(const UniPoly& p, int d) {
  BiPoly b;
  for (int i = 0; i <= p.degree(); ++i) b.add_term(i, d - i, p.coeff(i));
  return b;
}

// A / B for homogeneous A (degree a) and B (degree b), when exact.
std::optional<BiPoly> homog_divide(const BiPoly& A, int a, const BiPoly& B, int b) {
  if (A.zero()) return BiPoly();
  if (a < b) return std::nullopt;
  auto [q, r] = divmod(dehomogenize(A, a), dehomogenize(B, b));
  if (!r.zero() || q.degree() > a - b) return std::nullopt;
  return homogenize(q, a - b);
}

// Monic r with f = lc(f) * r^k, by the power-series k-th root of the reversal.
std::optional<UniPoly> monic_kth_root(const UniPoly& f, int k) {
  if (f.zero() || f.degree() % k) return std::nullopt;
  int D = f.degree(), m = D / k;
  UniPoly g = f.monic();
  std::vector<Rat> p(static_cast<std::size_t>(m) + 1), s(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i) p[static_cast<std::size_t>(i)] = g.coeff(D - i);
  s[0] = 1;
  Rat alpha(1, k);
  for (int n = 1; n <= m; ++n) {
    Rat acc = 0;
    for (int i = 1; i <= n; ++i)
      acc += (alpha * i - (n - i)) * p[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(n - i)];
    s[static_cast<std::size_t>(n)] = acc / n;
  }
  std::vector<Rat> r(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i) r[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(m - i)];
  UniPoly rp(r);
  if (!(rp.pow(static_cast<unsigned>(k)) == g)) return std::nullopt;
  return rp;
}

std::optional<Decomposition> try_inner_degree(const BiPoly& F, int n, int e) {
  int k = n / e;
  BiPoly top = F.homogeneous(n);
  UniPoly f = dehomogenize(top, n);
  auto r = monic_kth_root(f, k);
  if (!r) return std::nullopt;
  Rat qk = f.lc();
  BiPoly Re = homogenize(*r, e);
  BiPoly R = Re;
  BiPoly divisor = Re.pow(static_cast<unsigned>(k - 1)).scaled(qk * k);
  for (int j = 1; j < e; ++j) {
    int d = n - j;
    BiPoly residual = F.homogeneous(d) - R.pow(static_cast<unsigned>(k)).homogeneous(d).scaled(qk);
    auto part = homog_divide(residual, d, divisor, e * (k - 1));
    if (!part) return std::nullopt;
    R = R + *part;
  }
  std::vector<Rat> Q(static_cast<std::size_t>(k) + 1);
  Q[static_cast<std::size_t>(k)] = qk;
  BiPoly G = F - R.pow(static_cast<unsigned>(k)).scaled(qk);
  for (int i = k - 1; i >= 1; --i) {
    if (G.total_degree() > e * i) return std::nullopt;
    auto c = homog_divide(G.homogeneous(e * i), e * i, Re.pow(static_cast<unsigned>(i)), e * i);
    if (!c) return std::nullopt;
    Rat ci = c->coeff(0, 0);
    Q[static_cast<std::size_t>(i)] = ci;
    G = G - R.pow(static_cast<unsigned>(i)).scaled(ci);
  }
  if (G.total_degree() > 0) return std::nullopt;
  Q[0] = G.coeff(0, 0);
  return Decomposition{e, UniPoly(Q), R};
}

}  // namespace

std::optional<Decomposition> find_decomposition(const BiPoly& F, int max_inner_deg) {
  int n = F.total_degree();
  for (int e = 1; e <= max_inner_deg && e < n; ++e) {
    if (n % e) continue;
    if (auto d = try_inner_degree(F, n, e)) return d;
  }
  return std::nullopt;
}

IndecomposabilityRecord indecomposability_record(const UniPoly& q, int max_inner_deg) {
  if (q.degree() < 2) throw std::invalid_argument("indecomposability check needs deg q >= 2");
  if (max_inner_deg < 1) throw std::invalid_argument("max_inner_deg must be positive");
  IndecomposabilityRecord rec;
  rec.max_inner_deg = max_inner_deg;
  BiPoly F = difference_poly(q, Rat(0));
  int n = F.total_degree();
  for (int e = 1; e <= max_inner_deg && e < n; ++e)
    if (n % e == 0) rec.inner_degrees_searched.push_back(e);
  rec.witness = find_decomposition(F, max_inner_deg);
  rec.indecomposable = !rec.witness.has_value();
  return rec;
}

bool check_indecomposable_small(const UniPoly& q, int max_inner_deg) {
  return indecomposability_record(q, max_inner_deg).indecomposable;
}

}  // namespace sumlab
