#pragma once

// Independent brute-force routes used only by the tests.

#include "sumlab/polynomial.hpp"

#include <map>
#include <optional>
#include <vector>

namespace oracle {

using sumlab::BiPoly;
using sumlab::Rat;
using sumlab::UniPoly;

inline Rat det(std::vector<std::vector<Rat>> m) {
  std::size_t n = m.size();
  Rat d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m[p][c]) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      d = -d;
    }
    d *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      Rat f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return d;
}

// Polynomial in y of F(x0, y), ascending.
inline std::vector<Rat> slice(const BiPoly& F, const Rat& x0) {
  std::vector<Rat> v(static_cast<std::size_t>(std::max(F.degree_y(), 0)) + 1);
  for (const auto& [k, c] : F.terms()) {
    Rat term = c;
    for (int i = 0; i < k.first; ++i) term *= x0;
    v[static_cast<std::size_t>(k.second)] += term;
  }
  return v;
}

inline Rat sylvester_resultant(const std::vector<Rat>& a, const std::vector<Rat>& b, std::size_t m,
                               std::size_t n) {
  // a has formal degree m, b formal degree n.
  std::size_t N = m + n;
  if (N == 0) return 1;
  std::vector<std::vector<Rat>> S(N, std::vector<Rat>(N, Rat(0)));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i <= m; ++i) S[r][r + i] = i < a.size() ? a[m - i] : Rat(0);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t i = 0; i <= n; ++i) S[n + r][r + i] = i < b.size() ? b[n - i] : Rat(0);
  return det(S);
}

inline BiPoly dx(const BiPoly& F) {
  BiPoly r;
  for (const auto& [k, c] : F.terms())
    if (k.first) r.add_term(k.first - 1, k.second, c * k.first);
  return r;
}
inline BiPoly dy(const BiPoly& F) {
  BiPoly r;
  for (const auto& [k, c] : F.terms())
    if (k.second) r.add_term(k.first, k.second - 1, c * k.second);
  return r;
}

// Res_y(A, B) as a polynomial in x, by evaluation at integer points and
// Lagrange interpolation.
inline UniPoly resultant_y(const BiPoly& A, const BiPoly& B) {
  std::size_t m = static_cast<std::size_t>(A.degree_y()), n = static_cast<std::size_t>(B.degree_y());
  int bound = A.total_degree() * B.total_degree();
  std::vector<Rat> xs, ys;
  for (int i = 0; i <= bound; ++i) {
    Rat x0(i - bound / 2);
    xs.push_back(x0);
    ys.push_back(sylvester_resultant(slice(A, x0), slice(B, x0), m, n));
  }
  UniPoly acc;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    UniPoly basis = UniPoly::constant(ys[i]);
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (i == j) continue;
      basis = basis * UniPoly({Rat(-xs[j] / (xs[i] - xs[j])), Rat(1 / (xs[i] - xs[j]))});
    }
    acc = acc + basis;
  }
  return acc;
}

// Certifies irreducibility over C: squarefree top form and no affine singular
// point force the curve to be irreducible (two components would meet in an
// affine point). nullopt when the certificate does not apply.
inline std::optional<bool> certify_irreducible(BiPoly F) {
  int n = F.total_degree();
  // Make the y^n coefficient nonzero by a shear.
  for (long c = 0; sgn(F.coeff(0, n)) == 0; ++c)
    F = F.substitute(BiPoly::x() + BiPoly::y().scaled(Rat(c)), BiPoly::y());
  BiPoly top = F.homogeneous(n);
  std::vector<Rat> tv;
  for (int i = 0; i <= n; ++i) tv.push_back(top.coeff(n - i, i));
  UniPoly t(tv);  // F_n(1, s) has full degree n after the shear
  if (sumlab::poly_gcd(t, t.derivative()).degree() > 0) return std::nullopt;
  UniPoly r1 = resultant_y(F, dy(F)), r2 = resultant_y(dx(F), dy(F));
  if (r1.zero() || r2.zero()) return std::nullopt;
  if (sumlab::poly_gcd(r1, r2).degree() > 0) return std::nullopt;
  return true;
}

}  // namespace oracle
