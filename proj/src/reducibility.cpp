#include "sumlab/polynomial.hpp"

#include <memory>

namespace sumlab {

namespace {

// Element of Q(alpha) for a real algebraic alpha, held as a polynomial in alpha.
// The defining polynomial may shrink to a factor as zero tests and inversions
// discover common factors; representatives stay valid because the new
// polynomial divides the old one.
struct AlgCtx {
  RealRoot root;
};

class AlgNum {
 public:
  AlgNum() : rep_() {}
  AlgNum(const Rat& r) : rep_(UniPoly::constant(r)) {}  // NOLINT(implicit)
  AlgNum(std::shared_ptr<AlgCtx> ctx, UniPoly rep) : ctx_(std::move(ctx)), rep_(std::move(rep)) { reduce(); }

  static AlgNum generator(const std::shared_ptr<AlgCtx>& ctx) { return AlgNum(ctx, UniPoly::x()); }

  friend AlgNum operator+(const AlgNum& a, const AlgNum& b) { return AlgNum(pick(a, b), a.rep_ + b.rep_); }
  friend AlgNum operator-(const AlgNum& a, const AlgNum& b) { return AlgNum(pick(a, b), a.rep_ - b.rep_); }
  friend AlgNum operator*(const AlgNum& a, const AlgNum& b) { return AlgNum(pick(a, b), a.rep_ * b.rep_); }
  friend AlgNum operator/(const AlgNum& a, const AlgNum& b) { return a * b.inverse(); }

  int sign() const {
    if (rep_.zero()) return 0;
    if (!ctx_ || rep_.degree() == 0) return sgn(rep_.coeff(0));
    return sign_at_root(rep_, ctx_->root);
  }

  // Rational value when the representative is constant after reduction.
  std::optional<Rat> rational() const {
    AlgNum c = *this;
    c.reduce();
    if (c.rep_.degree() <= 0) return c.rep_.coeff(0);
    if (ctx_->root.exact()) return c.rep_.eval(ctx_->root.lo);
    return std::nullopt;
  }

 private:
  static std::shared_ptr<AlgCtx> pick(const AlgNum& a, const AlgNum& b) { return a.ctx_ ? a.ctx_ : b.ctx_; }

  void reduce() {
    if (ctx_ && rep_.degree() >= ctx_->root.m.degree()) rep_ = divmod(rep_, ctx_->root.m).second;
  }

  AlgNum inverse() const {
    if (sign() == 0) throw std::domain_error("inverse of zero algebraic number");
    if (!ctx_ || rep_.degree() <= 0) return AlgNum(ctx_, UniPoly::constant(Rat(1) / rep_.coeff(0)));
    UniPoly& m = ctx_->root.m;
    UniPoly g = poly_gcd(m, rep_);
    if (g.degree() >= 1) m = divmod(m, g).first.monic();
    UniPoly r = divmod(rep_, m).second;
    // Extended Euclid: s*r + t*m = 1.
    UniPoly a = m, b = r, sa, sb = UniPoly::constant(Rat(1));
    while (b.degree() > 0) {
      auto [q, rem] = divmod(a, b);
      UniPoly ns = sa - q * sb;
      a = std::move(b);
      b = std::move(rem);
      sa = std::move(sb);
      sb = std::move(ns);
    }
    // b is a nonzero constant: sb * r == b (mod m).
    return AlgNum(ctx_, sb.scaled(Rat(1) / b.coeff(0)));
  }

  std::shared_ptr<AlgCtx> ctx_;
  UniPoly rep_;
};

bool is_zero(const AlgNum& a) { return a.sign() == 0; }
int sign_of(const AlgNum& a) { return a.sign(); }

}  // namespace
}  // namespace sumlab

namespace sumlab {
namespace {

using AlgPoly = Poly<AlgNum>;

Rat binom(int n, int k) {
  Int r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rat(r);
}

bool has_real_or_rational_root(const UniPoly& p, bool rational_only) {
  if (p.degree() <= 0) return false;
  return rational_only ? !rational_roots(p).empty() : count_real_roots(p) > 0;
}

std::vector<RealRoot> roots_of(const UniPoly& p, bool rational_only) {
  if (!rational_only) return isolate_real_roots(p);
  std::vector<RealRoot> out;
  for (const Rat& r : rational_roots(p)) out.push_back(RealRoot{UniPoly({Rat(-r), Rat(1)}), r, r});
  return out;
}

// Monic square root when p is lc * s^2 with s monic; nullopt otherwise.
std::optional<UniPoly> monic_sqrt(const UniPoly& p) {
  if (p.zero() || p.degree() % 2) return std::nullopt;
  UniPoly m = p.monic();
  int n = m.degree() / 2;
  std::vector<Rat> s(static_cast<std::size_t>(n) + 1);
  s[static_cast<std::size_t>(n)] = 1;
  for (int k = n - 1; k >= 0; --k) {
    // Coefficient of x^{n+k} in s^2 equals 2 s_k + sum of products of higher terms.
    Rat acc = m.coeff(n + k);
    for (int i = k + 1; i <= n; ++i) {
      int j = n + k - i;
      if (j > k && j <= n) acc -= s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(j)];
    }
    s[static_cast<std::size_t>(k)] = acc / 2;
  }
  UniPoly sp(s);
  if (!(sp * sp == m)) return std::nullopt;
  return sp;
}

bool is_rational_square(const Rat& r) {
  if (sgn(r) < 0) return false;
  return mpz_perfect_square_p(r.get_num_mpz_t()) && mpz_perfect_square_p(r.get_den_mpz_t());
}

// D = c * s^2 with s real (or rational).
bool is_square_poly(const UniPoly& D, bool rational_only) {
  if (D.zero()) return true;
  if (!monic_sqrt(D)) return false;
  return rational_only ? is_rational_square(D.lc()) : sgn(D.lc()) > 0;
}

}  // namespace

bool has_linear_factor(const BiPoly& F, bool rational_only, bool allow_vertical) {
  int n = F.total_degree();
  if (n < 1) return false;
  if (allow_vertical) {
    UniPoly g;
    for (int j = 0; j <= F.degree_y(); ++j) g = poly_gcd(g, F.coeff_y(j));
    if (has_real_or_rational_root(g, rational_only)) return true;
  }
  // Non-vertical factors y - a x - b: a is a root of F_n(1, a).
  std::vector<Rat> tc(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) tc[static_cast<std::size_t>(i)] = F.coeff(n - i, i);
  UniPoly T(tc);
  for (RealRoot root : roots_of(T, rational_only)) {
    auto ctx = std::make_shared<AlgCtx>(AlgCtx{root});
    AlgNum alpha = AlgNum::generator(ctx);
    std::vector<AlgNum> apow{AlgNum(Rat(1))};
    for (int l = 1; l <= n; ++l) apow.push_back(apow.back() * alpha);
    // F(x, a x + b) = sum_k e_k(b) x^k.
    std::vector<std::vector<AlgNum>> e(static_cast<std::size_t>(n) + 1,
                                       std::vector<AlgNum>(static_cast<std::size_t>(n) + 1, AlgNum(Rat(0))));
    for (const auto& [key, c] : F.terms()) {
      auto [i, j] = key;
      for (int l = 0; l <= j; ++l) {
        auto k = static_cast<std::size_t>(i + l), s = static_cast<std::size_t>(j - l);
        e[k][s] = e[k][s] + AlgNum(c * binom(j, l)) * apow[static_cast<std::size_t>(l)];
      }
    }
    AlgPoly G;
    bool any = false;
    for (int k = 0; k < n; ++k) {
      AlgPoly ek(e[static_cast<std::size_t>(k)]);
      if (ek.zero()) continue;
      G = any ? poly_gcd(G, ek) : ek;
      any = true;
    }
    if (!any) return true;
    if (G.degree() < 1) continue;
    if (rational_only) {
      std::vector<Rat> qc;
      for (const AlgNum& a : G.coeffs()) qc.push_back(*a.rational());
      if (!rational_roots(UniPoly(qc)).empty()) return true;
    } else if (count_real_roots(G) > 0) {
      return true;
    }
  }
  return false;
}

bool conic_is_degenerate(const BiPoly& q) {
  if (q.total_degree() != 2) throw std::invalid_argument("conic test needs total degree 2");
  Rat a = q.coeff(2, 0), b = q.coeff(1, 1), c = q.coeff(0, 2);
  Rat d = q.coeff(1, 0), e = q.coeff(0, 1), f = q.coeff(0, 0);
  Rat M[3][3] = {{a, b / 2, d / 2}, {b / 2, c, e / 2}, {d / 2, e / 2, f}};
  Rat det = M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
            M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
            M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
  if (sgn(det) != 0) return false;
  Rat e2 = (M[0][0] * M[1][1] - M[0][1] * M[1][0]) + (M[0][0] * M[2][2] - M[0][2] * M[2][0]) +
           (M[1][1] * M[2][2] - M[1][2] * M[2][1]);
  // Rank 2 indefinite: two real lines. Rank 1: a double real line.
  return sgn(e2) <= 0;
}

bool has_quadratic_pair(const BiPoly& F, bool rational_only) {
  if (F.total_degree() != 4) throw std::invalid_argument("quadratic-pair test needs total degree 4");
  // Shear so that y^4 appears: coefficient of y^4 in F(x + c y, y) is F_4(c, 1).
  BiPoly top = F.homogeneous(4);
  Rat shift = 0;
  for (long k = 0;; ++k) {
    shift = (k % 2 ? Rat((k + 1) / 2) : Rat(-(k / 2)));
    if (sgn(top.eval(shift, Rat(1))) != 0) break;
  }
  BiPoly G = F.substitute(BiPoly::x() + BiPoly::y().scaled(shift), BiPoly::y());
  G = G.scaled(Rat(1) / G.coeff(0, 4));
  // Depress: y -> y - a(x)/4 removes the y^3 term.
  UniPoly a = G.coeff_y(3);
  G = G.substitute(BiPoly::x(), BiPoly::y() - BiPoly::from_x(a).scaled(rat(1, 4)));
  UniPoly p = G.coeff_y(2), q = G.coeff_y(1), r = G.coeff_y(0);
  UniPoly D = p * p - r.scaled(Rat(4));
  auto in_s = [](const UniPoly& c, int power) {
    BiPoly b;
    for (int i = 0; i <= c.degree(); ++i) b.add_term(i, power, c.coeff(i));
    return b;
  };
  if (q.zero()) {
    if (is_square_poly(D, rational_only)) return true;
    BiPoly P = in_s(UniPoly::constant(Rat(1)), 4) + in_s(p.scaled(Rat(2)), 2) + in_s(D, 0);
    return has_linear_factor(P, rational_only, false);
  }
  // (y^2 + s y + u)(y^2 - s y + v) exists iff z = s^2 solves the cubic resolvent.
  BiPoly P = in_s(UniPoly::constant(Rat(1)), 6) + in_s(p.scaled(Rat(2)), 4) + in_s(D, 2) - in_s(q * q, 0);
  return has_linear_factor(P, rational_only, false);
}

namespace {
bool reducible_impl(const BiPoly& q, bool rational_only) {
  int n = q.total_degree();
  if (n < 1) throw std::invalid_argument("reducibility test needs a nonconstant polynomial");
  if (n > 4) throw UnsupportedDegree("reducibility test supports total degree <= 4, got " + std::to_string(n));
  if (n == 1) return false;
  if (n == 2 && !rational_only) return conic_is_degenerate(q);
  if (has_linear_factor(q, rational_only)) return true;
  return n == 4 && has_quadratic_pair(q, rational_only);
}
}  // namespace

bool is_reducible(const BiPoly& q) { return reducible_impl(q, false); }
bool is_reducible_over_Q(const BiPoly& q) { return reducible_impl(q, true); }

BiPoly difference_poly(const UniPoly& u, const Rat& lambda) {
  return BiPoly::from_x(u) - BiPoly::from_y(u) + BiPoly::constant(lambda);
}

UniPoly charpoly(const std::vector<std::vector<Rat>>& A) {
  std::size_t n = A.size();
  std::vector<Rat> c(n + 1);
  c[n] = 1;
  std::vector<std::vector<Rat>> Mk(n, std::vector<Rat>(n, Rat(0)));
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I
    std::vector<std::vector<Rat>> next(n, std::vector<Rat>(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Rat s = 0;
        for (std::size_t l = 0; l < n; ++l) s += A[i][l] * Mk[l][j];
        next[i][j] = s;
      }
    for (std::size_t i = 0; i < n; ++i) next[i][i] += c[n - k + 1];
    Mk = std::move(next);
    Rat tr = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += A[i][l] * Mk[l][i];
    c[n - k] = -tr / Rat(static_cast<long>(k));
  }
  return UniPoly(c);
}

std::vector<Rat> critical_value_differences(const UniPoly& u) {
  int n = u.degree();
  if (n < 2) return {};
  UniPoly du = u.derivative();
  auto dim = static_cast<std::size_t>(n - 1);
  // Multiplication by u on Q[y]/(u'), basis 1, y, ..., y^{n-2}.
  std::vector<std::vector<Rat>> M(dim, std::vector<Rat>(dim, Rat(0)));
  for (std::size_t j = 0; j < dim; ++j) {
    UniPoly col = divmod(u * UniPoly::monomial(Rat(1), static_cast<int>(j)), du).second;
    for (std::size_t i = 0; i < dim; ++i) M[i][j] = col.coeff(static_cast<int>(i));
  }
  // Eigenvalues of M (x) I - I (x) M are all differences of critical values.
  std::size_t N = dim * dim;
  std::vector<std::vector<Rat>> K(N, std::vector<Rat>(N, Rat(0)));
  for (std::size_t i1 = 0; i1 < dim; ++i1)
    for (std::size_t i2 = 0; i2 < dim; ++i2)
      for (std::size_t j1 = 0; j1 < dim; ++j1)
        for (std::size_t j2 = 0; j2 < dim; ++j2) {
          Rat v = 0;
          if (i2 == j2) v += M[i1][j1];
          if (i1 == j1) v -= M[i2][j2];
          K[i1 * dim + i2][j1 * dim + j2] = v;
        }
  return rational_roots(charpoly(K));
}

LambdaClassification classify_lambdas(const PolySpec& spec) {
  LambdaClassification out;
  std::vector<Rat> bad;
  for (const UniPoly* u : {&spec.g, &spec.h}) {
    if (u->degree() < 2) continue;
    if (u->degree() > 4)
      throw UnsupportedDegree("bad-pair classification supports degree <= 4, got " + std::to_string(u->degree()));
    for (const Rat& lambda : critical_value_differences(*u)) {
      out.candidates.push_back(lambda);
      BiPoly q = difference_poly(*u, lambda);
      bool real = is_reducible(q);
      if (real) bad.push_back(lambda);
      if (real != is_reducible_over_Q(q)) out.q_r_disagree.push_back(lambda);
    }
  }
  out.bad = FiniteSet::from_unsorted(std::move(bad));
  auto& cand = out.candidates;
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  auto& dis = out.q_r_disagree;
  std::sort(dis.begin(), dis.end());
  dis.erase(std::unique(dis.begin(), dis.end()), dis.end());
  return out;
}

FiniteSet bad_lambdas(const PolySpec& spec) { return classify_lambdas(spec).bad; }

FiniteSet bad_lambdas_sampled(const PolySpec& spec, const FiniteSet& B) {
  std::vector<Rat> hb;
  for (const Rat& b : B) hb.push_back(spec.h.eval(b));
  FiniteSet H = FiniteSet::from_unsorted(hb);
  FiniteSet L = diffset(H, H);
  std::vector<Rat> bad;
  for (const Rat& lambda : L) {
    for (const UniPoly* u : {&spec.g, &spec.h}) {
      if (u->degree() < 2) continue;
      if (is_reducible(difference_poly(*u, lambda))) {
        bad.push_back(lambda);
        break;
      }
    }
  }
  return FiniteSet::from_unsorted(std::move(bad));
}

BadPairOracle::BadPairOracle(const PolySpec& spec) : spec_(spec), lambdas_(bad_lambdas(spec)) {}

bool BadPairOracle::is_bad_pair(const Rat& b1, const Rat& b2) const {
  return is_bad_lambda(spec_.h.eval(b1) - spec_.h.eval(b2));
}

bool is_bad_pair(const PolySpec& spec, const Rat& b1, const Rat& b2) {
  return BadPairOracle(spec).is_bad_pair(b1, b2);
}

}  // namespace sumlab
