#include "sumlab/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace sumlab {

Rat parse_rat(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && (text[b] == ' ' || text[b] == '\t')) ++b;
  while (e > b && (text[e - 1] == ' ' || text[e - 1] == '\t' || text[e - 1] == '\r')) --e;
  std::string s(text.substr(b, e - b));
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  if (s[0] == '+') s.erase(0, 1);
  auto slash = s.find('/');
  auto valid_int = [](const std::string& t) {
    std::size_t i = (!t.empty() && t[0] == '-') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  Rat r;
  if (slash == std::string::npos) {
    if (!valid_int(s)) throw std::invalid_argument("bad rational literal: " + s);
    r = Rat(Int(s));
  } else {
    std::string n = s.substr(0, slash), d = s.substr(slash + 1);
    if (!valid_int(n) || !valid_int(d) || d[0] == '-')
      throw std::invalid_argument("bad rational literal: " + s);
    Int den(d);
    if (den == 0) throw std::invalid_argument("zero denominator: " + s);
    r = Rat(Int(n), den);
    r.canonicalize();
  }
  return r;
}

std::string to_string(const Rat& r) { return r.get_str(); }

Int floor_of(const Rat& r) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Int ceil_of(const Rat& r) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

std::uint64_t floor_u64(const Rat& r) {
  if (sgn(r) < 0) throw std::invalid_argument("floor_u64 of negative value");
  Int f = floor_of(r);
  if (mpz_sizeinbase(f.get_mpz_t(), 2) > 62) return std::uint64_t{1} << 62;
  return static_cast<std::uint64_t>(f.get_ui());
}

long double to_ld(const Rat& r) {
  // Exponent-safe conversion: numerator and denominator can exceed long double range.
  long e1 = 0, e2 = 0;
  double n = mpz_get_d_2exp(&e1, r.get_num_mpz_t());
  double d = mpz_get_d_2exp(&e2, r.get_den_mpz_t());
  return std::ldexp(static_cast<long double>(n) / d, static_cast<int>(e1 - e2));
}

namespace {
std::size_t hash_mpz(mpz_srcptr z) {
  std::size_t h = static_cast<std::size_t>(z->_mp_size) * 0x9e3779b97f4a7c15ULL;
  int n = z->_mp_size < 0 ? -z->_mp_size : z->_mp_size;
  for (int i = 0; i < n; ++i) {
    h ^= static_cast<std::size_t>(z->_mp_d[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}
}  // namespace

std::size_t RatHash::operator()(const Rat& r) const noexcept {
  std::size_t a = hash_mpz(r.get_num_mpz_t());
  std::size_t b = hash_mpz(r.get_den_mpz_t());
  return a ^ (b * 0xff51afd7ed558ccdULL + (a << 7));
}

std::size_t IntHash::operator()(const Int& z) const noexcept { return hash_mpz(z.get_mpz_t()); }

Rat simplest_between(const Rat& lo, const Rat& hi) {
  if (lo > hi) return simplest_between(hi, lo);
  if (sgn(lo) <= 0 && sgn(hi) >= 0) return Rat(0);
  if (sgn(hi) < 0) return Rat(-simplest_between(-hi, -lo));
  Rat c(ceil_of(lo));
  if (c <= hi) return c;
  // lo and hi lie strictly inside (n, n+1).
  Rat n(floor_of(lo));
  Rat inner = simplest_between(Rat(1) / (hi - n), Rat(1) / (lo - n));
  return Rat(n + Rat(1) / inner);
}

std::optional<__int128> to_i128(const Int& z) {
  if (mpz_sizeinbase(z.get_mpz_t(), 2) > 124) return std::nullopt;
  Int a = abs(z);
  unsigned __int128 v = 0;
  std::size_t count = 0;
  std::uint64_t limbs[2] = {0, 0};
  mpz_export(limbs, &count, -1, sizeof(std::uint64_t), 0, 0, a.get_mpz_t());
  v = (static_cast<unsigned __int128>(limbs[1]) << 64) | limbs[0];
  __int128 s = static_cast<__int128>(v);
  return sgn(z) < 0 ? -s : s;
}

}  // namespace sumlab
