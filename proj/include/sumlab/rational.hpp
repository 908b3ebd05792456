#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sumlab {

// Canonical form (lowest terms, positive denominator) is maintained by gmpxx
// after every arithmetic operation; parse_rat canonicalizes explicitly.
using Rat = mpq_class;
using Int = mpz_class;

// n/d in canonical form; mpq_class(n, d) alone does not reduce.
inline Rat rat(long n, long d = 1) {
  Rat r(n, d);
  r.canonicalize();
  return r;
}

Rat parse_rat(std::string_view text);
std::string to_string(const Rat& r);

Int floor_of(const Rat& r);
Int ceil_of(const Rat& r);

// floor(r) clamped into [0, 2^63); r must be nonnegative.
std::uint64_t floor_u64(const Rat& r);

long double to_ld(const Rat& r);

struct RatHash {
  std::size_t operator()(const Rat& r) const noexcept;
};

struct IntHash {
  std::size_t operator()(const Int& z) const noexcept;
};

// Simplest rational (least denominator) in the closed interval [lo, hi].
Rat simplest_between(const Rat& lo, const Rat& hi);

// |v| < 2^124 fits the fast kernels.
std::optional<__int128> to_i128(const Int& z);

}  // namespace sumlab
