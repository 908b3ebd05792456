#include "sumlab/keys.hpp"

namespace sumlab {

std::optional<std::vector<i128>> scale_to_i128(const std::vector<Rat>& values) {
  Int L = 1;
  for (const Rat& v : values) {
    if (mpz_cmp_ui(v.get_den_mpz_t(), 1) == 0) continue;
    mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), v.get_den_mpz_t());
    if (mpz_sizeinbase(L.get_mpz_t(), 2) > 100) return std::nullopt;
  }
  std::vector<i128> out;
  out.reserve(values.size());
  Int s;
  for (const Rat& v : values) {
    mpz_divexact(s.get_mpz_t(), L.get_mpz_t(), v.get_den_mpz_t());
    s *= v.get_num();
    if (mpz_sizeinbase(s.get_mpz_t(), 2) > 100) return std::nullopt;
    out.push_back(*to_i128(s));
  }
  return out;
}

}  // namespace sumlab
