#pragma once

#include "sumlab/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace sumlab {

using i128 = __int128;

struct I128Hash {
  std::size_t operator()(i128 v) const noexcept {
    auto u = static_cast<unsigned __int128>(v);
    auto lo = static_cast<std::uint64_t>(u), hi = static_cast<std::uint64_t>(u >> 64);
    std::uint64_t h = lo * 0x9e3779b97f4a7c15ULL ^ (hi + 0x632be59bd9b4e019ULL + (lo << 6) + (lo >> 2));
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

// Multiplies every value by the lcm of the denominators. Equality and sums of a
// few values are preserved exactly; nullopt when a scaled value needs more than
// 100 bits, in which case callers fall back to Rat keys.
std::optional<std::vector<i128>> scale_to_i128(const std::vector<Rat>& values);

// Calls fn with integer keys when they fit, otherwise with the rationals.
template <class Fn>
auto with_keys(const std::vector<Rat>& values, Fn&& fn) {
  if (auto ints = scale_to_i128(values)) return fn(*ints);
  return fn(values);
}

template <class Key>
struct KeyHash;
template <>
struct KeyHash<i128> : I128Hash {};
template <>
struct KeyHash<Rat> : RatHash {};

// (value, position) pairs sorted for "how many positions in [lo, hi] carry v".
template <class Key>
class SortedRow {
 public:
  SortedRow() = default;
  template <class It>
  SortedRow(It first, It last) {
    std::uint32_t i = 0;
    for (It it = first; it != last; ++it) e_.emplace_back(*it, i++);
    std::sort(e_.begin(), e_.end());
  }
  std::uint64_t count(const Key& v, std::uint32_t lo, std::uint32_t hi) const {
    auto a = std::lower_bound(e_.begin(), e_.end(), std::make_pair(v, lo));
    auto b = std::upper_bound(a, e_.end(), std::make_pair(v, hi));
    return static_cast<std::uint64_t>(b - a);
  }

 private:
  std::vector<std::pair<Key, std::uint32_t>> e_;
};

}  // namespace sumlab
