#pragma once

#include "sumlab/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace sumlab {

struct MembershipError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Immutable sorted set of rationals. Elements strictly increase.
class FiniteSet {
 public:
  FiniteSet() = default;
  // Throws std::invalid_argument unless `sorted` strictly increases.
  explicit FiniteSet(std::vector<Rat> sorted);
  static FiniteSet from_unsorted(std::vector<Rat> values);
  static FiniteSet from_ints(const std::vector<long>& values);

  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  const Rat& operator[](std::size_t i) const { return elems_[i]; }
  const std::vector<Rat>& elements() const { return elems_; }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }

  bool contains(const Rat& x) const;
  // 0-based position, or npos.
  std::size_t find(const Rat& x) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  bool operator==(const FiniteSet& o) const { return elems_ == o.elems_; }

 private:
  std::vector<Rat> elems_;
};

FiniteSet sumset(const FiniteSet& X, const FiniteSet& Y);
FiniteSet diffset(const FiniteSet& X, const FiniteSet& Y);
FiniteSet productset(const FiniteSet& X, const FiniteSet& Y);
FiniteSet translate(const FiniteSet& X, const Rat& c);

// i_X(x), 1-based.
std::size_t index_of(const FiniteSet& X, const Rat& x);

// |i_X(x1) - i_X(x2)| <= t|X|.
bool is_t_close(const FiniteSet& X, const Rat& x1, const Rat& x2, const Rat& t);

// Largest integer gap g with g <= t*n; index pairs with |i-j| <= g are the t-close ones.
std::size_t close_window(std::size_t n, const Rat& t);

bool is_arithmetic_progression(const FiniteSet& X);

// Set literal format: one rational per line, '#' starts a comment.
FiniteSet read_set(std::istream& in);
FiniteSet read_set_file(const std::string& path);
void write_set(std::ostream& out, const FiniteSet& X);
std::string format_set(const FiniteSet& X);

}  // namespace sumlab
