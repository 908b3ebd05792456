#include "sumlab/finite_set.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sumlab {

FiniteSet::FiniteSet(std::vector<Rat> sorted) : elems_(std::move(sorted)) {
  for (std::size_t i = 1; i < elems_.size(); ++i) {
    if (!(elems_[i - 1] < elems_[i]))
      throw std::invalid_argument("FiniteSet elements must strictly increase");
  }
}

FiniteSet FiniteSet::from_unsorted(std::vector<Rat> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return FiniteSet(std::move(values));
}

FiniteSet FiniteSet::from_ints(const std::vector<long>& values) {
  std::vector<Rat> v;
  v.reserve(values.size());
  for (long x : values) v.emplace_back(x);
  return from_unsorted(std::move(v));
}

std::size_t FiniteSet::find(const Rat& x) const {
  auto it = std::lower_bound(elems_.begin(), elems_.end(), x);
  if (it == elems_.end() || *it != x) return npos;
  return static_cast<std::size_t>(it - elems_.begin());
}

bool FiniteSet::contains(const Rat& x) const { return find(x) != npos; }

namespace {
template <class Op>
FiniteSet combine(const FiniteSet& X, const FiniteSet& Y, Op op, const char* name) {
  if (X.empty() || Y.empty()) throw std::invalid_argument(std::string(name) + ": empty input");
  std::vector<Rat> out;
  out.reserve(X.size() * Y.size());
  for (const Rat& x : X)
    for (const Rat& y : Y) out.push_back(op(x, y));
  return FiniteSet::from_unsorted(std::move(out));
}
}  // namespace

FiniteSet sumset(const FiniteSet& X, const FiniteSet& Y) {
  return combine(X, Y, [](const Rat& a, const Rat& b) { return Rat(a + b); }, "sumset");
}

FiniteSet diffset(const FiniteSet& X, const FiniteSet& Y) {
  return combine(X, Y, [](const Rat& a, const Rat& b) { return Rat(a - b); }, "diffset");
}

FiniteSet productset(const FiniteSet& X, const FiniteSet& Y) {
  return combine(X, Y, [](const Rat& a, const Rat& b) { return Rat(a * b); }, "productset");
}

FiniteSet translate(const FiniteSet& X, const Rat& c) {
  std::vector<Rat> v;
  v.reserve(X.size());
  for (const Rat& x : X) v.emplace_back(x + c);
  return FiniteSet(std::move(v));
}

std::size_t index_of(const FiniteSet& X, const Rat& x) {
  std::size_t i = X.find(x);
  if (i == FiniteSet::npos) throw MembershipError("element " + to_string(x) + " not in set");
  return i + 1;
}

std::size_t close_window(std::size_t n, const Rat& t) {
  if (sgn(t) <= 0) throw std::invalid_argument("t must be positive");
  return static_cast<std::size_t>(floor_u64(t * Rat(static_cast<unsigned long>(n))));
}

bool is_t_close(const FiniteSet& X, const Rat& x1, const Rat& x2, const Rat& t) {
  if (sgn(t) <= 0 || t > 1) throw std::invalid_argument("t must lie in (0, 1]");
  std::size_t i = index_of(X, x1), j = index_of(X, x2);
  std::size_t gap = i > j ? i - j : j - i;
  return gap <= close_window(X.size(), t);
}

bool is_arithmetic_progression(const FiniteSet& X) {
  for (std::size_t i = 2; i < X.size(); ++i)
    if (X[i] - X[i - 1] != X[1] - X[0]) return false;
  return true;
}

FiniteSet read_set(std::istream& in) {
  std::vector<Rat> v;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    v.push_back(parse_rat(line));
  }
  std::vector<Rat> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("set file contains duplicate elements");
  return FiniteSet(std::move(sorted));
}

FiniteSet read_set_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open set file: " + path);
  return read_set(in);
}

void write_set(std::ostream& out, const FiniteSet& X) {
  for (const Rat& x : X) out << x.get_str() << '\n';
}

std::string format_set(const FiniteSet& X) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < X.size(); ++i) os << (i ? "," : "") << X[i].get_str();
  os << '}';
  return os.str();
}

}  // namespace sumlab
