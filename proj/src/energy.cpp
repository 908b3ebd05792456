#include "sumlab/energy.hpp"

#include "sumlab/keys.hpp"
#include "sumlab/parallel.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace sumlab {

void EnergyTable::add(const Rat& level, std::uint64_t count) {
  if (count == 0) return;
  std::uint64_t& m = levels[level];
  squared_total += 2 * m * count + count * count;
  total += count;
  m += count;
}

std::uint64_t EnergyTable::multiplicity(const Rat& level) const {
  auto it = levels.find(level);
  return it == levels.end() ? 0 : it->second;
}

bool EnergyTable::consistent() const {
  std::uint64_t t = 0, s = 0;
  for (const auto& [v, m] : levels) {
    t += m;
    s += m * m;
  }
  return t == total && s == squared_total;
}

void EnergyTable::write_csv(std::ostream& out) const {
  out << "numerator,denominator,multiplicity\n";
  for (const auto& [v, m] : levels) out << v.get_num() << ',' << v.get_den() << ',' << m << '\n';
}

EnergyTable EnergyTable::read_csv(std::istream& in) {
  EnergyTable table;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("numerator", 0) == 0) continue;
    }
    std::istringstream row(line);
    std::string num, den, mult;
    if (!std::getline(row, num, ',') || !std::getline(row, den, ',') || !std::getline(row, mult))
      throw std::invalid_argument("energy csv: malformed row '" + line + "'");
    Int n(num), d(den);
    if (d <= 0) throw std::invalid_argument("energy csv: nonpositive denominator");
    Rat level(n, d);
    level.canonicalize();
    table.add(level, std::stoull(mult));
  }
  return table;
}

namespace {

// Adds each distinct value of `values` to `table` with its multiplicity.
void tally(const std::vector<Rat>& values, EnergyTable& table) {
  with_keys(values, [&](const auto& keys) {
    using Key = typename std::decay_t<decltype(keys)>::value_type;
    std::unordered_map<Key, std::pair<std::uint64_t, std::size_t>, KeyHash<Key>> groups;
    groups.reserve(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
      auto [it, fresh] = groups.try_emplace(keys[i], 0, i);
      ++it->second.first;
    }
    for (const auto& [k, cr] : groups) table.add(values[cr.second], cr.first);
    return 0;
  });
}

std::vector<Rat> eval_all(const UniPoly& u, const FiniteSet& X) {
  std::vector<Rat> out;
  out.reserve(X.size());
  for (const Rat& x : X) out.push_back(u.eval(x));
  return out;
}

// f(a, b) laid out as row b, column a.
std::vector<Rat> f_grid(const PolySpec& spec, const FiniteSet& A, const FiniteSet& B) {
  std::vector<Rat> out;
  out.reserve(A.size() * B.size());
  for (const Rat& b : B) {
    Rat pb = spec.p.eval(b), hb = spec.h.eval(b);
    for (const Rat& a : A) out.push_back(spec.g.eval(a + pb) + hb);
  }
  return out;
}

}  // namespace

EnergyTable energy_Q(const PolySpec& spec, const FiniteSet& A, const FiniteSet& B) {
  EnergyTable table;
  tally(f_grid(spec, A, B), table);
  return table;
}

std::uint64_t count_Q_bad(const BadPairOracle& oracle, const FiniteSet& A, const FiniteSet& B) {
  const PolySpec& spec = oracle.spec();
  std::vector<Rat> grid = f_grid(spec, A, B);
  std::vector<Rat> hB = eval_all(spec.h, B);
  const std::size_t na = A.size(), nb = B.size();
  const auto& lambdas = oracle.lambdas().elements();
  if (lambdas.empty() || na == 0 || nb == 0) return 0;

  std::vector<Rat> all = grid;
  all.insert(all.end(), hB.begin(), hB.end());
  all.insert(all.end(), lambdas.begin(), lambdas.end());
  return with_keys(all, [&](const auto& keys) -> std::uint64_t {
    using Key = typename std::decay_t<decltype(keys)>::value_type;
    const Key* F = keys.data();
    const Key* H = F + na * nb;
    const Key* L = H + nb;
    std::unordered_multimap<Key, std::uint32_t, KeyHash<Key>> by_h;
    for (std::uint32_t j = 0; j < nb; ++j) by_h.emplace(H[j], j);
    return parallel_sum(nb, [&](std::size_t b1) -> std::uint64_t {
      std::uint64_t total = 0;
      for (std::size_t l = 0; l < lambdas.size(); ++l) {
        // h(b1) - h(b2) = lambda
        auto range = by_h.equal_range(H[b1] - L[l]);
        for (auto it = range.first; it != range.second; ++it) {
          std::size_t b2 = it->second;
          std::unordered_map<Key, std::uint64_t, KeyHash<Key>> row;
          for (std::size_t a = 0; a < na; ++a) ++row[F[b2 * na + a]];
          for (std::size_t a = 0; a < na; ++a) {
            auto hit = row.find(F[b1 * na + a]);
            if (hit != row.end()) total += hit->second;
          }
        }
      }
      return total;
    });
  });
}

std::uint64_t count_Q_bad(const PolySpec& spec, const FiniteSet& A, const FiniteSet& B) {
  return count_Q_bad(BadPairOracle(spec), A, B);
}

PairSet build_P(const BadPairOracle& oracle, const FiniteSet& B, const Rat& t) {
  if (t < 0 || t > 1) throw std::invalid_argument("build_P: t must lie in [0, 1]");
  PairSet P;
  P.ambient = B;
  P.t = t;
  const std::size_t n = B.size();
  P.below_standing_assumption = t * static_cast<long>(n) < 1;
  const std::size_t w = close_window(n, t);
  std::vector<Rat> hB = eval_all(oracle.spec().h, B);
  P.pairs.reserve(n * n);
  P.flags_.assign(n * n, 0);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      bool close = (i > j ? i - j : j - i) <= w;
      bool bad = oracle.is_bad_lambda(hB[i] - hB[j]);
      P.pairs.push_back({i, j, close, bad});
      if (close && !bad) {
        P.members.emplace_back(i, j);
        P.flags_[i * n + j] = 1;
      }
    }
  }
  return P;
}

PairSet build_P(const PolySpec& spec, const FiniteSet& B, const Rat& t) {
  return build_P(BadPairOracle(spec), B, t);
}

namespace {

StEnergy st_from_pairs(const PolySpec& spec, const PairSet& P) {
  StEnergy out;
  std::vector<Rat> hB = eval_all(spec.h, P.ambient);
  std::vector<Rat> deltas;
  deltas.reserve(P.members.size());
  for (auto [i, j] : P.members) deltas.push_back(hB[i] - hB[j]);
  tally(deltas, out.p_delta);
  for (const auto& [d, m] : out.p_delta.levels) out.st += m * out.p_delta.multiplicity(-d);
  return out;
}

}  // namespace

StEnergy energy_St(const BadPairOracle& oracle, const FiniteSet& B, const Rat& t) {
  return st_from_pairs(oracle.spec(), build_P(oracle, B, t));
}

StEnergy energy_St(const PolySpec& spec, const FiniteSet& B, const Rat& t) {
  return energy_St(BadPairOracle(spec), B, t);
}

std::uint64_t energy_Rt(const BadPairOracle& oracle, const FiniteSet& A, const FiniteSet& B, const Rat& t) {
  if (A.empty() || B.empty()) return 0;
  const PolySpec& spec = oracle.spec();
  const PairSet P = build_P(oracle, B, t);
  const FiniteSet AA = sumset(A, A);
  const std::size_t na = A.size(), nb = B.size(), ns = AA.size();
  const std::size_t wa = close_window(na, t), ws = close_window(ns, t);

  // values[(a' * nb + b) * ns + k] = f(AA[k] - a', b)
  std::vector<Rat> values;
  values.reserve(na * nb * ns);
  for (const Rat& ap : A) {
    for (const Rat& b : B) {
      Rat shift = spec.p.eval(b) - ap, hb = spec.h.eval(b);
      for (const Rat& s : AA) values.push_back(spec.g.eval(s + shift) + hb);
    }
  }

  return with_keys(values, [&](const auto& keys) -> std::uint64_t {
    using Key = typename std::decay_t<decltype(keys)>::value_type;
    std::vector<SortedRow<Key>> rows(na * nb);
    for (std::size_t r = 0; r < na * nb; ++r) rows[r] = SortedRow<Key>(keys.begin() + r * ns, keys.begin() + (r + 1) * ns);
    return parallel_sum(P.members.size(), [&](std::size_t m) -> std::uint64_t {
      auto [b1, b2] = P.members[m];
      std::uint64_t total = 0;
      for (std::size_t a1 = 0; a1 < na; ++a1) {
        const Key* left = keys.data() + (a1 * nb + b1) * ns;
        std::size_t lo2 = a1 > wa ? a1 - wa : 0, hi2 = std::min(na - 1, a1 + wa);
        for (std::size_t a2 = lo2; a2 <= hi2; ++a2) {
          const SortedRow<Key>& row = rows[a2 * nb + b2];
          for (std::size_t k1 = 0; k1 < ns; ++k1) {
            auto lo = static_cast<std::uint32_t>(k1 > ws ? k1 - ws : 0);
            auto hi = static_cast<std::uint32_t>(std::min(ns - 1, k1 + ws));
            total += row.count(left[k1], lo, hi);
          }
        }
      }
      return total;
    });
  });
}

std::uint64_t energy_Rt(const PolySpec& spec, const FiniteSet& A, const FiniteSet& B, const Rat& t) {
  return energy_Rt(BadPairOracle(spec), A, B, t);
}

std::uint64_t energy_Ttr(const PolySpec& spec, const FiniteSet& B, const IndexPairs& S, const Rat& t,
                         const Rat& r) {
  if (!(t > 0 && t <= r && r <= 1)) throw std::invalid_argument("energy_Ttr: need 0 < t <= r <= 1");
  if (B.empty() || S.empty()) return 0;
  const FiniteSet BB = sumset(B, B);
  const std::size_t nb = B.size(), ns = BB.size();
  const Rat ratio = t / r;
  const std::size_t wb = close_window(nb, ratio), ws = close_window(ns, ratio);

  // H[b' * ns + k] = h(BB[k] - b'), followed by h(B).
  std::vector<Rat> values;
  values.reserve(nb * ns + nb);
  for (const Rat& bp : B)
    for (const Rat& s : BB) values.push_back(spec.h.eval(s - bp));
  for (const Rat& b : B) values.push_back(spec.h.eval(b));
  for (auto [i, j] : S)
    if (i >= nb || j >= nb) throw std::out_of_range("energy_Ttr: pair index outside B");

  return with_keys(values, [&](const auto& keys) -> std::uint64_t {
    using Key = typename std::decay_t<decltype(keys)>::value_type;
    const Key* H = keys.data();
    const Key* hB = H + nb * ns;
    // w = h(c1) - h(c2) over S
    std::unordered_map<Key, std::uint64_t, KeyHash<Key>> W;
    for (auto [i, j] : S) ++W[hB[i] - hB[j]];
    return parallel_sum(nb, [&](std::size_t b1) -> std::uint64_t {
      std::uint64_t total = 0;
      std::size_t lo2 = b1 > wb ? b1 - wb : 0, hi2 = std::min(nb - 1, b1 + wb);
      for (std::size_t b2 = lo2; b2 <= hi2; ++b2) {
        for (std::size_t k1 = 0; k1 < ns; ++k1) {
          const Key& x1 = H[b1 * ns + k1];
          std::size_t lo = k1 > ws ? k1 - ws : 0, hi = std::min(ns - 1, k1 + ws);
          for (std::size_t k2 = lo; k2 <= hi; ++k2) {
            auto it = W.find(H[b2 * ns + k2] - x1);
            if (it != W.end()) total += it->second;
          }
        }
      }
      return total;
    });
  });
}

std::uint64_t dyadic_class_count(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("dyadic_class_count: n must be positive");
  std::uint64_t k = 0;
  while (n >>= 1) ++k;
  return k + 1;
}

HostSelection select_hosts(const BadPairOracle& oracle, const FiniteSet& B, const Rat& t) {
  const PairSet P = build_P(oracle, B, t);
  const StEnergy st = st_from_pairs(oracle.spec(), P);
  HostSelection out;
  out.st = st.st;
  if (st.st == 0) return out;

  // dyadic floor of |P_delta| -> sum of |P_delta|^2 over that class
  std::map<std::uint64_t, std::uint64_t> weight;
  auto floor_pow2 = [](std::uint64_t v) { return std::uint64_t{1} << (dyadic_class_count(v) - 1); };
  for (const auto& [d, m] : st.p_delta.levels) weight[floor_pow2(m)] += m * st.p_delta.multiplicity(-d);
  std::uint64_t best = 0;
  for (const auto& [m, w] : weight)
    if (w > best) {  // strict: ties keep the smaller m
      best = w;
      out.m = m;
    }
  out.empty = false;
  out.st_star = best;
  for (const auto& [d, m] : st.p_delta.levels)
    if (floor_pow2(m) == out.m) out.delta_class.push_back(d);

  std::vector<Rat> hB = eval_all(oracle.spec().h, B);
  for (auto [i, j] : P.members) {
    Rat d = hB[i] - hB[j];
    if (std::binary_search(out.delta_class.begin(), out.delta_class.end(), d)) out.R.emplace_back(i, j);
    if (std::binary_search(out.delta_class.begin(), out.delta_class.end(), Rat(-d))) out.S.emplace_back(i, j);
  }
  return out;
}

HostSelection select_hosts(const PolySpec& spec, const FiniteSet& B, const Rat& t) {
  return select_hosts(BadPairOracle(spec), B, t);
}

}  // namespace sumlab
