#include "sumlab/constructions.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sumlab {

namespace {

const std::pair<GenKind, const char*> kKindNames[] = {
    {GenKind::ap, "ap"},         {GenKind::gap, "gap"},         {GenKind::gp, "gp"},
    {GenKind::convex, "convex"}, {GenKind::random, "random"},   {GenKind::lattice, "lattice"},
    {GenKind::perturbed_ap, "perturbed_ap"}};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t"), e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || used != v.size() || v[0] == '-') throw std::invalid_argument("genspec: bad integer for " + key + ": '" + v + "'");
  return x;
}

std::uint64_t cube(std::uint64_t n) { return n * n * n; }

void require_size(const GenSpec& s) {
  if (s.size == 0) throw std::invalid_argument("generate: size must be at least 1");
}

}  // namespace

std::string to_string(GenKind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "?";
}

GenKind parse_gen_kind(const std::string& name) {
  for (const auto& [kind, n] : kKindNames)
    if (name == n) return kind;
  throw std::invalid_argument("unknown set family '" + name + "'");
}

std::string GenSpec::to_string() const {
  std::ostringstream o;
  o << sumlab::to_string(kind) << ",size=" << size << ",seed=" << seed;
  switch (kind) {
    case GenKind::ap: o << ",start=" << start.get_str() << ",step=" << step.get_str(); break;
    case GenKind::perturbed_ap:
      o << ",start=" << start.get_str() << ",step=" << step.get_str() << ",jitter=" << jitter.get_str();
      break;
    case GenKind::gp: o << ",start=" << (start_set ? start : Rat(1)).get_str() << ",ratio=" << ratio.get_str(); break;
    case GenKind::gap: {
      o << ",start=" << start.get_str() << ",dims=";
      for (std::size_t i = 0; i < dims.size(); ++i) o << (i ? "x" : "") << dims[i];
      o << ",steps=";
      for (std::size_t i = 0; i < steps.size(); ++i) o << (i ? "x" : "") << steps[i].get_str();
      break;
    }
    case GenKind::convex: o << ",g=" << format_unipoly(convex_fn); break;
    case GenKind::random: o << ",range=" << effective_range(*this); break;
    case GenKind::lattice: o << ",side=" << side; break;
  }
  return o.str();
}

GenSpec parse_genspec(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.empty() || parts[0].empty()) throw std::invalid_argument("genspec: empty");
  GenSpec s;
  s.kind = parse_gen_kind(parts[0]);
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos) throw std::invalid_argument("genspec: expected key=value, got '" + parts[i] + "'");
    const std::string key = trim(parts[i].substr(0, eq)), v = trim(parts[i].substr(eq + 1));
    if (key == "size") s.size = parse_u64(key, v);
    else if (key == "seed") s.seed = parse_u64(key, v);
    else if (key == "start") { s.start = parse_rat(v); s.start_set = true; }
    else if (key == "step") s.step = parse_rat(v);
    else if (key == "ratio") s.ratio = parse_rat(v);
    else if (key == "g") s.convex_fn = parse_unipoly(v);
    else if (key == "range") s.range = parse_u64(key, v);
    else if (key == "jitter") s.jitter = parse_rat(v);
    else if (key == "side") s.side = parse_u64(key, v);
    else if (key == "dims") {
      s.dims.clear();
      for (const auto& d : split(v, 'x')) s.dims.push_back(parse_u64(key, d));
    } else if (key == "steps") {
      s.steps.clear();
      for (const auto& d : split(v, 'x')) s.steps.push_back(parse_rat(d));
    } else {
      throw std::invalid_argument("genspec: unknown key '" + key + "'");
    }
  }
  if (s.kind == GenKind::gap && s.size == 0) {
    s.size = 1;
    for (std::size_t d : s.dims) s.size *= d;
  }
  if (s.kind == GenKind::lattice && s.size == 0) s.size = s.side * s.side;
  return s;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below: empty range");
  const std::uint64_t limit = -n % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= limit) return x % n;
  }
}

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
  return std::mt19937_64(seq);
}

std::uint64_t effective_range(const GenSpec& spec) { return std::max(spec.range, cube(spec.size)); }

FiniteSet generate(const GenSpec& s) {
  require_size(s);
  const std::size_t n = s.size;
  std::vector<Rat> v;
  v.reserve(n);
  switch (s.kind) {
    case GenKind::ap:
      if (s.step == 0) throw std::invalid_argument("generate: ap step must be nonzero");
      for (std::size_t i = 0; i < n; ++i) v.push_back(s.start + Rat(static_cast<unsigned long>(i)) * s.step);
      break;

    case GenKind::perturbed_ap: {
      if (s.step == 0) throw std::invalid_argument("generate: ap step must be nonzero");
      if (s.jitter < 0 || s.jitter > rat(1, 4)) throw std::invalid_argument("generate: jitter must lie in [0, 1/4]");
      constexpr long kGrain = 1000;  // offsets are multiples of jitter * step / kGrain
      auto rng = seeded_engine(s.seed, 0x7065727475726221ULL ^ n);
      for (std::size_t i = 0; i < n; ++i) {
        const long k = static_cast<long>(uniform_below(rng, 2 * kGrain + 1)) - kGrain;
        v.push_back(s.start + Rat(static_cast<unsigned long>(i)) * s.step + s.jitter * s.step * rat(k, kGrain));
      }
      break;
    }

    case GenKind::gp: {
      const Rat a0 = s.start_set ? s.start : Rat(1);
      if (a0 == 0 || s.ratio == 0 || s.ratio == 1 || s.ratio == -1)
        throw std::invalid_argument("generate: gp needs nonzero start and ratio outside {0, 1, -1}");
      Rat x = a0;
      for (std::size_t i = 0; i < n; ++i, x *= s.ratio) v.push_back(x);
      break;
    }

    case GenKind::convex: {
      for (std::size_t i = 1; i <= n; ++i) v.push_back(s.convex_fn.eval(Rat(static_cast<unsigned long>(i))));
      for (std::size_t i = 2; i < n; ++i)
        if (!(v[i] - v[i - 1] > v[i - 1] - v[i - 2]))
          throw std::invalid_argument("generate: g is not strictly convex on 1..size");
      break;
    }

    case GenKind::random: {
      const std::uint64_t range = effective_range(s);
      auto rng = seeded_engine(s.seed, 0x72616e646f6d2121ULL ^ n);
      std::set<std::uint64_t> picked;
      while (picked.size() < n) picked.insert(uniform_below(rng, range));
      for (std::uint64_t x : picked) v.push_back(Rat(static_cast<unsigned long>(x)));
      break;
    }

    case GenKind::gap: {
      if (s.dims.empty() || s.dims.size() != s.steps.size())
        throw std::invalid_argument("generate: gap needs matching dims and steps");
      std::size_t total = 1;
      for (std::size_t d : s.dims) total *= d;
      if (total != n) throw std::invalid_argument("generate: gap size must equal the product of dims");
      std::vector<std::size_t> idx(s.dims.size(), 0);
      for (std::size_t c = 0; c < total; ++c) {
        Rat x = s.start;
        for (std::size_t r = 0; r < idx.size(); ++r) x += Rat(static_cast<unsigned long>(idx[r])) * s.steps[r];
        v.push_back(x);
        for (std::size_t r = 0; r < idx.size() && ++idx[r] == s.dims[r]; ++r) idx[r] = 0;
      }
      break;
    }

    case GenKind::lattice:
      throw std::invalid_argument("generate: lattice produces points, not a set");
  }
  FiniteSet out = FiniteSet::from_unsorted(std::move(v));
  if (out.size() != n) throw std::invalid_argument("generate: " + s.to_string() + " has repeated elements");
  return out;
}

std::vector<Point2> generate_points(const GenSpec& s) {
  if (s.kind != GenKind::lattice) throw std::invalid_argument("generate_points: kind must be lattice");
  if (s.side == 0) throw std::invalid_argument("generate_points: side must be at least 1");
  std::vector<Point2> pts;
  for (std::size_t i = 0; i < s.side; ++i)
    for (std::size_t j = 0; j < s.side; ++j)
      pts.push_back({Rat(static_cast<unsigned long>(i)), Rat(static_cast<unsigned long>(j))});
  return pts;
}

std::pair<PointConfig, PointConfig> generate_two_line_config(const Rat& s, const GenSpec& A, const GenSpec& B) {
  std::vector<Point2> p1, p2;
  for (const Rat& a : generate(A)) p1.push_back({a, Rat(0)});
  for (const Rat& b : generate(B)) p2.push_back({Rat(s * b), b});
  return {PointConfig(std::move(p1)), PointConfig(std::move(p2))};
}

}  // namespace sumlab
