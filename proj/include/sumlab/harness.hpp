#pragma once

#include "sumlab/constructions.hpp"
#include "sumlab/polynomial.hpp"
#include "sumlab/report.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sumlab {

// ---- choosing t -------------------------------------------------------------

struct TChoice {
  Rat t = 1;
  Rat unclamped = 1;
  Rat C = 4;
  bool above_one = false;    // |Q| = O(|A||B|) regime
  bool below_floor = false;  // raised to max(1/|A|, 1/|B|)
};

// t = C |A||B| / |Q| clamped to [max(1/|A|, 1/|B|), 1]. Throws std::invalid_argument
// when |Q| or a cardinality is 0.
TChoice set_t(std::uint64_t nA, std::uint64_t nB, std::uint64_t q, const Rat& C = 4);

// ---- bound formulas -------------------------------------------------------

// c + eps * epsilon
struct Exponent {
  Rat c = 0, eps = 0;
  bool operator==(const Exponent& o) const { return c == o.c && eps == o.eps; }
};

enum Card { kA = 0, kB = 1, kAA = 2, kBB = 3 };

struct BoundTerm {
  std::array<Exponent, 4> e;  // indexed by Card
};

struct BoundFormula {
  std::string name;
  std::string variables;  // what the four cardinalities stand for
  std::vector<BoundTerm> terms;
};

struct Cards {
  std::uint64_t a = 1, b = 1, aa = 1, bb = 1;
};

// one-set, two-sets, one-set-symmetric, equal-sizes, distances-one-set, distances-two-sets.
const std::vector<BoundFormula>& bound_catalog();
// Throws std::invalid_argument for an unknown name.
const BoundFormula& find_bound(const std::string& name);

long double eval_term(const BoundTerm& term, const Cards& cards, const Rat& eps = 0);
// Minimum over the terms. Throws std::invalid_argument when a cardinality is 0.
long double eval_bound(const BoundFormula& f, const Cards& cards, const Rat& eps = 0);

// Total exponent of n in a term once each cardinality is replaced by n^powers[i].
Exponent collapsed_exponent(const BoundTerm& term, const std::array<Rat, 4>& powers);

// ---- suite ------------------------------------------------------------------

// Every verifier run_instance knows, in execution order.
const std::vector<std::string>& verifier_names();
std::map<std::string, std::uint64_t> default_size_caps();

struct SuiteSettings {
  std::vector<std::string> verifiers = verifier_names();
  // verifier -> largest max(|A|, |B|) it runs on; absent means no cap
  std::map<std::string, std::uint64_t> max_size = default_size_caps();
  Rat t_constant = 4;
  Rat eps = 0, eta = 0;
  Rat prox_constant = rat(1, 1024);
  std::size_t levels = 2;  // heaviest level sets feeding the monotone-set claims

  nlohmann::json to_json() const;
  static SuiteSettings from_json(const nlohmann::json& j);
};

// One unit of work. kind "energy": spec on A x B at one t policy. kind
// "geometry": set-only chains on A. kind "points": heavy-line experiment on a
// lattice (`side`) or on a two-line configuration built from A and B.
struct Instance {
  std::string kind = "energy";
  GenSpec a, b;
  PolySpec spec;
  std::string t_policy = "set_t";  // "set_t" or a rational literal
  std::size_t side = 0;
  Rat slope = 0;  // points kind without a lattice: P1 on y = 0, P2 on x = slope * y
  SuiteSettings settings;

  std::string key() const;
  nlohmann::json to_json() const;
  static Instance from_json(const nlohmann::json& j);
};

struct InstanceReport {
  std::string key;
  nlohmann::json instance;
  nlohmann::json measured = nlohmann::json::object();
  nlohmann::json diagnostics = nlohmann::json::object();
  std::vector<ClaimReport> claims;

  std::size_t count(Verdict v) const;
  bool failed() const { return count(Verdict::fail) > 0; }
  nlohmann::json to_json() const;
};

InstanceReport run_instance(const Instance& inst);

struct SuiteConfig {
  std::string name = "default";
  std::uint64_t seed = 0;
  std::vector<std::string> families;  // genspec prefixes, e.g. "ap" or "gp,ratio=3"
  std::vector<std::size_t> sizes;
  std::vector<PolySpec> specs;
  std::vector<std::string> t_values{"set_t"};
  std::vector<std::size_t> geometry_sizes;
  std::vector<std::size_t> lattice_sides;
  std::vector<Rat> line_slopes;
  SuiteSettings settings;
  unsigned threads = 0;
  std::string jsonl = "reports.jsonl", csv = "summary.csv", replay_dir = "replay";
};

// Reads the [suite], [[spec]], [verifiers] and [output] tables. Throws
// std::invalid_argument with the offending key on malformed input.
SuiteConfig parse_config(const std::string& toml_text);
SuiteConfig load_config(const std::string& path);

// Instances in a fixed order: energy (family, size, spec, t), geometry, points.
std::vector<Instance> expand_instances(const SuiteConfig& cfg);

// Runs every instance on a pool of cfg.threads workers; reports keep the
// expand_instances order.
std::vector<InstanceReport> run_suite(const SuiteConfig& cfg);

struct SuiteSummary {
  std::size_t instances = 0, passed = 0, failed = 0, inapplicable = 0;
  std::map<std::string, std::array<std::size_t, 3>> per_claim;  // pass, fail, inapplicable
  std::vector<std::string> replay_files;
};

// Writes reports as JSON lines and a CSV summary, plus one replay file per
// failing instance. Paths are used as given.
SuiteSummary write_reports(const std::vector<InstanceReport>& reports, const std::vector<Instance>& instances,
                           const std::string& jsonl_path, const std::string& csv_path, const std::string& replay_dir);
SuiteSummary summarize(const std::vector<InstanceReport>& reports);

// Re-runs the instance stored in a replay file.
InstanceReport replay(const std::string& path);

// ---- expansion scan ----------------------------------------------------------

struct ScanRow {
  std::uint64_t n = 0, image = 0, sum_a = 0, sum_b = 0;
  std::map<std::string, long double> bounds;
};

struct ScanReport {
  std::string spec, family;
  std::vector<ScanRow> rows;
  long double slope = 0;  // least-squares slope of log|f(A,B)| against log n
  std::vector<ClaimReport> claims;
  nlohmann::json to_json() const;
};

// B = A unless `two_sets`, in which case B uses seed + 1.
ScanReport expansion_scan(const PolySpec& spec, const std::string& family, const std::vector<std::size_t>& sizes,
                          std::uint64_t seed = 0, bool two_sets = false, const Rat& eps = 0);

long double loglog_slope(const std::vector<std::uint64_t>& xs, const std::vector<std::uint64_t>& ys);

}  // namespace sumlab
