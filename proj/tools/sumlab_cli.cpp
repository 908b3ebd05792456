#include "sumlab/constructions.hpp"
#include "sumlab/energy.hpp"
#include "sumlab/geometry.hpp"
#include "sumlab/harness.hpp"
#include "sumlab/parallel.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace sumlab;
using nlohmann::json;

namespace {

constexpr int kUsage = 2;

struct Global {
  std::string config;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out;
  std::string format = "json";
};

struct PolyArgs {
  std::string g = "0 0 1", p = "0", h = "0 0 1";
  std::string spec_file;

  void add(CLI::App* app) {
    app->add_option("--g", g, "g coefficients, ascending");
    app->add_option("--p", p, "p coefficients, ascending");
    app->add_option("--h", h, "h coefficients, ascending");
    app->add_option("--spec-file", spec_file, "TOML file with a [[spec]] table; overrides --g/--p/--h");
  }
  PolySpec get() const {
    if (spec_file.empty()) return make_spec(g, p, h);
    const SuiteConfig c = load_config(spec_file);
    if (c.specs.empty()) throw std::invalid_argument("spec file has no [[spec]] table: " + spec_file);
    return c.specs.front();
  }
};

// A set from a file, or from a generator spec when the file is absent.
struct SetArg {
  std::string file, gen;

  void add(CLI::App* app, const std::string& name) {
    app->add_option("--" + name, file, "set file for " + name);
    app->add_option("--" + name + "-gen", gen, "generator spec for " + name + ", e.g. ap,size=16");
  }
  FiniteSet get(std::uint64_t seed, const std::string& name) const {
    if (!file.empty()) return read_set_file(file);
    if (gen.empty()) throw std::invalid_argument("--" + name + " or --" + name + "-gen is required");
    GenSpec s = parse_genspec(gen);
    if (gen.find("seed=") == std::string::npos) s.seed = seed;
    return generate(s);
  }
};

json set_json(const FiniteSet& X) {
  json out = json::array();
  for (const Rat& x : X) out.push_back(to_string(x));
  return out;
}

void emit(const Global& g, const json& j, const std::string& csv) {
  if (g.out.empty()) return;
  std::ofstream out(g.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + g.out);
  if (g.format == "csv")
    out << csv;
  else
    out << j.dump(2) << '\n';
}

std::string csv_column(const std::string& header, const FiniteSet& X) {
  std::string s = header + "\n";
  for (const Rat& x : X) s += to_string(x) + "\n";
  return s;
}

std::string default_config_path(const Global& g) {
  if (!g.config.empty()) return g.config;
  if (const char* env = std::getenv("SUMLAB_CONFIG"); env && *env) return env;
  return SUMLAB_DEFAULT_CONFIG;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size() || v == 0) throw std::invalid_argument("bad size list: " + text);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty size list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact experiments on sums, energies and incidences of polynomial images"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--config", g.config, "suite config (default: $SUMLAB_CONFIG, then the shipped default)");
  app.add_option("--seed", g.seed, "seed for every generated set");
  app.add_option("--threads", g.threads, "worker count; 0 = logical cores");
  app.add_option("--out", g.out, "machine-readable output path (a directory for verify)");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  // setops
  auto* setops = app.add_subcommand("setops", "sumset, difference set or product set of set files");
  std::string op;
  std::vector<std::string> inputs;
  setops->add_option("--op", op, "sumset, diffset or productset")->required()->check(CLI::IsMember({"sumset", "diffset", "productset"}));
  setops->add_option("--in", inputs, "one set file (X op X) or two (X op Y)")->required()->expected(1, 2);

  // image
  auto* image_cmd = app.add_subcommand("image", "the image f(A, B)");
  PolyArgs image_poly;
  SetArg image_a, image_b;
  image_poly.add(image_cmd);
  image_a.add(image_cmd, "A");
  image_b.add(image_cmd, "B");

  // energy
  auto* energy_cmd = app.add_subcommand("energy", "energies Q, S_t and R_t with bad-pair counts");
  PolyArgs energy_poly;
  SetArg energy_a, energy_b;
  std::string energy_t = "set_t";
  energy_poly.add(energy_cmd);
  energy_a.add(energy_cmd, "A");
  energy_b.add(energy_cmd, "B");
  energy_cmd->add_option("--t", energy_t, "proximity parameter or set_t");

  // verify
  auto* verify = app.add_subcommand("verify", "run the exact verifier suite of a config");
  std::string suite_name;
  verify->add_option("--suite", suite_name, "expected [suite] name");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "expansion scan over growing sets");
  PolyArgs sweep_poly;
  std::string family = "ap", sizes_text = "32,64,128,256";
  bool two_sets = false;
  sweep_poly.add(sweep);
  sweep->add_option("--family", family, "generator spec prefix");
  sweep->add_option("--sizes", sizes_text, "comma-separated sizes");
  sweep->add_flag("--two-sets", two_sets, "draw B independently (seed + 1)");

  // distances
  auto* distances = app.add_subcommand("distances", "distinct squared distances and the heavy-line experiment");
  std::string points_file, lattice_side;
  distances->add_option("--points", points_file, "point file, one 'x y' per line");
  distances->add_option("--lattice", lattice_side, "use the side x side lattice instead");

  // report
  auto* report = app.add_subcommand("report", "summarize a JSON-lines report file");
  std::string report_in;
  report->add_option("--in", report_in, "reports.jsonl")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  }
  if (g.threads > 0) set_default_threads(g.threads);

  try {
    if (*setops) {
      const FiniteSet X = read_set_file(inputs[0]);
      const FiniteSet Y = inputs.size() > 1 ? read_set_file(inputs[1]) : X;
      const FiniteSet R = op == "sumset" ? sumset(X, Y) : op == "diffset" ? diffset(X, Y) : productset(X, Y);
      std::cout << format_set(R) << "\n";
      emit(g, {{"op", op}, {"size", R.size()}, {"result", set_json(R)}}, csv_column("value", R));
      return 0;
    }

    if (*image_cmd) {
      const PolySpec spec = image_poly.get();
      const FiniteSet A = image_a.get(g.seed, "A"), B = image_b.get(g.seed + 1, "B");
      const FiniteSet F = image(spec, A, B);
      const bool ok = F.size() <= A.size() * B.size();
      std::cout << spec.describe() << "\n|A|=" << A.size() << " |B|=" << B.size() << " |f(A,B)|=" << F.size() << "\n";
      emit(g,
           {{"spec", spec.describe()}, {"A", A.size()}, {"B", B.size()}, {"size", F.size()}, {"image", set_json(F)}},
           csv_column("value", F));
      return ok ? 0 : 1;
    }

    if (*energy_cmd) {
      const PolySpec spec = energy_poly.get();
      const FiniteSet A = energy_a.get(g.seed, "A"), B = energy_b.get(g.seed + 1, "B");
      const EnergyTable Q = energy_Q(spec, A, B);
      Rat t;
      if (energy_t == "set_t")
        t = set_t(A.size(), B.size(), Q.squared_total).t;
      else
        t = parse_rat(energy_t);
      const BadPairOracle oracle(spec);
      const std::uint64_t bad = count_Q_bad(oracle, A, B);
      const StEnergy st = energy_St(oracle, B, t);
      const std::uint64_t rt = energy_Rt(oracle, A, B, t);
      const std::uint64_t img = image(spec, A, B).size();
      const bool cs = Rat(static_cast<unsigned long>(Q.squared_total)) * Rat(static_cast<unsigned long>(img)) >=
                      Rat(static_cast<unsigned long>(A.size() * A.size())) * Rat(static_cast<unsigned long>(B.size() * B.size()));
      std::cout << spec.describe() << "\n|Q|=" << Q.squared_total << " |Q bad|=" << bad << " t=" << to_string(t)
                << " |S_t|=" << st.st << " |R_t|=" << rt << " cauchy-schwarz " << (cs ? "pass" : "FAIL") << "\n";
      json j = {{"spec", spec.describe()}, {"A", A.size()}, {"B", B.size()},  {"image", img},
                {"Q", Q.squared_total},     {"Qbad", bad},       {"t", to_string(t)}, {"St", st.st},
                {"Rt", rt},                 {"cauchySchwarz", cs}};
      std::ostringstream csv;
      csv << "quantity,value\nQ," << Q.squared_total << "\nQbad," << bad << "\nSt," << st.st << "\nRt," << rt << "\n";
      emit(g, j, csv.str());
      return cs ? 0 : 1;
    }

    if (*verify) {
      const std::string path = default_config_path(g);
      SuiteConfig cfg = load_config(path);
      if (!suite_name.empty() && suite_name != cfg.name) {
        std::cerr << "config " << path << " defines suite '" << cfg.name << "', not '" << suite_name << "'\n";
        return kUsage;
      }
      if (app.get_option("--seed")->count() > 0) cfg.seed = g.seed;
      cfg.threads = g.threads;
      const std::filesystem::path dir = g.out.empty() ? std::filesystem::path(".") : std::filesystem::path(g.out);
      std::filesystem::create_directories(dir);
      const auto start = std::chrono::steady_clock::now();
      const auto instances = expand_instances(cfg);
      const auto reports = run_suite(cfg);
      const SuiteSummary s = write_reports(reports, instances, (dir / cfg.jsonl).string(), (dir / cfg.csv).string(),
                                           (dir / cfg.replay_dir).string());
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::cout << "suite " << cfg.name << ": " << s.instances << " instances, " << s.passed << " passed, " << s.failed
                << " failed (" << secs << " s)\n";
      for (const auto& [claim, row] : s.per_claim)
        std::cout << "  " << claim << ": " << row[0] << " pass, " << row[1] << " fail, " << row[2] << " inapplicable\n";
      for (const std::string& f : s.replay_files) std::cout << "replay: " << f << "\n";
      return s.failed == 0 ? 0 : 1;
    }

    if (*sweep) {
      const PolySpec spec = sweep_poly.get();
      const ScanReport r = expansion_scan(spec, family, parse_sizes(sizes_text), g.seed, two_sets);
      std::cout << "n |f(A,B)| |A+A| one-set\n";
      std::ostringstream csv;
      csv << "n,image,sumsetA,sumsetB,one-set,two-sets,one-set-symmetric,equal-sizes\n";
      for (const ScanRow& row : r.rows) {
        std::cout << row.n << " " << row.image << " " << row.sum_a << " " << static_cast<double>(row.bounds.at("one-set")) << "\n";
        csv << row.n << ',' << row.image << ',' << row.sum_a << ',' << row.sum_b;
        for (const char* k : {"one-set", "two-sets", "one-set-symmetric", "equal-sizes"}) csv << ',' << static_cast<double>(row.bounds.at(k));
        csv << '\n';
      }
      std::cout << "slope " << static_cast<double>(r.slope) << "\n";
      emit(g, r.to_json(), csv.str());
      bool ok = true;
      for (const ClaimReport& c : r.claims) ok = ok && !c.failed();
      return ok ? 0 : 1;
    }

    if (*distances) {
      std::vector<Point2> pts;
      if (!lattice_side.empty()) {
        pts = generate_points(parse_genspec("lattice,side=" + lattice_side));
      } else if (!points_file.empty()) {
        pts = read_points_file(points_file).points();
      } else {
        throw std::invalid_argument("--points or --lattice is required");
      }
      const PointConfig P(pts);
      const FiniteSet D = squared_distance_set(P);
      const HeavyLineReport h = heavy_line_experiment(P);
      std::cout << "|P|=" << P.size() << " |Delta(P)|=" << D.size() << "\n";
      bool ok = true;
      for (const ClaimReport& c : h.claims) {
        std::cout << "  " << c.claim << ": " << to_string(c.verdict) << "\n";
        ok = ok && !c.failed();
      }
      emit(g, {{"points", P.size()}, {"distinct", D.size()}, {"distances", set_json(D)}, {"heavyLine", h.to_json()}},
           csv_column("squared_distance", D));
      return ok ? 0 : 1;
    }

    if (*report) {
      std::ifstream in(report_in);
      if (!in) throw std::invalid_argument("cannot open " + report_in);
      std::map<std::string, std::array<std::size_t, 3>> per_claim;
      std::size_t instances = 0, failed = 0;
      std::vector<std::string> failing;
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        ++instances;
        bool bad = false;
        for (const json& c : j.at("claims")) {
          const std::string v = c.at("verdict");
          auto& row = per_claim[c.at("claim").get<std::string>()];
          ++row[v == "pass" ? 0 : v == "fail" ? 1 : 2];
          bad = bad || v == "fail";
        }
        if (bad) {
          ++failed;
          failing.push_back(j.at("key"));
        }
      }
      std::cout << instances << " instances, " << failed << " failed\n";
      json claims = json::object();
      std::ostringstream csv;
      csv << "claim,pass,fail,inapplicable\n";
      for (const auto& [claim, row] : per_claim) {
        std::cout << "  " << claim << ": " << row[0] << " pass, " << row[1] << " fail, " << row[2] << " inapplicable\n";
        claims[claim] = {{"pass", row[0]}, {"fail", row[1]}, {"inapplicable", row[2]}};
        csv << claim << ',' << row[0] << ',' << row[1] << ',' << row[2] << '\n';
      }
      emit(g, {{"instances", instances}, {"failed", failed}, {"failing", failing}, {"claims", claims}}, csv.str());
      return failed == 0 ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
