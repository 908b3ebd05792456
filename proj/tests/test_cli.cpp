#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "sumlab_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

struct Run {
  int code;
  std::string out;
};

Run cli(const std::string& args, const std::string& env = "") {
  const fs::path out = workdir() / "stdout.txt";
  const std::string cmd = env + " \"" SUMLAB_CLI_PATH "\" " + args + " > \"" + out.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

std::string path(const std::string& name) { return "\"" + (workdir() / name).string() + "\""; }

const char* kSuite = R"(
[suite]
name = "tiny"
seed = 1
families = ["ap", "random"]
sizes = [6, 9]
geometry_sizes = [4]
lattice_sides = [4]

[[spec]]
name = "x^2+y^2"
g = "0 0 1"
h = "0 0 1"

[output]
jsonl = "r.jsonl"
csv = "r.csv"
replay_dir = "replay"
)";

}  // namespace

TEST_CASE("setops") {
  put(workdir() / "A.set", "1\n2\n4\n");
  put(workdir() / "B.set", "# two elements\n1/2\n-3\n");
  Run r = cli("setops --op sumset --in " + path("A.set") + " --out " + path("s.json"));
  CHECK(r.code == 0);
  CHECK(r.out.find("{2,3,4,5,6,8}") != std::string::npos);
  json j = json::parse(slurp(workdir() / "s.json"));
  CHECK(j.at("result") == json({"2", "3", "4", "5", "6", "8"}));

  r = cli("setops --op productset --in " + path("A.set") + " " + path("B.set") + " --format csv --out " + path("p.csv"));
  CHECK(r.code == 0);
  CHECK(slurp(workdir() / "p.csv") == "value\n-12\n-6\n-3\n1/2\n1\n2\n");

  CHECK(cli("setops --op median --in " + path("A.set")).code == 2);
  CHECK(cli("setops --op sumset --in " + path("missing.set")).code == 2);
}

TEST_CASE("image and energy") {
  put(workdir() / "C.set", "0\n1\n2\n");
  Run r = cli("image --g \"0 0 1\" --p \"0\" --h \"0 0 1\" --A " + path("C.set") + " --B " + path("C.set") + " --out " +
              path("i.json"));
  CHECK(r.code == 0);
  json j = json::parse(slurp(workdir() / "i.json"));
  CHECK(j.at("size") == 6);
  CHECK(j.at("image") == json({"0", "1", "2", "4", "5", "8"}));

  // a spec file overrides the flags
  put(workdir() / "cube.toml", "[[spec]]\ng = \"0 0 0 1\"\nh = \"0 0 0 1\"\n");
  r = cli("image --g \"0 0 1\" --spec-file " + path("cube.toml") + " --A " + path("C.set") + " --B " + path("C.set") +
          " --out " + path("i3.json"));
  CHECK(r.code == 0);
  CHECK(json::parse(slurp(workdir() / "i3.json")).at("image") == json({"0", "1", "2", "8", "9", "16"}));

  r = cli("energy --A-gen ap,size=6 --B-gen ap,size=6 --t 1/2 --out " + path("e.json"));
  CHECK(r.code == 0);
  j = json::parse(slurp(workdir() / "e.json"));
  CHECK(j.at("t") == "1/2");
  CHECK(j.at("cauchySchwarz") == true);
  CHECK(j.at("Q").get<std::uint64_t>() * j.at("image").get<std::uint64_t>() >= 6u * 6 * 6 * 6);
  CHECK(j.at("Qbad").get<std::uint64_t>() <= j.at("Q").get<std::uint64_t>());

  // --seed reaches generated sets, wherever the flag sits
  cli("--seed 7 image --A-gen random,size=5 --B-gen random,size=5 --out " + path("g1.json"));
  cli("image --A-gen random,size=5 --B-gen random,size=5 --seed 7 --out " + path("g2.json"));
  cli("image --A-gen random,size=5 --B-gen random,size=5 --seed 8 --out " + path("g3.json"));
  CHECK(slurp(workdir() / "g1.json") == slurp(workdir() / "g2.json"));
  CHECK(slurp(workdir() / "g1.json") != slurp(workdir() / "g3.json"));
  CHECK(cli("energy --A-gen ap,size=4").code == 2);  // B missing
}

TEST_CASE("verify writes identical reports at any thread count") {
  put(workdir() / "tiny.toml", kSuite);
  Run one = cli("verify --config " + path("tiny.toml") + " --threads 1 --out " + path("v1"));
  Run two = cli("verify --suite tiny --config " + path("tiny.toml") + " --threads 3 --out " + path("v2"));
  CHECK(one.code == 0);
  CHECK(two.code == 0);
  CHECK(one.out.find("0 failed") != std::string::npos);
  const std::string a = slurp(workdir() / "v1" / "r.jsonl"), b = slurp(workdir() / "v2" / "r.jsonl");
  CHECK(!a.empty());
  CHECK(a == b);
  CHECK(slurp(workdir() / "v1" / "r.csv") == slurp(workdir() / "v2" / "r.csv"));
  std::istringstream lines(a);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    json j = json::parse(line);
    CHECK(j.at("summary").at("fail") == 0);
    ++n;
  }
  CHECK(n == 7);

  CHECK(cli("verify --suite other --config " + path("tiny.toml")).code == 2);
  // the environment variable supplies the config when --config is absent
  Run env = cli("verify --out " + path("v3"), "SUMLAB_CONFIG=" + path("tiny.toml"));
  CHECK(env.code == 0);
  CHECK(slurp(workdir() / "v3" / "r.jsonl") == a);

  Run report = cli("report --in " + path("v1/r.jsonl") + " --format csv --out " + path("rep.csv"));
  CHECK(report.code == 0);
  const std::string csv = slurp(workdir() / "rep.csv");
  CHECK(csv.rfind("claim,pass,fail,inapplicable\n", 0) == 0);
  CHECK(csv.find("\ncauchy-schwarz,4,0,0\n") != std::string::npos);
}

TEST_CASE("verify failure exits 1 with a replay file") {
  std::string text = kSuite;
  text += "\n[verifiers]\nenabled = [\"prox-lower\"]\nprox_constant = 4\n";
  text.replace(text.find("[suite]\n"), 8, "[suite]\nt_values = [\"1/2\"]\n");
  put(workdir() / "bad.toml", text);
  Run r = cli("verify --config " + path("bad.toml") + " --out " + path("vb"));
  CHECK(r.code == 1);
  const auto at = r.out.find("replay: ");
  REQUIRE(at != std::string::npos);
  const std::string file = r.out.substr(at + 8, r.out.find('\n', at) - at - 8);
  CHECK(fs::exists(file));
  json j = json::parse(slurp(file));
  CHECK(j.at("instance").at("settings").at("proxConstant") == "4");

  Run rep = cli("report --in " + path("vb/r.jsonl"));
  CHECK(rep.code == 1);
}

TEST_CASE("sweep and distances") {
  Run r = cli("sweep --g \"0 0 1\" --h \"0 0 1\" --family ap --sizes 8,16,32 --out " + path("sw.json"));
  CHECK(r.code == 0);
  json j = json::parse(slurp(workdir() / "sw.json"));
  REQUIRE(j.at("rows").size() == 3);
  CHECK(j.at("rows")[0].at("n") == 8);
  CHECK(j.at("monotone") == true);
  CHECK(j.at("slope").get<double>() > 1.0);
  r = cli("sweep --sizes 8,16 --format csv --out " + path("sw.csv"));
  CHECK(r.code == 0);
  CHECK(slurp(workdir() / "sw.csv").rfind("n,image,sumsetA,sumsetB,one-set,two-sets,one-set-symmetric,equal-sizes\n8,", 0) == 0);
  CHECK(cli("sweep --sizes 8,x").code == 2);

  put(workdir() / "pts.txt", "0 0\n1 0\n2 0\n0 1\n# comment\n1/2 3\n");
  r = cli("distances --points " + path("pts.txt") + " --out " + path("d.json"));
  CHECK(r.code == 0);
  j = json::parse(slurp(workdir() / "d.json"));
  CHECK(j.at("points") == 5);
  CHECK(j.at("distances")[0] == "0");
  CHECK(j.at("heavyLine").is_object());
  r = cli("distances --lattice 4 --out " + path("l.json"));
  CHECK(r.code == 0);
  CHECK(json::parse(slurp(workdir() / "l.json")).at("points") == 16);
  CHECK(cli("distances").code == 2);
}

TEST_CASE("usage errors exit 2") {
  CHECK(cli("").code == 2);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("image --format xml").code == 2);
  Run help = cli("--help");
  CHECK(help.code == 0);
  CHECK(help.out.find("verify") != std::string::npos);
}
