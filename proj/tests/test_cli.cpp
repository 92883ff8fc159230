#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = GOCCLAB_CLI_PATH;
const std::string kProtocolDir = GOCCLAB_PROTOCOL_DIR;

struct RunResult {
  int exit_code;
  std::string output_file;
};

fs::path temp_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "gocclab-cli-test";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const int rc = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string run_to_file(const std::string& args, const std::string& name) {
  const fs::path out = temp_dir() / name;
  REQUIRE(run(args + " --out " + out.string()) == 0);
  return slurp(out);
}

}  // namespace

TEST_CASE("sweep output is byte-identical across reruns and finds the gap peak") {
  const std::string a = run_to_file("sweep-coherent --alpha-min 0 --alpha-max 2 --steps 201",
                                    "sweep_a.csv");
  const std::string b = run_to_file("sweep-coherent --alpha-min 0 --alpha-max 2 --steps 201",
                                    "sweep_b.csv");
  CHECK(a == b);
  CHECK(a.find("alpha,half_trace,half_gocc,gap") != std::string::npos);
  const auto pos = a.find("# argmax: alpha=");
  REQUIRE(pos != std::string::npos);
  const double argmax = std::stod(a.substr(pos + 16));
  CHECK(argmax >= 0.40);
  CHECK(argmax <= 0.50);
}

TEST_CASE("chernoff JSON replays byte-identically for a fixed seed") {
  const std::string args = "chernoff --alpha 0.5 --mc-samples 30000 --seed 11";
  CHECK(run_to_file(args, "ch_a.json") == run_to_file(args, "ch_b.json"));
  // A different seed changes the MC field.
  CHECK(run_to_file(args, "ch_c.json") !=
        run_to_file("chernoff --alpha 0.5 --mc-samples 30000 --seed 12", "ch_d.json"));
}

TEST_CASE("protocol subcommand runs the shipped homodyne protocol") {
  const std::string args = "protocol --file " + kProtocolDir +
                           "/homodyne_sign.json --state pm:0.45 --trials 20000 --seed 3";
  const std::string a = run_to_file(args, "prot_a.json");
  CHECK(a == run_to_file(args, "prot_b.json"));
  CHECK(a.find("\"p_err\"") != std::string::npos);
}

TEST_CASE("hide subcommand is deterministic") {
  const std::string args =
      "hide --m 2 --seeds 4,5 --mc-samples 10000 --bias-trials 1000";
  CHECK(run_to_file(args, "hide_a.json") == run_to_file(args, "hide_b.json"));
}

TEST_CASE("bounds subcommand is deterministic") {
  const std::string args = "bounds --m 2 --e-bar 1 --t 1.4901";
  const std::string a = run_to_file(args, "bounds_a.json");
  CHECK(a == run_to_file(args, "bounds_b.json"));
  CHECK(a.find("\"c_star\"") != std::string::npos);
}

TEST_CASE("bad arguments exit with code 2") {
  CHECK(run("no-such-subcommand") == 2);
  CHECK(run("sweep-coherent --alpha-min 2 --alpha-max 1") == 2);
  CHECK(run("sweep-coherent --steps nope") == 2);
  CHECK(run("hide --m 2 --seeds 1 --mc-samples 10") == 2);
}

TEST_CASE("malformed protocol files exit with code 3") {
  const fs::path bad = temp_dir() / "bad.json";
  std::ofstream(bad) << "{ \"modes\": 1, \"rounds\": [ { } ] }";
  CHECK(run("protocol --file " + bad.string()) == 3);
  const fs::path syntax = temp_dir() / "syntax.json";
  std::ofstream(syntax) << "{ not json";
  CHECK(run("protocol --file " + syntax.string()) == 3);
  CHECK(run("protocol --file " + (temp_dir() / "missing.json").string()) == 3);
}

TEST_CASE("numeric guards exit with code 4") {
  // Auto-L at m = 8 exceeds the exact trace-distance feasibility limit.
  CHECK(run("hide --m 8 --seeds 1 --mc-samples 10000 --bias-trials 100") == 4);
  // Empty capacity window.
  CHECK(run("hide --m 4 --delta 0.2 --seeds 1") == 4);
}
