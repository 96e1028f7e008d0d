// Drives the cpg binary through the shell and inspects its files.

#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

const std::string kCli = CPG_CLI_PATH;

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" + kCli + "' " + args +
                          " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::current_path() / "cli_scratch" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void put(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST_CASE("invalid run parameters exit with status 2") {
  const auto dir = scratch("invalid");
  CHECK(run("collab --modes unsocial-optimistic --iterations 0 --seed 1 --out-dir " +
            dir.string()) == 2);
  CHECK(run("adver --modes unsocial-optimistic --ticks 10 --seed 1 --probs 0.3,0.3,0.3 --out-dir " +
            dir.string()) == 2);
  CHECK(run("collab --modes friendly --iterations 5 --seed 1 --out-dir " + dir.string()) == 2);
  CHECK(run("collab --iterations 5 --seed 1 --bogus") == 2);
  CHECK(run("") == 2);
  put(dir / "cfg.json", R"({"game":"adversarial","ticks":5,"seed":1})");
  CHECK(run("collab --config " + (dir / "cfg.json").string() + " --out-dir " + dir.string()) == 2);
  put(dir / "typo.json", R"({"iteratons":5})");
  CHECK(run("collab --config " + (dir / "typo.json").string() + " --out-dir " + dir.string()) == 2);
}

TEST_CASE("a missing seed is a validation error unless CPG_SEED is set") {
  const auto dir = scratch("seed");
  CHECK(run("collab --iterations 5 --out-dir " + dir.string(), "env -u CPG_SEED") == 2);
  CHECK(run("collab --iterations 5 --out-dir " + dir.string(), "env CPG_SEED=12") == 0);
  const auto report = Json::parse(slurp(dir / "collab_report.json"));
  CHECK(report["config"]["seed"] == 12);
  CHECK(run("collab --iterations 5 --out-dir " + dir.string(), "env CPG_SEED=abc") == 2);
}

TEST_CASE("paths on a two-state swap") {
  const auto dir = scratch("swap");
  put(dir / "swap.json", "[[0,1],[1,0]]");
  REQUIRE(run("paths " + (dir / "swap.json").string() + " --out " + (dir / "out.json").string()) == 0);
  const auto doc = Json::parse(slurp(dir / "out.json"));
  REQUIRE(doc["result"]["paths"].size() == 1);
  CHECK(doc["result"]["paths"][0]["states"] == Json::array({0, 1}));
  CHECK(doc["tool"] == "cpg");
}

TEST_CASE("paths rejects a degenerate row and a bad cell") {
  const auto dir = scratch("bad");
  put(dir / "zero.json", "[[0,1,0],[0,0,0],[1,0,0]]");
  CHECK(run("paths " + (dir / "zero.json").string()) != 0);
  put(dir / "cell.csv", "0,1\n1,oops\n");
  CHECK(run("paths " + (dir / "cell.csv").string()) == 2);
}

TEST_CASE("matrix then paths reproduces the published cycle") {
  const auto dir = scratch("matrix");
  REQUIRE(run("matrix --modes unsocial-optimistic --out-dir " + dir.string()) == 0);
  const auto report = Json::parse(slurp(dir / "matrix_report.json"));
  CHECK(report["result"]["cell_diff"].size() == 8);
  CHECK(report["result"]["unreachable_rows"].empty());
  REQUIRE(run("paths " + (dir / "matrix_fixture.csv").string() + " --out " +
              (dir / "paths.json").string()) == 0);
  const auto paths = Json::parse(slurp(dir / "paths.json"));
  REQUIRE(paths["result"]["paths"].size() == 1);
  const auto states = paths["result"]["paths"][0]["states"];
  // Rotation of 3,5,7.
  std::vector<int> v = states.get<std::vector<int>>();
  std::rotate(v.begin(), std::min_element(v.begin(), v.end()), v.end());
  CHECK(v == std::vector<int>{3, 5, 7});
  CHECK(paths["result"]["paths"][0]["labels"].size() == 3);
}

TEST_CASE("reruns are byte-identical") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  for (const auto& d : {a, b}) {
    REQUIRE(run("collab --modes social-optimistic --iterations 300 --seed 5 --replications 3 "
                "--out-dir " + d.string()) == 0);
    REQUIRE(run("adver --modes unsocial-realistic --ticks 500 --seed 5 --replications 2 "
                "--out-dir " + d.string()) == 0);
  }
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    ++files;
    CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
  }
  CHECK(files >= 10);
}

TEST_CASE("CSV outputs carry the provenance line and LF endings") {
  const auto dir = scratch("csv");
  REQUIRE(run("adver --ticks 50 --seed 3 --out-dir " + dir.string()) == 0);
  const auto text = slurp(dir / "adver_trace.csv");
  CHECK(text.rfind("# cpg ", 0) == 0);
  CHECK(text.find("config=") != std::string::npos);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.find("\ntick,state_index,phi_cum,psi_cum,in_predicted_path\n") != std::string::npos);
}

TEST_CASE("compare reads back a collab run") {
  const auto dir = scratch("compare");
  REQUIRE(run("collab --modes unsocial-optimistic --iterations 2000 --seed 9 --out-dir " +
              dir.string()) == 0);
  const auto out = dir / "cmp";
  REQUIRE(run("compare " + (dir / "collab_iterations.csv").string() + " --out-dir " +
              out.string()) == 0);
  const auto doc = Json::parse(slurp(out / "comparison_report.json"));
  CHECK(doc["result"]["predicted_phi_rate"].get<double>() == doctest::Approx(1.0 / 3));
  CHECK(doc["result"]["iterations"] == 2000);
  // Same numbers as the comparison the collab command wrote itself.
  CHECK(slurp(out / "comparison.csv").substr(slurp(out / "comparison.csv").find('\n')) ==
        slurp(dir / "comparison.csv").substr(slurp(dir / "comparison.csv").find('\n')));
  CHECK(run("compare " + (dir / "collab_iterations.csv").string() +
            " --modes social-optimistic --out-dir " + out.string()) == 2);
}

TEST_CASE("predict writes exact rates") {
  const auto dir = scratch("predict");
  REQUIRE(run("predict --modes unsocial-optimistic --out-dir " + dir.string()) == 0);
  const auto doc = Json::parse(slurp(dir / "predict_report.json"));
  CHECK(doc["result"]["rates"]["psi_only"]["num"] == 1);
  CHECK(doc["result"]["rates"]["psi_only"]["den"] == 2);
  CHECK(doc["result"]["rates"]["leaves"].size() == 24);
  CHECK(doc["result"]["published_comparison"]["tag"] == "consistent");
}
