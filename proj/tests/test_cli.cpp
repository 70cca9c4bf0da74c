#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "collapse/cli.hpp"

using namespace collapse;
namespace fs = std::filesystem;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() : dir(fs::temp_directory_path() / "collapse_cli_test") {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run(std::vector<std::string> args, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("subcommand list") {
  CHECK(cli::subcommands() ==
        std::vector<std::string>{"pointer", "jump", "trajectory", "two-probe", "decoherence", "pressure", "noise-check"});
}

TEST_CASE("reruns with one seed are byte-identical") {
  Sandbox box;
  const std::vector<std::string> base{"pointer", "--seed", "1", "--set", "T=0.5", "--set", "n=2"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", box.path("a.csv")});
  b.insert(b.end(), {"--out", box.path("b.csv")});
  REQUIRE(run(a) == cli::kExitOk);
  REQUIRE(run(b) == cli::kExitOk);
  CHECK(slurp(box.path("a.csv")) == slurp(box.path("b.csv")));
  const auto m = nlohmann::json::parse(slurp(box.path("a.csv.manifest.json")));
  CHECK(m["subcommand"] == "pointer");
  CHECK(m["seed"] == 1);
  CHECK(m["status"] == "ok");
  CHECK(m["config"]["T"] == "0.5");
  CHECK(m.contains("version"));
  CHECK(m.contains("wall_clock_seconds"));
}

TEST_CASE("non-positive time step is a validation error naming the field") {
  Sandbox box;
  std::string err;
  CHECK(run({"pointer", "--set", "dt=0", "--out", box.path("x.csv")}, &err) == cli::kExitValidation);
  CHECK(err.find("dt") != std::string::npos);
  CHECK(run({"trajectory", "--set", "dt=-1", "--out", box.path("y.csv")}, &err) == cli::kExitValidation);
  const auto m = nlohmann::json::parse(slurp(box.path("x.csv.manifest.json")));
  CHECK(m["status"] == "error");
  CHECK(m["exit_code"] == cli::kExitValidation);
}

TEST_CASE("config files and unknown keys") {
  Sandbox box;
  std::ofstream(box.path("run.cfg")) << "# decoherence sweep\nd_min = 1\nd_max = 3\nd_count = 3\n";
  CHECK(run({"decoherence", "--config", box.path("run.cfg"), "--out", box.path("d.csv")}) == cli::kExitOk);
  std::ifstream in(box.path("d.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 4);
  CHECK(run({"decoherence", "--set", "bogus=1", "--out", box.path("e.csv")}) == cli::kExitValidation);
}

TEST_CASE("usage errors") {
  CHECK(run({}) == cli::kExitUsage);
  CHECK(run({"teleport"}) == cli::kExitUsage);
  CHECK(run({"pointer", "--no-such-flag"}) == cli::kExitUsage);
  CHECK(run({"--help"}) == cli::kExitOk);
}

TEST_CASE("regime errors exit with their own code") {
  Sandbox box;
  // Far too few pairs for a meaningful coupling fit.
  CHECK(run({"two-probe", "--set", "pairs=20", "--set", "T=0.5", "--out", box.path("t.csv")}) == cli::kExitRegime);
}

TEST_CASE("json lines output") {
  Sandbox box;
  REQUIRE(run({"pressure", "--format", "jsonl", "--set", "duration=10000", "--out", box.path("p.jsonl")}) ==
          cli::kExitOk);
  std::ifstream in(box.path("p.jsonl"));
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  const auto h = nlohmann::json::parse(header);
  const auto r = nlohmann::json::parse(row);
  CHECK(h["columns"][0]["name"] == "pressure");
  CHECK(r["n_collisions"].get<long long>() > 1000);
}

TEST_CASE("check mode records criteria in the manifest") {
  Sandbox box;
  std::ostringstream out, err;
  const int code = cli::run({"decoherence", "--check", "--check-scale", "0.25", "--out", box.path("c.csv")}, out, err);
  const auto m = nlohmann::json::parse(slurp(box.path("c.csv.manifest.json")));
  REQUIRE(m["checks"].size() == 1);
  CHECK(m["checks"][0]["criterion"] == 6);
  CHECK(code == (m["checks"][0]["pass"].get<bool>() ? cli::kExitOk : cli::kExitCheckFailed));
  CHECK(out.str().find("[6]") != std::string::npos);
}
