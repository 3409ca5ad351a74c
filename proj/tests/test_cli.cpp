#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "foliate/io.hpp"

using namespace foliate;
namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "foliate_test_cli";

int run(const std::string& args) {
  const std::string cmd = std::string(FOLIATE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string out(const std::string& name) { return (kDir / name).string(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json manifest(const std::string& name) {
  auto m = read_json(kDir / name / "manifest.json");
  m.erase("timestamp");
  return m;
}

}  // namespace

TEST_CASE("generate and validate") {
  fs::remove_all(kDir);
  REQUIRE(run("generate --template horizontal-t3 --grid 9 --leaves 9 --out " + out("h")) == 0);
  CHECK(run("validate --scene " + out("h") + "/scene.json --out " + out("hv")) == 0);
  CHECK(manifest("hv")["exit_code"] == 0);

  REQUIRE(run("generate --template split-t3 --grid 9 --leaves 9 --out " + out("s")) == 0);
  CHECK(run("validate --scene " + out("s") + "/scene.json --out " + out("sv")) == 2);
  const auto m = manifest("sv");
  CHECK(m["exit_code"] == 2);
  bool failed = false;
  for (const auto& c : m["checks"]) failed = failed || !c["pass"].get<bool>();
  CHECK(failed);
}

TEST_CASE("bad input exits with 3") {
  CHECK(run("validate --scene " + out("missing.json") + " --out " + out("e1")) == 3);
  CHECK(manifest("e1")["error"]["stage"] == "input");
  fs::create_directories(kDir);
  std::ofstream(kDir / "garbage.json") << "[1, 2";
  CHECK(run("validate --scene " + out("garbage.json") + " --out " + out("e2")) == 3);
  CHECK(run("smooth --no-such-flag") == 3);
  CHECK(run("generate --template klein-bottle --out " + out("e3")) == 3);
}

TEST_CASE("runs are deterministic apart from the timestamp") {
  for (const char* name : {"t1", "t2"})
    REQUIRE(run("tischler --form 1,1.4142135623730951 --epsilon 0.001 --out " + out(name)) == 0);
  CHECK(manifest("t1") == manifest("t2"));
  CHECK(slurp(kDir / "t1" / "convergents.csv") == slurp(kDir / "t2" / "convergents.csv"));
  CHECK(read_json(kDir / "t1" / "manifest.json").contains("timestamp"));

  for (const char* name : {"g1", "g2"})
    REQUIRE(run("generate --template sheared-t3 --shear 0.3 --grid 9 --leaves 9 --with-measure --seed 7 --out " +
                out(name)) == 0);
  CHECK(slurp(kDir / "g1" / "scene.json") == slurp(kDir / "g2" / "scene.json"));
}

TEST_CASE("measure on a generated scene") {
  REQUIRE(run("generate --template horizontal-t3 --grid 9 --leaves 17 --with-measure --out " + out("m")) == 0);
  CHECK(run("measure --scene " + out("m") + "/scene.json --out " + out("mr")) == 0);
  CHECK(fs::exists(kDir / "mr" / "measured.json"));
  CHECK(fs::exists(kDir / "mr" / "cumulative.csv"));
}
