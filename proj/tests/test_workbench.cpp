#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "chameleon/conjugacy.hpp"
#include "chameleon/error.hpp"
#include "chameleon/interpolation.hpp"
#include "chameleon/random_maps.hpp"
#include "chameleon/workbench.hpp"
#include "support/oracles.hpp"

using namespace chameleon;
using oracle::R;

namespace {

namespace fs = std::filesystem;

std::string write_temp(const std::string& name, const std::string& body) {
  fs::path p = fs::temp_directory_path() / ("chameleon_wb_" + name);
  std::ofstream(p) << body;
  return p.string();
}

const std::string kEx1Json =
    R"({"base": 2, "lengths": [2, 2, 3, 1, 4, 2, 1, 1, 2, 2, 3, 1, 2, 2, 2, 2]})";
const std::string kEx2Json = R"({"base": 2, "lengths": [2, 2, 1, 1, 1, 1]})";
const std::string kEx4Json = R"({"base": 2, "lengths": [1, 3, 4, 2, 1, 3, 1, 1]})";

int run_cli(const std::string& args) {
  std::string cmd = std::string(CHAMELEON_CLI) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

struct EnvGuard {
  explicit EnvGuard(const char* value) {
    if (value) {
      setenv("CHAMELEON_MAX_DEPTH", value, 1);
    } else {
      unsetenv("CHAMELEON_MAX_DEPTH");
    }
  }
  ~EnvGuard() { unsetenv("CHAMELEON_MAX_DEPTH"); }
};

}  // namespace

TEST_CASE("exit codes") {
  CHECK(exit_code_for(Error(ErrorKind::ParseError, "x")) == 1);
  CHECK(exit_code_for(Error(ErrorKind::NotPL, "x")) == 2);
  CHECK(exit_code_for(Error(ErrorKind::DivergentCycle, "x")) == 2);

  const auto ex1 = write_temp("ex1.json", kEx1Json);
  const auto ex4 = write_temp("ex4.json", kEx4Json);
  const auto bad = write_temp("bad.json", "{\"base\": 2, \"lengths\": [1, 2");
  const auto nonmarkov = write_temp("nonmarkov.json", R"({"base": 2, "lengths": [1, 2]})");
  const auto missing = write_temp("missing.json", R"({"lengths": [1, 1]})");

  CHECK(cmd_partition("validate", ex1, std::nullopt).exit_code == 0);
  CHECK(cmd_partition("sigma", ex1, std::nullopt).exit_code == 0);
  CHECK(cmd_partition("validate", bad, std::nullopt).exit_code == 1);
  CHECK(cmd_partition("validate", missing, std::nullopt).exit_code == 1);
  CHECK(cmd_partition("validate", "/nonexistent/file.json", std::nullopt).exit_code == 1);
  CHECK(cmd_partition("frobnicate", ex1, std::nullopt).exit_code == 1);
  CHECK(cmd_partition("conjugator-eval", ex1, -3).exit_code == 1);
  CHECK(cmd_partition("validate", nonmarkov, std::nullopt).exit_code == 2);
  auto sig4 = cmd_partition("sigma", ex4, std::nullopt);
  CHECK(sig4.exit_code == 2);
  REQUIRE(sig4.error);
  CHECK((*sig4.error)["kind"] == "DivergentFixedPoint");
  CHECK(cmd_partition("pl-criterion", ex1, std::nullopt).exit_code == 0);
  CHECK(cmd_partition("pl-criterion", ex1, std::nullopt).outputs["outcome"] == "NotPL");
}

TEST_CASE("every partition subcommand reports") {
  const auto ex2 = write_temp("ex2.json", kEx2Json);
  for (const char* sub : kPartitionSubcommands) {
    auto r = cmd_partition(sub, ex2, std::nullopt);
    CHECK(r.command == std::string("partition ") + sub);
    CHECK(r.exit_code == (std::string(sub) == "sigma" ? 2 : 0));
  }
  auto eq = cmd_partition("equal-pairs", ex2, std::nullopt);
  CHECK(eq.to_json()["outputs"]["equal_pairs"] == true);
}

TEST_CASE("golden example checks") {
  auto all = cmd_paper_examples({});
  CHECK(all.exit_code == 0);
  CHECK(all.passed);
  CHECK(all.outputs["checks_passed"] == all.outputs["checks_total"]);
  auto some = cmd_paper_examples({2, 5});
  CHECK(some.exit_code == 0);
  CHECK(some.outputs["examples"].size() == 2u);
  CHECK(cmd_paper_examples({9}).exit_code == 1);
  CHECK(cmd_paper_examples({}, "/nonexistent/golden.json").exit_code == 1);

  const auto wrong = write_temp("wrong_golden.json", R"({"examples": [{"id": 1, "name": "x",
      "partition": {"base": 2, "lengths": [2, 2, 3, 1, 4, 2, 1, 1, 2, 2, 3, 1, 2, 2, 2, 2]},
      "checks": [{"check": "stable_level", "cite": "k", "expected": 3}]}]})");
  auto mismatch = cmd_paper_examples({}, wrong);
  CHECK(mismatch.exit_code == 2);
  CHECK_FALSE(mismatch.passed);
}

TEST_CASE("reports are deterministic") {
  const auto ex1 = write_temp("ex1d.json", kEx1Json);
  for (const char* sub : kPartitionSubcommands) {
    CHECK(cmd_partition(sub, ex1, 3).to_json().dump() ==
          cmd_partition(sub, ex1, 3).to_json().dump());
  }
  CHECK(cmd_paper_examples({}).to_json().dump() == cmd_paper_examples({}).to_json().dump());
  CHECK(cmd_roundtrip(7, 5).to_json().dump() == cmd_roundtrip(7, 5).to_json().dump());
  CHECK(cmd_roundtrip(7, 5).to_text() == cmd_roundtrip(7, 5).to_text());
}

TEST_CASE("roundtrip command") {
  auto r = cmd_roundtrip(1, 20);
  CHECK(r.exit_code == 0);
  CHECK(r.outputs["recovered"] == 20);
  CHECK(cmd_roundtrip(1, -1).exit_code == 1);
}

TEST_CASE("serialization round trips") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    PLCircleMap h = random_t21(rng);
    PLCircleMap g = compose(h, compose(PLCircleMap::nu(2), invert(h)));
    CHECK(circle_map_from_json(Json::parse(to_json(g).dump())) == g);
    CHECK(circle_map_from_json(to_json(h)) == h);
  }
  PLLineMap line = interpolate_line(3, {R("0"), R("2/3")}, {R("0"), R("2")});
  CHECK(line_map_from_json(to_json(line)) == line);
  PLLineMap flip = PLLineMap::affine(R("-3"), R("1"));
  CHECK(line_map_from_json(to_json(flip)) == flip);
  CHECK(to_json(flip)["orientation"] == "reversing");

  AffineMarkovPartition P(2, {2, 2, 1, 1, 1, 1});
  CHECK(partition_from_json(to_json(P)) == P);
  CHECK(rational_from_json(to_json(R("-7/12"))) == R("-7/12"));
  CHECK(rational_from_json(Json(5)) == R("5"));

  auto kind = [](const char* text) {
    try {
      circle_map_from_json(Json::parse(text));
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::NotPL;
  };
  CHECK(kind(R"({"space": "line"})") == ErrorKind::ParseError);
  CHECK(kind(R"({"space": "circle", "r": 1})") == ErrorKind::ParseError);
  CHECK(kind(R"({"space": "circle", "r": 1, "degree": 1, "breakpoints": ["x"],
                 "pieces": [{"slope": "1", "intercept": "0"}]})") == ErrorKind::ParseError);
  CHECK_THROWS_AS(rational_from_json(Json(1.5)), Error);
  CHECK_THROWS_AS(partition_from_json(Json::parse(R"({"base": 2, "lengths": [0, 1]})")), Error);
}

TEST_CASE("error records") {
  try {
    sigma(MarkovMap::build(AffineMarkovPartition(2, {1, 1, 3, 1, 2, 1, 3, 1, 2, 2, 1, 3, 2, 1, 1,
                                                     3, 2, 2}))
              .g(),
          R("9/32"));
    FAIL("expected divergence");
  } catch (const Error& e) {
    Json j = error_to_json(e);
    CHECK(j["kind"] == "DivergentCycle");
    CHECK(j["cycle"] == Json::array({"9/32", "21/32"}));
    CHECK(j["cycle_breaks"] == Json::array({-2, 1}));
    CHECK(j["message"].get<std::string>().rfind("DivergentCycle", 0) == std::string::npos);
  }
}

TEST_CASE("CHAMELEON_MAX_DEPTH") {
  {
    EnvGuard env(nullptr);
    CHECK(default_memo_depth() == kDefaultMemoDepth);
  }
  {
    EnvGuard env("3");
    CHECK(default_memo_depth() == 3);
    Conjugator c(MarkovMap::build(AffineMarkovPartition(2, {1, 1})));
    CHECK(c.memo_depth() == 3);
    CHECK(c.h_eval(R("1/8")) == R("1/8"));
    CHECK_THROWS_AS(c.h_eval(R("1/1024")), Error);
  }
  {
    EnvGuard env("deep");
    CHECK_THROWS_AS(default_memo_depth(), Error);
  }
  {
    EnvGuard env("-2");
    CHECK_THROWS_AS(default_memo_depth(), Error);
  }
}

TEST_CASE("command line") {
  const auto ex1 = write_temp("cli_ex1.json", kEx1Json);
  const auto ex4 = write_temp("cli_ex4.json", kEx4Json);
  const auto bad = write_temp("cli_bad.json", "not json");
  CHECK(run_cli("partition validate " + ex1) == 0);
  CHECK(run_cli("partition sigma " + ex1 + " --json") == 0);
  CHECK(run_cli("partition conjugator-eval " + ex1 + " --depth 3") == 0);
  CHECK(run_cli("partition sigma " + ex4) == 2);
  CHECK(run_cli("partition validate " + bad) == 1);
  CHECK(run_cli("partition validate") == 1);
  CHECK(run_cli("partition conjugator-eval " + ex1 + " --depth two") == 1);
  CHECK(run_cli("paper-examples") == 0);
  CHECK(run_cli("paper-examples --ids 1,3 --json") == 0);
  CHECK(run_cli("paper-examples --ids 12") == 1);
  CHECK(run_cli("roundtrip --seed 4 --count 3") == 0);
  CHECK(run_cli("roundtrip --count 3") == 1);
  CHECK(run_cli("bogus") == 1);
  CHECK(run_cli("") == 1);
  CHECK(run_cli("partition validate " + ex1 + " --help") == 0);

  std::string env = "CHAMELEON_MAX_DEPTH=";
  CHECK(run_cli("partition validate " + ex1) == 0);
  int status = std::system((env + "abc " + CHAMELEON_CLI + " partition validate " + ex1 +
                            " > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(status) == 1);
  status = std::system((env + "1 " + CHAMELEON_CLI + " partition conjugator-eval " + ex1 +
                        " --depth 1 > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(status) == 0);
}
