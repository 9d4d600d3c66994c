#include <sys/wait.h>

#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "support.hpp"

namespace {

struct CliResult {
  int code = -1;
  std::string out;  ///< stdout and stderr interleaved
};

CliResult cli(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + " '" RAILSHIELD_CLI "' " + args + " 2>&1";
  CliResult r;
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string config(const char* name) { return "'" + (std::filesystem::path(RAILSHIELD_CONFIG_DIR) / name).string() + "'"; }

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("cli: simulate prints a summary and exits 0 when safe") {
  const auto r = cli("simulate --config " + config("small_preset.json") + " --seed 3");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "seed 3\n"));
  CHECK(contains(r.out, "safe yes"));
}

TEST_CASE("cli: configuration problems exit 1") {
  auto r = cli("simulate --config /nonexistent/cfg.json");
  CHECK(r.code == 1);
  CHECK(contains(r.out, "config error"));

  const auto dir = fixtures::temp_dir("cli_cfg");
  std::ofstream(dir / "bad.json") << R"({"signals":[{"position":999}]})";
  r = cli("simulate --config '" + (dir / "bad.json").string() + "'");
  CHECK(r.code == 1);
  CHECK(contains(r.out, "signals[0].position"));

  r = cli("montecarlo --runs 0");
  CHECK(r.code == 1);
  r = cli("simulate --seed banana");
  CHECK(r.code == 1);
}

TEST_CASE("cli: a violation exits 2 and replays cleanly") {
  const auto dir = fixtures::temp_dir("cli_violation");
  const auto trace = (dir / "v.jsonl").string();
  auto r = cli("simulate --config " + config("violation_scenario.json") + " --trace '" + trace + "'");
  CHECK(r.code == 2);
  CHECK(contains(r.out, "SAF1"));
  CHECK(contains(r.out, "safe no"));

  r = cli("replay --trace '" + trace + "'");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "replay ok"));
  CHECK(contains(r.out, "independent re-check: SAF1"));
}

TEST_CASE("cli: replay flags a tampered trace") {
  const auto dir = fixtures::temp_dir("cli_tamper");
  const auto trace = dir / "t.jsonl";
  REQUIRE(cli("simulate --seed 5 --trace '" + trace.string() + "'").code == 0);
  std::string text = fixtures::slurp(trace);
  const auto at = text.find("\"pos\":1,");
  REQUIRE(at != std::string::npos);
  text.replace(at, 8, "\"pos\":2,");
  std::ofstream(trace, std::ios::binary) << text;
  const auto r = cli("replay --trace '" + trace.string() + "'");
  CHECK(r.code == 2);
  CHECK(contains(r.out, "at step"));

  std::ofstream(dir / "junk.jsonl") << "hello\n";
  CHECK(cli("replay --trace '" + (dir / "junk.jsonl").string() + "'").code == 1);
}

TEST_CASE("cli: seed from the environment, overridden by --seed") {
  auto r = cli("simulate", "RAILSHIELD_SEED=77");
  CHECK(contains(r.out, "seed 77\n"));
  r = cli("simulate --seed 5", "RAILSHIELD_SEED=77");
  CHECK(contains(r.out, "seed 5\n"));
}

TEST_CASE("cli: check verdicts map onto exit codes") {
  auto r = cli("check --preset small");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "verdict verified"));
  CHECK(contains(r.out, "states explored 600"));

  r = cli("check --preset small --mutate-ignore-signals");
  CHECK(r.code == 2);
  CHECK(contains(r.out, "violated SAF1"));
  CHECK(contains(r.out, "1. "));

  r = cli("check --preset small --max-states 10");
  CHECK(r.code == 3);
  CHECK(contains(r.out, "inconclusive"));

  CHECK(cli("check --preset huge").code == 1);
}

TEST_CASE("cli: montecarlo matrix prints a table") {
  const auto r = cli("montecarlo --matrix --runs 5 --base-seed 1");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "Safe"));
}

TEST_CASE("cli: render-sign and certify-sign round trip") {
  const auto dir = fixtures::temp_dir("cli_sign");
  const auto pgm = (dir / "sh0.pgm").string();
  REQUIRE(cli("render-sign --kind sh0 --seed 1 --noise 0 --out '" + pgm + "'").code == 0);
  CHECK(fixtures::slurp(pgm).rfind("P2\n64 64\n255\n", 0) == 0);

  auto r = cli("certify-sign --image '" + pgm + "' --claimed stop");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "weak classifier: stop"));
  CHECK(contains(r.out, "certificate for stop: accepted"));

  r = cli("certify-sign --image '" + pgm + "' --claimed permission");
  CHECK(r.code == 2);
  CHECK(contains(r.out, "rejected"));

  std::ofstream(dir / "broken.pgm") << "P2\n2 2\n255\n1 2 3\n";
  r = cli("certify-sign --image '" + (dir / "broken.pgm").string() + "' --claimed stop");
  CHECK(r.code == 1);
  CHECK(contains(r.out, "unexpected end of data"));

  CHECK(cli("render-sign --kind sh9").code == 1);
}

TEST_CASE("cli: animate lists events, refuses bad choices, and switching twice restores the aspect") {
  const auto dir = fixtures::temp_dir("cli_animate");
  const auto script = dir / "in.txt";
  std::ofstream(script) << "ENV_SwitchSignal(0)\nteleport\nENV_SwitchSignal(0)\nq\n";
  const auto r = cli("animate < '" + script.string() + "'");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "CTRL_MoveForward"));
  CHECK(contains(r.out, "refused: \"teleport\" is not an enabled event"));
  const auto first = r.out.find("applied ENV_SwitchSignal(0)");
  const auto last = r.out.rfind("applied ENV_SwitchSignal(0)");
  REQUIRE(first != std::string::npos);
  REQUIRE(first != last);
  CHECK(contains(r.out.substr(first, last - first), "#0@15=permission"));
  CHECK(contains(r.out.substr(last), "#0@15=stop"));
}
