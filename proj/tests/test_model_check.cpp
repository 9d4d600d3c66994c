#include "doctest.h"
#include "railshield/worldmodel.hpp"
#include "support.hpp"

using namespace railshield;

TEST_CASE("small preset verifies exhaustively") {
  const auto r = bounded_model_check(small_preset(), 1'000'000);
  CHECK(r.verdict == ModelCheckResult::Verdict::Verified);
  CHECK(r.verified());
  CHECK(r.counterexample.empty());
  // Frozen from the first exhaustive run; any change in the reachable state
  // space of the preset shows up here.
  CHECK(r.states_explored == 600);
}

TEST_CASE("controller that ignores signals has a SAF1 counterexample") {
  auto cfg = small_preset();
  cfg.mutate_ignore_signals = true;
  const auto r = bounded_model_check(cfg, 1'000'000);
  REQUIRE(r.verdict == ModelCheckResult::Verdict::Violated);
  REQUIRE(r.violated.has_value());
  CHECK(*r.violated == SafetyId::SAF1);
  REQUIRE_FALSE(r.counterexample.empty());
  CHECK(r.counterexample.back() == "CTRL_MoveForward");
}

TEST_CASE("counterexample is shortest") {
  // Signal 3 at Stop on a route of 5, visible from one unit away, controller
  // ignoring signals: the shortest violating path is three moves with the
  // detection at position 2 in between.
  ScenarioConfig cfg;
  cfg.route_length = 5;
  cfg.visibility = 1;
  cfg.signals = {{0, 3, Aspect::Stop}};
  cfg.known_map = map_from_signals(cfg.signals, 5);
  cfg.mutate_ignore_signals = true;
  const auto r = bounded_model_check(cfg, 10'000);
  REQUIRE(r.verdict == ModelCheckResult::Verdict::Violated);
  CHECK(r.counterexample == std::vector<std::string>{"CTRL_MoveForward", "CTRL_MoveForward", "VIS_DetectCorrectSignal",
                                                    "CTRL_MoveForward"});
}

TEST_CASE("route of length 1 without signals is trivially verified") {
  ScenarioConfig cfg;
  cfg.route_length = 1;
  const auto r = bounded_model_check(cfg, 1000);
  CHECK(r.verified());
  CHECK(r.states_explored <= 8);
}

TEST_CASE("tiny budget is inconclusive, not a failure") {
  const auto r = bounded_model_check(small_preset(), 10);
  CHECK(r.verdict == ModelCheckResult::Verdict::BudgetExceeded);
  CHECK(r.counterexample.empty());
  CHECK(to_string(r.verdict) == "state budget exceeded");
}

TEST_CASE("shield off with perfect perception also verifies") {
  auto cfg = small_preset();
  cfg.shield = false;
  CHECK(bounded_model_check(cfg, 1'000'000).verified());
}

TEST_CASE("derailer without signal protection: mutation leaves SAF2 guarded") {
  // Derailers are known through the interlocking, so ignoring signals must
  // not open a SAF2 path.
  ScenarioConfig cfg;
  cfg.route_length = 10;
  cfg.derailers = {{0, 5, false}};
  cfg.mutate_ignore_signals = true;
  CHECK(bounded_model_check(cfg, 100'000).verified());
}
