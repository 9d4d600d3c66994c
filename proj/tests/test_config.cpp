#include <fstream>

#include "doctest.h"
#include "railshield/config.hpp"
#include "railshield/errors.hpp"
#include "support.hpp"

using namespace railshield;
using nlohmann::json;

namespace {

std::string error_of(const json& j) {
  try {
    config_from_json(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("default configuration") {
  const auto cfg = default_config();
  CHECK(cfg.route_length == 250);
  REQUIRE(cfg.signals.size() == 4);
  CHECK(cfg.signals[0].position == 60);
  CHECK(cfg.signals[3].position == 240);
  REQUIRE(cfg.derailers.size() == 1);
  CHECK(cfg.derailers[0].position == 200);
  CHECK(cfg.visibility == 10);
  CHECK(cfg.d_fix == 5);
  CHECK(cfg.p_env == 0.25);
  CHECK(cfg.known_map.tolerance == 5);
  CHECK(cfg.known_map.signals.size() == 4);
  CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("empty document yields the defaults") {
  CHECK(config_from_json(json::object()) == default_config());
}

TEST_CASE("small preset is valid and uses perfect perception") {
  const auto cfg = small_preset();
  CHECK_NOTHROW(validate(cfg));
  CHECK(cfg.route_length == 40);
  CHECK(cfg.perception.confusion == ConfusionModel::identity());
}

TEST_CASE("errors name the offending field") {
  json j = json::parse(R"({"signals":[{"position":10},{"position":400}]})");
  CHECK(error_of(j).rfind("signals[1].position:", 0) == 0);

  j = json::parse(R"({"signals":[{"position":30},{"position":20}]})");
  CHECK(error_of(j).find("strictly increasing") != std::string::npos);

  j = json::parse(R"({"route_length":0})");
  CHECK(error_of(j).rfind("route_length:", 0) == 0);

  j = json::parse(R"({"p_env":1.5})");
  CHECK(error_of(j).rfind("p_env:", 0) == 0);

  j = json::parse(R"({"visibility":"ten"})");
  CHECK(error_of(j) == "visibility: expected an integer");

  j = json::parse(R"({"colour":"red"})");
  CHECK(error_of(j) == "colour: unknown field");

  j = json::parse(R"({"signals":[{"position":10,"aspect":"green"}]})");
  CHECK(error_of(j).rfind("signals[0].aspect:", 0) == 0);

  j = json::parse(R"({"cert":"maybe"})");
  CHECK(error_of(j).rfind("cert:", 0) == 0);

  j = json::parse(R"({"derailers":[{"position":60}]})");
  CHECK(error_of(j) == "derailers[0].position: coincides with a signal position");

  j = json::parse(R"({"signals":[{"position":10}],"known_map":{"positions":[{"id":0,"position":11}]}})");
  CHECK(error_of(j).rfind("known_map.positions[0]:", 0) == 0);
}

TEST_CASE("confusion rows must sum to one") {
  json j = json::parse(R"({"perception":{"confusion":[[0.9,0.1,0.0],[0.1,0.8,0.0],[0,0,1]]}})");
  const auto msg = error_of(j);
  CHECK(msg.rfind("perception.confusion[1]:", 0) == 0);
  CHECK(msg.find("row sums to 0.9") != std::string::npos);

  j = json::parse(R"({"perception":{"confusion":[[0.9,0.1],[0,1,0],[0,0,1]]}})");
  CHECK(error_of(j).rfind("perception.confusion[0]:", 0) == 0);

  j = json::parse(R"({"perception":{"confusion":"identity"}})");
  CHECK(config_from_json(j).perception.confusion == ConfusionModel::identity());
}

TEST_CASE("actions parse and refer to existing elements") {
  json j = json::parse(R"({"actions":["move","update","switch:1","toggle:0"]})");
  const auto cfg = config_from_json(j);
  REQUIRE(cfg.actions.size() == 4);
  CHECK(cfg.actions[0].kind == ScriptedAction::Kind::Move);
  CHECK(cfg.actions[1].kind == ScriptedAction::Kind::Update);
  CHECK(cfg.actions[2] == ScriptedAction{ScriptedAction::Kind::SwitchSignal, 1});
  CHECK(cfg.actions[3] == ScriptedAction{ScriptedAction::Kind::ToggleDerailer, 0});

  CHECK(error_of(json::parse(R"({"actions":["switch:9"]})")).rfind("actions[0]:", 0) == 0);
  CHECK(error_of(json::parse(R"({"actions":["move","jump"]})")).rfind("actions[1]:", 0) == 0);
  CHECK(error_of(json::parse(R"({"actions":["switch:1x"]})")).find("bad target") != std::string::npos);
}

TEST_CASE("external perception needs a usable endpoint") {
  json j = json::parse(R"({"perception":{"mode":"external"}})");
  CHECK(error_of(j).rfind("perception.endpoint.port:", 0) == 0);
  j = json::parse(R"({"perception":{"mode":"external","endpoint":{"port":9000}}})");
  CHECK(config_from_json(j).perception.endpoint.port == 9000);
}

TEST_CASE("cv certificate stage needs cv perception") {
  CHECK(error_of(json::parse(R"({"cert_stage":"cv"})")).rfind("cert_stage:", 0) == 0);
  CHECK_NOTHROW(config_from_json(json::parse(R"({"cert_stage":"cv","perception":{"mode":"cv"}})")));
}

TEST_CASE("serialize then load is the identity") {
  auto cfg = fixtures::two_signals_one_derailer();
  cfg.cert = CertMode::NoStop;
  cfg.seed = 0xFFFFFFFFFFFFFFFFULL;
  cfg.obstacles = {90};
  cfg.actions = {{ScriptedAction::Kind::SwitchSignal, 1}, {ScriptedAction::Kind::Move, 0}};
  cfg.perception.mode = PerceptionMode::Script;
  cfg.perception.script = {DetectionClass::StopSignal, DetectionClass::NoSignal};
  cfg.cert_model.accept_true = {0.0, 0.25, 0.75};
  for (const auto& c : {default_config(), small_preset(), cfg}) {
    const auto back = config_from_json(to_json(c));
    CHECK(back == c);
    CHECK(config_hash(back) == config_hash(c));
    CHECK(to_json(back).dump() == to_json(c).dump());
  }
}

TEST_CASE("config hash is stable and sensitive") {
  const auto a = default_config();
  CHECK(config_hash(a).size() == 16);
  CHECK(config_hash(a) == config_hash(default_config()));
  auto b = a;
  b.p_env = 0.3;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("load_config reports file and parse problems") {
  const auto dir = fixtures::temp_dir("config");
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
  {
    std::ofstream(dir / "bad.json") << "{ not json";
  }
  CHECK_THROWS_AS(load_config(dir / "bad.json"), ConfigError);
  {
    std::ofstream(dir / "ok.json") << to_json(small_preset()).dump(2);
  }
  CHECK(load_config(dir / "ok.json") == small_preset());
}

TEST_CASE("shipped configuration files load") {
  for (const char* name : {"default.json", "small_preset.json", "violation_scenario.json"}) {
    CAPTURE(name);
    CHECK_NOTHROW(load_config(std::filesystem::path(RAILSHIELD_CONFIG_DIR) / name));
  }
  CHECK(load_config(std::filesystem::path(RAILSHIELD_CONFIG_DIR) / "default.json") == default_config());
  CHECK(load_config(std::filesystem::path(RAILSHIELD_CONFIG_DIR) / "small_preset.json") == small_preset());
}
