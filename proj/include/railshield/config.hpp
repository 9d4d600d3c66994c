#pragma once

/**
 * @file config.hpp
 * @brief ScenarioConfig: the complete description of one experiment, plus
 *        its JSON schema (load, validate, serialize, hash).
 *
 * The defaults (visibility 10, 25 % env branch) are only defaults; every
 * value can be overridden from the JSON document.
 */

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "railshield/detection.hpp"
#include "railshield/layout.hpp"
#include "railshield/signvision.hpp"

namespace railshield {

enum class CertMode : std::uint8_t { Off, NoStop, On };
enum class CertStage : std::uint8_t { Stochastic, Cv };
enum class PerceptionMode : std::uint8_t { Confusion, Cv, External, Script };

/// Rows: true class, columns: detected class, both in (NoSignal, Stop, Permission) order.
struct ConfusionModel {
  std::array<std::array<double, 3>, 3> rows{};

  double operator()(DetectionClass truth, DetectionClass detected) const {
    return rows[static_cast<int>(truth)][static_cast<int>(detected)];
  }

  static ConfusionModel identity();
  static ConfusionModel defaults();

  bool operator==(const ConfusionModel&) const = default;
};

/// Acceptance probabilities of the stochastic certificate stage, indexed by
/// DetectionClass (the NoSignal slot is unused).
struct CertModel {
  std::array<double, 3> accept_true{0.0, 0.3, 0.9};
  std::array<double, 3> accept_false{0.0, 0.0, 0.0};

  bool operator==(const CertModel&) const = default;
};

struct ExternalEndpoint {
  std::string host = "127.0.0.1";
  int port = 0;
  int timeout_ms = 5000;
  std::string image_dir;  ///< when set, the rendered frame is written here and its path is sent

  bool operator==(const ExternalEndpoint&) const = default;
};

struct CvConfig {
  vision::RenderParams render;
  vision::ClassifierParams classifier;
  vision::CertifierParams certifier;

  bool operator==(const CvConfig&) const = default;
};

struct PerceptionConfig {
  PerceptionMode mode = PerceptionMode::Confusion;
  ConfusionModel confusion = ConfusionModel::defaults();
  CvConfig cv;
  ExternalEndpoint endpoint;
  std::vector<DetectionClass> script;  ///< replayed one per step, NoSignal once exhausted

  bool operator==(const PerceptionConfig&) const = default;
};

/// A scripted phase-3 action; overrides the random env/move branch for one step.
struct ScriptedAction {
  enum class Kind : std::uint8_t { Move, Update, SwitchSignal, ToggleDerailer };
  Kind kind = Kind::Move;
  int target = 0;

  bool operator==(const ScriptedAction&) const = default;
};

struct ScenarioConfig {
  int route_length = 250;
  std::vector<Signal> signals;
  std::vector<Derailer> derailers;
  std::vector<int> obstacles;
  KnownMap known_map;
  int visibility = 10;
  int d_fix = 5;
  double p_env = 0.25;
  bool shield = true;
  CertMode cert = CertMode::Off;
  CertStage cert_stage = CertStage::Stochastic;
  PerceptionConfig perception;
  CertModel cert_model;
  int halt_steps = 100;  ///< H: idle steps before a run is declared stalled
  int max_steps = 10000;
  std::uint64_t seed = 42;
  std::vector<ScriptedAction> actions;
  bool mutate_ignore_signals = false;  ///< test-only: controller ignores signals

  bool operator==(const ScenarioConfig&) const = default;
};

/// Route 250, signals at 60/120/180/240 showing Stop, derailer at 200.
ScenarioConfig default_config();
/// Route 40, signals at 15/30, derailer at 22, identity perception, shield on.
ScenarioConfig small_preset();

/// Known map covering every signal exactly.
KnownMap map_from_signals(const std::vector<Signal>& signals, int tolerance);

/// Throws ConfigError("<field>: <reason>").
void validate(const ScenarioConfig& cfg);

nlohmann::json to_json(const ScenarioConfig& cfg);
/// Parses and validates. Missing fields take their defaults.
ScenarioConfig config_from_json(const nlohmann::json& j);
ScenarioConfig load_config(const std::filesystem::path& path);

/// FNV-1a 64 over the canonical JSON dump, as 16 hex digits.
std::string config_hash(const ScenarioConfig& cfg);

std::string_view to_string(CertMode m);
std::string_view to_string(PerceptionMode m);

}  // namespace railshield
