#pragma once

/**
 * @file perception.hpp
 * @brief Ground truth extraction and the detection sources feeding the loop.
 */

#include <memory>
#include <optional>
#include <string>

#include "railshield/config.hpp"
#include "railshield/detection.hpp"
#include "railshield/rng.hpp"
#include "railshield/signvision.hpp"
#include "railshield/worldmodel.hpp"

namespace railshield {

struct GroundTruth {
  DetectionClass true_class = DetectionClass::NoSignal;
  std::optional<int> visible_signal;  ///< signal id
};

GroundTruth ground_truth(const WorldState& state, const ScenarioConfig& cfg);

/// Inverse-CDF over (NoSignal, Stop, Permission) with one uniform draw.
DetectionClass sample_detection(DetectionClass truth, const ConfusionModel& model, Rng& rng);

/// VIS event for a truth/detection pair, or nothing for a NoSignal detection.
std::optional<EventKind> classify_outcome(DetectionClass truth, DetectionClass detected);

/// What a source saw on one step. The frame is kept when one was rendered so
/// the certificate stage can check the same image.
struct Perceived {
  DetectionClass detected = DetectionClass::NoSignal;
  std::optional<vision::GrayImage> frame;
  std::optional<double> confidence;
};

struct SceneContext {
  int run = 0;
  int step = 0;
  int train_pos = 0;
  DetectionClass truth = DetectionClass::NoSignal;
};

class PerceptionSource {
 public:
  virtual ~PerceptionSource() = default;
  virtual Perceived perceive(const SceneContext& scene, Rng& rng) = 0;
};

class ConfusionSource final : public PerceptionSource {
 public:
  explicit ConfusionSource(ConfusionModel model) : model_(model) {}
  Perceived perceive(const SceneContext& scene, Rng& rng) override;

 private:
  ConfusionModel model_;
};

/// Renders the scene and runs the weak classifier on it.
class CvSource final : public PerceptionSource {
 public:
  explicit CvSource(CvConfig cfg) : cfg_(cfg) {}
  Perceived perceive(const SceneContext& scene, Rng& rng) override;

 private:
  CvConfig cfg_;
};

/// Replays a recorded class list, one entry per step; NoSignal once exhausted.
class ScriptSource final : public PerceptionSource {
 public:
  explicit ScriptSource(std::vector<DetectionClass> script) : script_(std::move(script)) {}
  Perceived perceive(const SceneContext& scene, Rng& rng) override;

 private:
  std::vector<DetectionClass> script_;
  std::size_t next_ = 0;
};

/// Builds the configured source. External sources connect lazily.
std::unique_ptr<PerceptionSource> make_perception_source(const ScenarioConfig& cfg);

}  // namespace railshield
