#include "railshield/perception.hpp"

#include "railshield/external_perception.hpp"

namespace railshield {

GroundTruth ground_truth(const WorldState& state, const ScenarioConfig& cfg) {
  GroundTruth gt;
  if (const Signal* s = visible_signal(state, cfg.visibility)) {
    gt.visible_signal = s->id;
    gt.true_class = s->aspect == Aspect::Stop ? DetectionClass::StopSignal : DetectionClass::PermissionSignal;
  }
  return gt;
}

DetectionClass sample_detection(DetectionClass truth, const ConfusionModel& model, Rng& rng) {
  const double u = rng.uniform01();
  const auto& row = model.rows[static_cast<int>(truth)];
  if (u < row[0]) return DetectionClass::NoSignal;
  if (u < row[0] + row[1]) return DetectionClass::StopSignal;
  return DetectionClass::PermissionSignal;
}

std::optional<EventKind> classify_outcome(DetectionClass truth, DetectionClass detected) {
  if (detected == DetectionClass::NoSignal) return std::nullopt;
  if (detected == truth) return EventKind::VisDetectCorrectSignal;
  if (detected == DetectionClass::StopSignal) return EventKind::VisDetectWrongStopSignal;
  return EventKind::VisDetectWrongPermissionSignal;
}

Perceived ConfusionSource::perceive(const SceneContext& scene, Rng& rng) {
  return Perceived{sample_detection(scene.truth, model_, rng), std::nullopt, std::nullopt};
}

Perceived CvSource::perceive(const SceneContext& scene, Rng& rng) {
  Perceived p;
  p.frame = vision::render_sign(vision::sign_for(scene.truth), cfg_.render, rng);
  p.detected = vision::weak_classify(*p.frame, cfg_.classifier);
  return p;
}

Perceived ScriptSource::perceive(const SceneContext&, Rng&) {
  Perceived p;
  if (next_ < script_.size()) p.detected = script_[next_++];
  return p;
}

std::unique_ptr<PerceptionSource> make_perception_source(const ScenarioConfig& cfg) {
  switch (cfg.perception.mode) {
    case PerceptionMode::Confusion:
      return std::make_unique<ConfusionSource>(cfg.perception.confusion);
    case PerceptionMode::Cv:
      return std::make_unique<CvSource>(cfg.perception.cv);
    case PerceptionMode::External:
      return std::make_unique<ExternalSource>(cfg.perception.endpoint, cfg.perception.cv.render);
    case PerceptionMode::Script:
      return std::make_unique<ScriptSource>(cfg.perception.script);
  }
  return std::make_unique<ConfusionSource>(cfg.perception.confusion);
}

}  // namespace railshield
