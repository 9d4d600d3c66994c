#include "railshield/detection.hpp"

#include "railshield/layout.hpp"

namespace railshield {

Detection make_detection(DetectionClass detected, DetectionClass truth, int reported_position) {
  Detection d;
  d.cls = detected;
  d.true_class = truth;
  d.reported_position = reported_position;
  d.correct = detected == truth && truth != DetectionClass::NoSignal;
  d.accepted = true;
  return d;
}

std::string_view to_string(DetectionClass c) {
  switch (c) {
    case DetectionClass::NoSignal:
      return "none";
    case DetectionClass::StopSignal:
      return "stop";
    case DetectionClass::PermissionSignal:
      return "permission";
  }
  return "none";
}

std::optional<DetectionClass> detection_class_from_string(std::string_view s) {
  if (s == "none") return DetectionClass::NoSignal;
  if (s == "stop") return DetectionClass::StopSignal;
  if (s == "permission") return DetectionClass::PermissionSignal;
  return std::nullopt;
}

std::string_view to_string(ShieldVerdict v) { return v == ShieldVerdict::Forwarded ? "forwarded" : "ignored"; }

std::string_view to_string(Aspect a) { return a == Aspect::Stop ? "stop" : "permission"; }

std::optional<Aspect> aspect_from_string(std::string_view s) {
  if (s == "stop") return Aspect::Stop;
  if (s == "permission") return Aspect::Permission;
  return std::nullopt;
}

}  // namespace railshield
