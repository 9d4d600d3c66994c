#pragma once

/**
 * @file detection.hpp
 * @brief Perception outcome types shared between perception, certificate
 *        checking and the controller.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace railshield {

enum class DetectionClass : std::uint8_t { NoSignal = 0, StopSignal = 1, PermissionSignal = 2 };

enum class ShieldVerdict : std::uint8_t { Forwarded, Ignored };

/// One materialized perception outcome (never NoSignal).
struct Detection {
  DetectionClass cls = DetectionClass::StopSignal;
  int reported_position = 0;
  DetectionClass true_class = DetectionClass::NoSignal;
  bool correct = false;   ///< cls == true_class, and true_class != NoSignal
  bool accepted = true;   ///< certificate verdict

  bool operator==(const Detection&) const = default;
};

Detection make_detection(DetectionClass detected, DetectionClass truth, int reported_position);

/// Wire/trace spelling: "none", "stop", "permission".
std::string_view to_string(DetectionClass c);
std::optional<DetectionClass> detection_class_from_string(std::string_view s);

std::string_view to_string(ShieldVerdict v);

}  // namespace railshield
