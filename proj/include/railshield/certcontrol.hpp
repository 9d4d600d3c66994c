#pragma once

/**
 * @file certcontrol.hpp
 * @brief Certificate-checker stage deciding whether a detection is acted upon.
 */

#include <cstdint>

#include "railshield/config.hpp"
#include "railshield/detection.hpp"
#include "railshield/rng.hpp"
#include "railshield/signvision.hpp"

namespace railshield {

struct CertTally {
  std::int64_t rejected_true = 0;
  std::int64_t rejected_false = 0;
  std::int64_t accepted = 0;

  bool operator==(const CertTally&) const = default;
};

/**
 * Stochastic certificate check. Exactly one uniform is drawn per call, in
 * every mode, so runs that differ only in the mode consume the same stream.
 */
bool apply_certificate(const Detection& det, CertMode mode, const CertModel& model, Rng& rng, CertTally& tally);

/// Image-based check; a thin wrapper over vision::certify.
bool apply_certificate_cv(const vision::GrayImage& image, DetectionClass claimed,
                          const vision::CertifierParams& params = {});

}  // namespace railshield
