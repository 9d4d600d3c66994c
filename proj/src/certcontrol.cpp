#include "railshield/certcontrol.hpp"

#include "railshield/errors.hpp"

namespace railshield {

bool apply_certificate(const Detection& det, CertMode mode, const CertModel& model, Rng& rng, CertTally& tally) {
  if (det.cls == DetectionClass::NoSignal) throw ContractViolation("apply_certificate: NoSignal detection");
  const double u = rng.uniform01();

  bool accepted = true;
  if (mode == CertMode::On || (mode == CertMode::NoStop && det.cls != DetectionClass::StopSignal)) {
    const auto cls = static_cast<int>(det.cls);
    const double p = det.correct ? model.accept_true[cls] : model.accept_false[cls];
    accepted = u < p;
  }

  if (accepted) {
    ++tally.accepted;
  } else if (det.correct) {
    ++tally.rejected_true;
  } else {
    ++tally.rejected_false;
  }
  return accepted;
}

bool apply_certificate_cv(const vision::GrayImage& image, DetectionClass claimed,
                          const vision::CertifierParams& params) {
  return vision::certify(image, claimed, params);
}

}  // namespace railshield
