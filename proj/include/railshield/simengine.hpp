#pragma once

/**
 * @file simengine.hpp
 * @brief Closed-loop simulation step, run lifecycle and termination.
 *
 * One step:
 *   1. ground truth for the current position (the image the detector sees),
 *   2. detection from the configured source; a non-NoSignal detection goes
 *      through the certificate stage and, if accepted, activates its VIS
 *      event, passes the shield and updates the controller,
 *   3. with probability p_env one uniformly chosen ENV event, otherwise the
 *      move branch.
 * Every applied event is checked against SAF1-SAF5; the first violation ends
 * the run.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "railshield/certcontrol.hpp"
#include "railshield/config.hpp"
#include "railshield/perception.hpp"
#include "railshield/rng.hpp"
#include "railshield/worldmodel.hpp"

namespace railshield {

struct TraceDetection {
  DetectionClass cls = DetectionClass::NoSignal;
  DetectionClass true_class = DetectionClass::NoSignal;
  bool correct = false;
  bool cert_accepted = false;
  std::optional<ShieldVerdict> shield_verdict;  ///< absent when rejected
  int reported_position = 0;
  std::optional<double> confidence;  ///< external detectors only; not used by the loop

  bool operator==(const TraceDetection&) const = default;
};

struct TraceState {
  int pos = 0;
  int ma = 0;
  std::vector<Aspect> aspects;
  std::vector<bool> derailers;
  std::vector<Confirmation> confirmations;
  std::vector<PhantomConstraint> phantoms;
  RunStatus status = RunStatus::Running;
  std::optional<SafetyId> violation;

  bool operator==(const TraceState&) const = default;
};

struct TraceRecord {
  int run = 0;
  int step = 0;
  std::string event = "none";   ///< phase-2 VIS event
  std::string action = "none";  ///< phase-3 ENV / CTRL event
  std::optional<TraceDetection> detection;
  TraceState state;

  bool operator==(const TraceRecord&) const = default;
};

struct RunCounters {
  std::int64_t false_det_activated = 0;
  std::int64_t correct_det_activated = 0;
  std::int64_t rejected_true = 0;
  std::int64_t rejected_false = 0;
  std::int64_t steps = 0;

  bool operator==(const RunCounters&) const = default;
};

struct RunResult {
  int distance = 0;
  bool safe = true;
  bool reached_end = false;
  RunStatus terminal_status = RunStatus::Running;
  std::optional<SafetyId> violation;
  RunCounters counters;
  std::string abort_reason;  ///< set when terminal_status == Aborted

  bool aborted() const { return terminal_status == RunStatus::Aborted; }
  bool operator==(const RunResult&) const = default;
};

struct StepOutput {
  WorldState state;
  TraceRecord record;
};

/**
 * Advances a running state by one step. Stateful collaborators (detection
 * source, certificate tally) are passed in so a run can own them.
 * Throws ExternalPerceptionError from external sources.
 */
StepOutput step(const WorldState& state, const ScenarioConfig& cfg, Rng& rng, PerceptionSource& source,
                CertTally& tally, int run_id = 0);

/// Initial state with authority already computed.
WorldState start_state(const ScenarioConfig& cfg);

struct RunOutput {
  RunResult result;
  std::uint64_t seed = 0;
  std::vector<TraceRecord> trace;
};

struct RunOptions {
  int run_id = 0;
  bool keep_trace = true;
};

/// Runs until a terminal status. Config errors throw before stepping.
RunOutput run(const ScenarioConfig& cfg, std::uint64_t seed, RunOptions options = {});

}  // namespace railshield
