#pragma once

/**
 * @file worldmodel.hpp
 * @brief Ground truth of the shunting route and its guarded-event semantics.
 *
 * Events mirror the formal steering model: VIS_* events are raised by the
 * perception stage, ENV_* events by the environment and CTRL_* events by the
 * steering controller. States are plain values; apply_event never mutates its
 * input.
 *
 * Safety properties checked on every transition:
 *   SAF1  the train never passes a signal showing Stop
 *   SAF2  the train never runs over an active derailer
 *   SAF3  the train never leaves the end of the route
 *   SAF4  the train never moves without movement authority
 *   SAF5  the train never occupies an obstacle position
 */

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "railshield/config.hpp"
#include "railshield/detection.hpp"
#include "railshield/layout.hpp"

namespace railshield {

enum class Confirmation : std::uint8_t { Unconfirmed, ConfirmedPermission, ConfirmedStop };

/// A believed signal created from a detection at a position not on the map.
struct PhantomConstraint {
  int position = 0;
  Aspect aspect = Aspect::Stop;
  bool operator==(const PhantomConstraint&) const = default;
  auto operator<=>(const PhantomConstraint&) const = default;
};

enum class RunStatus : std::uint8_t { Running, ReachedEnd, HaltedAtStop, Stalled, Violation, Aborted };

enum class SafetyId : std::uint8_t { SAF1 = 1, SAF2, SAF3, SAF4, SAF5 };

struct SafetyProperty {
  SafetyId id;
  std::string_view description;
};

/// The five properties, in id order.
const std::vector<SafetyProperty>& safety_properties();

struct WorldState {
  int train_pos = 0;
  std::vector<Signal> signals;
  std::vector<Derailer> derailers;
  std::vector<Confirmation> confirmations;  ///< parallel to cfg.known_map.signals
  std::vector<PhantomConstraint> phantoms;  ///< sorted by position
  int ma = 0;
  int step = 0;
  int halted_steps = 0;
  RunStatus status = RunStatus::Running;
  std::optional<SafetyId> violation;
  std::optional<Detection> inbox;  ///< last VIS detection awaiting the controller
  std::int64_t false_det_activated = 0;
  std::int64_t correct_det_activated = 0;

  bool operator==(const WorldState&) const = default;

  const Signal* signal_by_id(int id) const;
  std::size_t signal_index(int id) const;  ///< throws ContractViolation if unknown
};

enum class EventKind : std::uint8_t {
  VisDetectCorrectSignal,
  VisDetectWrongStopSignal,
  VisDetectWrongPermissionSignal,
  EnvSwitchSignal,
  EnvToggleDerailer,
  CtrlMoveForward,
  CtrlUpdateOnly,
};

struct Event {
  EventKind kind = EventKind::CtrlUpdateOnly;
  int target = -1;                     ///< signal / derailer id for ENV events
  std::optional<Detection> detection;  ///< payload of VIS events

  bool operator==(const Event&) const = default;

  bool is_vis() const { return kind <= EventKind::VisDetectWrongPermissionSignal; }
  bool is_env() const { return kind == EventKind::EnvSwitchSignal || kind == EventKind::EnvToggleDerailer; }
};

/// "VIS_DetectCorrectSignal", "ENV_SwitchSignal(2)", ...
std::string event_name(const Event& e);
std::string_view to_string(EventKind k);
std::string_view to_string(RunStatus s);
std::string_view to_string(SafetyId id);
std::string_view to_string(Confirmation c);

/// Fresh state at position 0 with the configured layout; ma is 0 until the
/// controller first computes authority.
WorldState initial_state(const ScenarioConfig& cfg);

/// Nearest signal with 0 < position - train_pos <= visibility, if any.
const Signal* visible_signal(const WorldState& state, int visibility);

/// All events whose guards hold; empty once the run has terminated.
std::vector<Event> enabled_events(const WorldState& state, const ScenarioConfig& cfg);

/// Pure transition. Throws ContractViolation if the event is not enabled.
WorldState apply_event(const WorldState& state, const Event& event, const ScenarioConfig& cfg);

/// Properties violated by the transition before --event--> after.
std::vector<SafetyId> check_safety(const WorldState& before, const Event& event, const WorldState& after,
                                   const ScenarioConfig& cfg);

// ---------------------------------------------------------------------------
// Explicit-state checking of the perfect-perception abstraction.

struct ModelCheckResult {
  enum class Verdict : std::uint8_t { Verified, Violated, BudgetExceeded };
  Verdict verdict = Verdict::Verified;
  std::size_t states_explored = 0;
  std::vector<std::string> counterexample;  ///< event names from the initial state
  std::optional<SafetyId> violated;

  bool verified() const { return verdict == Verdict::Verified; }
};

std::string_view to_string(ModelCheckResult::Verdict v);

/**
 * Breadth-first exploration of every state reachable under nondeterministic
 * ENV events and the deterministic perceive -> confirm -> move reaction,
 * with perception replaced by ground truth. The perception, certificate and
 * script fields of cfg are ignored. The counterexample, if any, is a
 * shortest event path to a violating transition.
 */
ModelCheckResult bounded_model_check(const ScenarioConfig& cfg, std::size_t max_states);

}  // namespace railshield
