#pragma once

/**
 * @file controller.hpp
 * @brief Steering controller: belief maintenance, movement authority and the
 *        known-position safety shield.
 *
 * Authority rule: every constraint q strictly ahead of the train (an
 * unconfirmed or stop-confirmed known signal, a phantom Stop, an active
 * derailer) limits ma to q - train_pos - 1, so the train comes to rest
 * directly in front of it. The route end limits ma to route_length - train_pos.
 */

#include <optional>

#include "railshield/config.hpp"
#include "railshield/detection.hpp"
#include "railshield/worldmodel.hpp"

namespace railshield {

/// Known signal ahead of the train within the association radius of
/// reported_position (nearest first), if any.
std::optional<KnownSignal> associate(int reported_position, int train_pos, const KnownMap& map);

ShieldVerdict shield_filter(const Detection& det, const WorldState& state, const KnownMap& map,
                            const ScenarioConfig& cfg);

/// Updates belief from a forwarded detection and recomputes ma.
WorldState on_detection(const WorldState& state, const Detection& det, const KnownMap& map,
                        const ScenarioConfig& cfg);

int update_authority(const WorldState& state, const KnownMap& map, const ScenarioConfig& cfg);

/// Nearest known signal within visibility ahead; reporting only.
std::optional<int> expected_signal(const WorldState& state, const KnownMap& map, const ScenarioConfig& cfg);

/// Drops phantoms at or behind the train and forgets confirmations of
/// passed signals.
WorldState forget_passed(const WorldState& state, const KnownMap& map);

/// True if ma == 0 and the position directly ahead holds a constraint the
/// controller believes shows Stop.
bool halted_before_believed_stop(const WorldState& state, const ScenarioConfig& cfg);
bool halted_before_phantom_stop(const WorldState& state);

// ---------------------------------------------------------------------------
// Composite reactions used by the simulation loop and the model checker.

struct DeliveryOutcome {
  WorldState state;
  Event vis_event;
  ShieldVerdict verdict = ShieldVerdict::Forwarded;
  std::vector<SafetyId> violations;
};

/// Applies the VIS event for an accepted detection, filters it through the
/// shield and, if forwarded, hands it to the controller.
DeliveryOutcome deliver_detection(const WorldState& state, const Detection& det, const ScenarioConfig& cfg);

struct ActionOutcome {
  WorldState state;
  Event event;
  std::vector<SafetyId> violations;
};

/// Move branch: refresh authority, then CTRL_MoveForward if enabled (else
/// CTRL_UpdateOnly), then refresh again.
ActionOutcome move_branch(const WorldState& state, const ScenarioConfig& cfg);

/// Applies one ENV event.
ActionOutcome env_action(const WorldState& state, const Event& env, const ScenarioConfig& cfg);

}  // namespace railshield
