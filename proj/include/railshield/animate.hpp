#pragma once

/**
 * @file animate.hpp
 * @brief Interactive stepping through the guarded-event model.
 *
 * Each round prints the state and the enabled events, reads one choice (an
 * index or an exact event name), applies it and reports any safety
 * violation. Choices outside the enabled set are refused. "q" or end of
 * input ends the session.
 */

#include <iosfwd>

#include "railshield/config.hpp"
#include "railshield/controller.hpp"
#include "railshield/worldmodel.hpp"

namespace railshield {

/// Applies a user-chosen event with the controller reactions the simulation
/// loop would run around it (shield + belief update for VIS events,
/// authority refresh after moves and updates).
ActionOutcome apply_interactive(const WorldState& state, const Event& event, const ScenarioConfig& cfg);

std::string describe_state(const WorldState& state, const ScenarioConfig& cfg);

/// Returns the number of events applied.
int run_animation(std::istream& in, std::ostream& out, const ScenarioConfig& cfg);

}  // namespace railshield
