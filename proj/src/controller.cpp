#include "railshield/controller.hpp"

#include <algorithm>
#include <cstdlib>

#include "railshield/perception.hpp"

namespace railshield {

std::optional<KnownSignal> associate(int reported_position, int train_pos, const KnownMap& map) {
  std::optional<KnownSignal> best;
  for (const auto& k : map.signals) {
    if (k.position <= train_pos) continue;
    const int d = std::abs(reported_position - k.position);
    if (d > map.tolerance) continue;
    if (!best || d < std::abs(reported_position - best->position)) best = k;
  }
  return best;
}

ShieldVerdict shield_filter(const Detection& det, const WorldState& state, const KnownMap& map,
                            const ScenarioConfig& cfg) {
  if (!cfg.shield) return ShieldVerdict::Forwarded;
  return associate(det.reported_position, state.train_pos, map) ? ShieldVerdict::Forwarded : ShieldVerdict::Ignored;
}

WorldState on_detection(const WorldState& state, const Detection& det, const KnownMap& map,
                        const ScenarioConfig& cfg) {
  WorldState next = state;
  next.inbox.reset();
  if (det.cls == DetectionClass::NoSignal) return next;

  if (auto known = associate(det.reported_position, state.train_pos, map)) {
    for (std::size_t i = 0; i < map.signals.size(); ++i) {
      if (map.signals[i].id != known->id) continue;
      next.confirmations[i] = det.cls == DetectionClass::StopSignal ? Confirmation::ConfirmedStop
                                                                     : Confirmation::ConfirmedPermission;
    }
  } else if (!cfg.shield && det.reported_position > state.train_pos) {
    const Aspect aspect = det.cls == DetectionClass::StopSignal ? Aspect::Stop : Aspect::Permission;
    auto& ph = next.phantoms;
    auto it = std::find_if(ph.begin(), ph.end(),
                           [&](const PhantomConstraint& p) { return p.position == det.reported_position; });
    if (it != ph.end()) {
      it->aspect = aspect;
    } else {
      ph.push_back({det.reported_position, aspect});
      std::sort(ph.begin(), ph.end());
    }
  }
  next.ma = update_authority(next, map, cfg);
  return next;
}

int update_authority(const WorldState& state, const KnownMap& map, const ScenarioConfig& cfg) {
  const int pos = state.train_pos;
  int limit = cfg.route_length - pos;
  auto bound = [&](int q) {
    if (q > pos) limit = std::min(limit, q - pos - 1);
  };

  if (!cfg.mutate_ignore_signals) {
    for (std::size_t i = 0; i < map.signals.size(); ++i)
      if (state.confirmations[i] != Confirmation::ConfirmedPermission) bound(map.signals[i].position);
    for (const auto& p : state.phantoms)
      if (p.aspect == Aspect::Stop) bound(p.position);
  }
  for (const auto& d : state.derailers)
    if (d.active) bound(d.position);
  return std::max(0, limit);
}

std::optional<int> expected_signal(const WorldState& state, const KnownMap& map, const ScenarioConfig& cfg) {
  std::optional<KnownSignal> best;
  for (const auto& k : map.signals) {
    const int d = k.position - state.train_pos;
    if (d > 0 && d <= cfg.visibility && (!best || d < best->position - state.train_pos)) best = k;
  }
  if (!best) return std::nullopt;
  return best->id;
}

WorldState forget_passed(const WorldState& state, const KnownMap& map) {
  WorldState next = state;
  std::erase_if(next.phantoms, [&](const PhantomConstraint& p) { return p.position <= state.train_pos; });
  for (std::size_t i = 0; i < map.signals.size(); ++i)
    if (map.signals[i].position <= state.train_pos) next.confirmations[i] = Confirmation::Unconfirmed;
  return next;
}

bool halted_before_phantom_stop(const WorldState& state) {
  if (state.ma != 0) return false;
  return std::any_of(state.phantoms.begin(), state.phantoms.end(), [&](const PhantomConstraint& p) {
    return p.position == state.train_pos + 1 && p.aspect == Aspect::Stop;
  });
}

bool halted_before_believed_stop(const WorldState& state, const ScenarioConfig& cfg) {
  if (state.ma != 0) return false;
  if (halted_before_phantom_stop(state)) return true;
  const auto& known = cfg.known_map.signals;
  for (std::size_t i = 0; i < known.size(); ++i)
    if (known[i].position == state.train_pos + 1 && state.confirmations[i] == Confirmation::ConfirmedStop)
      return true;
  return false;
}

DeliveryOutcome deliver_detection(const WorldState& state, const Detection& det, const ScenarioConfig& cfg) {
  DeliveryOutcome out;
  const auto kind = classify_outcome(det.true_class, det.cls);
  out.vis_event = Event{kind.value_or(EventKind::CtrlUpdateOnly), -1, det};
  if (!kind) {
    out.state = state;
    return out;
  }
  WorldState activated = apply_event(state, out.vis_event, cfg);
  out.violations = check_safety(state, out.vis_event, activated, cfg);
  out.verdict = shield_filter(det, activated, cfg.known_map, cfg);
  if (out.verdict == ShieldVerdict::Forwarded) {
    out.state = on_detection(activated, det, cfg.known_map, cfg);
  } else {
    out.state = std::move(activated);
    out.state.inbox.reset();
  }
  return out;
}

ActionOutcome move_branch(const WorldState& state, const ScenarioConfig& cfg) {
  ActionOutcome out;
  WorldState before = state;
  before.ma = update_authority(before, cfg.known_map, cfg);
  if (before.ma >= 1 && before.train_pos < cfg.route_length) {
    out.event = Event{EventKind::CtrlMoveForward, -1, std::nullopt};
  } else {
    out.event = Event{EventKind::CtrlUpdateOnly, -1, std::nullopt};
  }
  WorldState after = apply_event(before, out.event, cfg);
  out.violations = check_safety(before, out.event, after, cfg);
  after = forget_passed(after, cfg.known_map);
  after.ma = update_authority(after, cfg.known_map, cfg);
  out.state = std::move(after);
  return out;
}

ActionOutcome env_action(const WorldState& state, const Event& env, const ScenarioConfig& cfg) {
  ActionOutcome out;
  out.event = env;
  out.state = apply_event(state, env, cfg);
  out.violations = check_safety(state, env, out.state, cfg);
  return out;
}

}  // namespace railshield
