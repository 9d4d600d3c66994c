#include "railshield/worldmodel.hpp"

#include <algorithm>

#include "railshield/errors.hpp"

namespace railshield {

const std::vector<SafetyProperty>& safety_properties() {
  static const std::vector<SafetyProperty> props = {
      {SafetyId::SAF1, "the train never passes a signal whose aspect is Stop"},
      {SafetyId::SAF2, "the train never passes or stops on an active derailer"},
      {SafetyId::SAF3, "the train never moves beyond the end of the route"},
      {SafetyId::SAF4, "the train never moves without movement authority"},
      {SafetyId::SAF5, "the train never occupies an obstacle position"},
  };
  return props;
}

const Signal* WorldState::signal_by_id(int id) const {
  for (const auto& s : signals)
    if (s.id == id) return &s;
  return nullptr;
}

std::size_t WorldState::signal_index(int id) const {
  for (std::size_t i = 0; i < signals.size(); ++i)
    if (signals[i].id == id) return i;
  throw ContractViolation("unknown signal id " + std::to_string(id));
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::VisDetectCorrectSignal:
      return "VIS_DetectCorrectSignal";
    case EventKind::VisDetectWrongStopSignal:
      return "VIS_DetectWrongStopSignal";
    case EventKind::VisDetectWrongPermissionSignal:
      return "VIS_DetectWrongPermissionSignal";
    case EventKind::EnvSwitchSignal:
      return "ENV_SwitchSignal";
    case EventKind::EnvToggleDerailer:
      return "ENV_ToggleDerailer";
    case EventKind::CtrlMoveForward:
      return "CTRL_MoveForward";
    case EventKind::CtrlUpdateOnly:
      return "CTRL_UpdateOnly";
  }
  return "?";
}

std::string event_name(const Event& e) {
  std::string name(to_string(e.kind));
  if (e.is_env()) name += "(" + std::to_string(e.target) + ")";
  return name;
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Running:
      return "Running";
    case RunStatus::ReachedEnd:
      return "ReachedEnd";
    case RunStatus::HaltedAtStop:
      return "HaltedAtStop";
    case RunStatus::Stalled:
      return "Stalled";
    case RunStatus::Violation:
      return "Violation";
    case RunStatus::Aborted:
      return "Aborted";
  }
  return "?";
}

std::string_view to_string(SafetyId id) {
  switch (id) {
    case SafetyId::SAF1:
      return "SAF1";
    case SafetyId::SAF2:
      return "SAF2";
    case SafetyId::SAF3:
      return "SAF3";
    case SafetyId::SAF4:
      return "SAF4";
    case SafetyId::SAF5:
      return "SAF5";
  }
  return "?";
}

std::string_view to_string(Confirmation c) {
  switch (c) {
    case Confirmation::Unconfirmed:
      return "unconfirmed";
    case Confirmation::ConfirmedPermission:
      return "permission";
    case Confirmation::ConfirmedStop:
      return "stop";
  }
  return "?";
}

std::string_view to_string(ModelCheckResult::Verdict v) {
  switch (v) {
    case ModelCheckResult::Verdict::Verified:
      return "verified";
    case ModelCheckResult::Verdict::Violated:
      return "violated";
    case ModelCheckResult::Verdict::BudgetExceeded:
      return "state budget exceeded";
  }
  return "?";
}

WorldState initial_state(const ScenarioConfig& cfg) {
  WorldState s;
  s.train_pos = 0;
  s.signals = cfg.signals;
  s.derailers = cfg.derailers;
  s.confirmations.assign(cfg.known_map.signals.size(), Confirmation::Unconfirmed);
  return s;
}

const Signal* visible_signal(const WorldState& state, int visibility) {
  const Signal* best = nullptr;
  for (const auto& s : state.signals) {
    const int d = s.position - state.train_pos;
    if (d > 0 && d <= visibility && (!best || d < best->position - state.train_pos)) best = &s;
  }
  return best;
}

namespace {

DetectionClass truth_at(const WorldState& state, const ScenarioConfig& cfg) {
  const Signal* s = visible_signal(state, cfg.visibility);
  if (!s) return DetectionClass::NoSignal;
  return s->aspect == Aspect::Stop ? DetectionClass::StopSignal : DetectionClass::PermissionSignal;
}

bool same_event(const Event& a, const Event& b) {
  if (a.kind != b.kind) return false;
  if (a.is_env()) return a.target == b.target;
  return true;
}

}  // namespace

std::vector<Event> enabled_events(const WorldState& state, const ScenarioConfig& cfg) {
  std::vector<Event> out;
  if (state.status != RunStatus::Running) return out;

  const DetectionClass truth = truth_at(state, cfg);
  const int reported = state.train_pos + cfg.d_fix;
  if (truth != DetectionClass::NoSignal)
    out.push_back({EventKind::VisDetectCorrectSignal, -1, make_detection(truth, truth, reported)});
  if (truth != DetectionClass::StopSignal)
    out.push_back({EventKind::VisDetectWrongStopSignal, -1,
                   make_detection(DetectionClass::StopSignal, truth, reported)});
  if (truth != DetectionClass::PermissionSignal)
    out.push_back({EventKind::VisDetectWrongPermissionSignal, -1,
                   make_detection(DetectionClass::PermissionSignal, truth, reported)});

  for (const auto& s : state.signals) out.push_back({EventKind::EnvSwitchSignal, s.id, std::nullopt});
  for (const auto& d : state.derailers) out.push_back({EventKind::EnvToggleDerailer, d.id, std::nullopt});

  if (state.ma >= 1 && state.train_pos < cfg.route_length) out.push_back({EventKind::CtrlMoveForward, -1, std::nullopt});
  out.push_back({EventKind::CtrlUpdateOnly, -1, std::nullopt});
  return out;
}

WorldState apply_event(const WorldState& state, const Event& event, const ScenarioConfig& cfg) {
  const auto enabled = enabled_events(state, cfg);
  auto match = std::find_if(enabled.begin(), enabled.end(), [&](const Event& e) { return same_event(e, event); });
  if (match == enabled.end())
    throw ContractViolation("event " + event_name(event) + " is not enabled at position " +
                            std::to_string(state.train_pos));

  WorldState next = state;
  switch (event.kind) {
    case EventKind::VisDetectCorrectSignal:
    case EventKind::VisDetectWrongStopSignal:
    case EventKind::VisDetectWrongPermissionSignal: {
      const Detection det = event.detection ? *event.detection : *match->detection;
      next.inbox = det;
      if (event.kind == EventKind::VisDetectCorrectSignal)
        ++next.correct_det_activated;
      else
        ++next.false_det_activated;
      break;
    }
    case EventKind::EnvSwitchSignal: {
      auto& sig = next.signals[next.signal_index(event.target)];
      sig.aspect = sig.aspect == Aspect::Stop ? Aspect::Permission : Aspect::Stop;
      break;
    }
    case EventKind::EnvToggleDerailer: {
      for (auto& d : next.derailers)
        if (d.id == event.target) d.active = !d.active;
      break;
    }
    case EventKind::CtrlMoveForward: {
      const int moved = std::min(1, next.ma);
      next.train_pos += moved;
      next.ma -= moved;
      break;
    }
    case EventKind::CtrlUpdateOnly:
      break;
  }
  return next;
}

std::vector<SafetyId> check_safety(const WorldState& before, const Event& event, const WorldState& after,
                                   const ScenarioConfig& cfg) {
  std::vector<SafetyId> out;
  const int from = before.train_pos;
  const int to = after.train_pos;
  const bool is_move = event.kind == EventKind::CtrlMoveForward;

  if (is_move) {
    for (const auto& s : before.signals)
      if (from < s.position && s.position <= to && s.aspect == Aspect::Stop) {
        out.push_back(SafetyId::SAF1);
        break;
      }
  }
  for (const auto& d : before.derailers)
    if (from < d.position && d.position <= to && d.active) {
      out.push_back(SafetyId::SAF2);
      break;
    }
  if (to > cfg.route_length) out.push_back(SafetyId::SAF3);
  if (is_move && before.ma < 1) out.push_back(SafetyId::SAF4);
  if (std::find(cfg.obstacles.begin(), cfg.obstacles.end(), to) != cfg.obstacles.end())
    out.push_back(SafetyId::SAF5);
  return out;
}

}  // namespace railshield
