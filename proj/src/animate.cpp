#include "railshield/animate.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "railshield/errors.hpp"
#include "railshield/simengine.hpp"

namespace railshield {

ActionOutcome apply_interactive(const WorldState& state, const Event& event, const ScenarioConfig& cfg) {
  ActionOutcome out;
  out.event = event;
  if (event.is_vis()) {
    const auto enabled = enabled_events(state, cfg);
    const Event* match = nullptr;
    for (const auto& e : enabled)
      if (e.kind == event.kind) match = &e;
    if (!match) throw ContractViolation("event " + event_name(event) + " is not enabled");
    auto delivered = deliver_detection(state, event.detection ? *event.detection : *match->detection, cfg);
    out.state = std::move(delivered.state);
    out.violations = std::move(delivered.violations);
    return out;
  }
  if (event.is_env()) return env_action(state, event, cfg);

  WorldState after = apply_event(state, event, cfg);
  out.violations = check_safety(state, event, after, cfg);
  after = forget_passed(after, cfg.known_map);
  after.ma = update_authority(after, cfg.known_map, cfg);
  out.state = std::move(after);
  return out;
}

std::string describe_state(const WorldState& s, const ScenarioConfig& cfg) {
  std::ostringstream os;
  os << "step " << s.step << "  pos " << s.train_pos << "/" << cfg.route_length << "  ma " << s.ma << "  status "
     << to_string(s.status);
  if (s.violation) os << "(" << to_string(*s.violation) << ")";
  os << "\n  signals:";
  for (const auto& sig : s.signals) os << "  #" << sig.id << "@" << sig.position << "=" << to_string(sig.aspect);
  if (!cfg.known_map.signals.empty()) {
    os << "\n  belief: ";
    for (std::size_t i = 0; i < cfg.known_map.signals.size(); ++i)
      os << "  #" << cfg.known_map.signals[i].id << ":" << to_string(s.confirmations[i]);
  }
  if (!s.derailers.empty()) {
    os << "\n  derailers:";
    for (const auto& d : s.derailers) os << "  #" << d.id << "@" << d.position << (d.active ? "=active" : "=off");
  }
  if (!s.phantoms.empty()) {
    os << "\n  phantoms:";
    for (const auto& p : s.phantoms) os << "  " << p.position << "=" << to_string(p.aspect);
  }
  os << '\n';
  return os.str();
}

int run_animation(std::istream& in, std::ostream& out, const ScenarioConfig& cfg) {
  WorldState s = start_state(cfg);
  int applied = 0;
  std::string line;
  while (s.status == RunStatus::Running) {
    out << describe_state(s, cfg);
    const auto events = enabled_events(s, cfg);
    for (std::size_t i = 0; i < events.size(); ++i) out << "  [" << i << "] " << event_name(events[i]) << '\n';
    out << "> " << std::flush;
    if (!std::getline(in, line) || line == "q" || line == "quit") break;
    if (line.empty()) continue;

    const Event* chosen = nullptr;
    std::size_t used = 0;
    try {
      const unsigned long idx = std::stoul(line, &used);
      if (used == line.size() && idx < events.size()) chosen = &events[idx];
    } catch (const std::exception&) {
    }
    if (!chosen)
      for (const auto& e : events)
        if (event_name(e) == line) chosen = &e;
    if (!chosen) {
      out << "refused: \"" << line << "\" is not an enabled event\n";
      continue;
    }

    auto result = apply_interactive(s, *chosen, cfg);
    ++applied;
    s = std::move(result.state);
    s.step += 1;
    out << "applied " << event_name(*chosen) << '\n';
    if (!result.violations.empty()) {
      s.violation = result.violations.front();
      s.status = RunStatus::Violation;
      out << "SAFETY VIOLATION:";
      for (auto v : result.violations) out << ' ' << to_string(v);
      out << '\n';
    } else if (s.train_pos >= cfg.route_length) {
      s.status = RunStatus::ReachedEnd;
    }
  }
  out << describe_state(s, cfg);
  return applied;
}

}  // namespace railshield
