// Explicit-state BFS over the perfect-perception abstraction.

#include <deque>
#include <unordered_map>

#include "railshield/controller.hpp"
#include "railshield/perception.hpp"
#include "railshield/simengine.hpp"
#include "railshield/worldmodel.hpp"

namespace railshield {

namespace {

/// Everything that influences future behaviour; counters and step numbers
/// are deliberately left out so the space stays finite.
std::string state_key(const WorldState& s) {
  std::string key;
  key.reserve(16 + s.signals.size() + s.derailers.size() + s.confirmations.size() + 4 * s.phantoms.size());
  key += std::to_string(s.train_pos);
  key += '/';
  key += std::to_string(s.ma);
  key += '/';
  for (const auto& sig : s.signals) key += sig.aspect == Aspect::Stop ? 'S' : 'P';
  key += '/';
  for (const auto& d : s.derailers) key += d.active ? '1' : '0';
  key += '/';
  for (auto c : s.confirmations) key += static_cast<char>('0' + static_cast<int>(c));
  key += '/';
  for (const auto& p : s.phantoms) {
    key += std::to_string(p.position);
    key += p.aspect == Aspect::Stop ? 's' : 'p';
  }
  return key;
}

struct Node {
  WorldState state;
  std::size_t parent;
  std::vector<std::string> labels;  ///< events taken from the parent
};

struct Successor {
  WorldState state;
  std::vector<std::string> labels;
  std::vector<SafetyId> violations;
};

/// Deterministic perception phase: the visible signal, if any, is detected
/// with its true aspect and accepted.
std::pair<WorldState, std::vector<std::string>> perceive_perfectly(const WorldState& s, const ScenarioConfig& cfg,
                                                                   std::vector<SafetyId>& violations) {
  const GroundTruth gt = ground_truth(s, cfg);
  if (gt.true_class == DetectionClass::NoSignal) return {s, {}};
  const Detection det = make_detection(gt.true_class, gt.true_class, s.train_pos + cfg.d_fix);
  auto delivered = deliver_detection(s, det, cfg);
  violations.insert(violations.end(), delivered.violations.begin(), delivered.violations.end());
  return {std::move(delivered.state), {event_name(delivered.vis_event)}};
}

std::vector<Successor> successors(const WorldState& s, const ScenarioConfig& cfg) {
  std::vector<Successor> out;
  std::vector<SafetyId> perceive_violations;
  auto [seen, labels] = perceive_perfectly(s, cfg, perceive_violations);

  auto push = [&](ActionOutcome&& a) {
    Successor succ;
    succ.labels = labels;
    succ.labels.push_back(event_name(a.event));
    succ.violations = perceive_violations;
    succ.violations.insert(succ.violations.end(), a.violations.begin(), a.violations.end());
    succ.state = std::move(a.state);
    succ.state.inbox.reset();
    succ.state.false_det_activated = 0;
    succ.state.correct_det_activated = 0;
    out.push_back(std::move(succ));
  };

  if (cfg.p_env > 0.0) {
    for (const auto& e : enabled_events(seen, cfg))
      if (e.is_env()) push(env_action(seen, e, cfg));
  }
  if (cfg.p_env < 1.0) push(move_branch(seen, cfg));
  return out;
}

}  // namespace

ModelCheckResult bounded_model_check(const ScenarioConfig& cfg, std::size_t max_states) {
  ModelCheckResult result;
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> index;
  std::deque<std::size_t> frontier;

  const WorldState init = start_state(cfg);
  nodes.push_back({init, 0, {}});
  index.emplace(state_key(init), 0);
  frontier.push_back(0);

  auto path_to = [&](std::size_t id, const std::vector<std::string>& last) {
    std::vector<std::vector<std::string>> segments{last};
    while (id != 0) {
      segments.push_back(nodes[id].labels);
      id = nodes[id].parent;
    }
    std::vector<std::string> path;
    for (auto it = segments.rbegin(); it != segments.rend(); ++it) path.insert(path.end(), it->begin(), it->end());
    return path;
  };

  while (!frontier.empty()) {
    const std::size_t id = frontier.front();
    frontier.pop_front();
    ++result.states_explored;

    const WorldState current = nodes[id].state;
    if (current.train_pos >= cfg.route_length) continue;

    for (auto& succ : successors(current, cfg)) {
      if (!succ.violations.empty()) {
        result.verdict = ModelCheckResult::Verdict::Violated;
        result.violated = succ.violations.front();
        result.counterexample = path_to(id, succ.labels);
        return result;
      }
      auto key = state_key(succ.state);
      if (index.count(key)) continue;
      if (nodes.size() >= max_states) {
        result.verdict = ModelCheckResult::Verdict::BudgetExceeded;
        return result;
      }
      index.emplace(std::move(key), nodes.size());
      nodes.push_back({std::move(succ.state), id, std::move(succ.labels)});
      frontier.push_back(nodes.size() - 1);
    }
  }
  return result;
}

}  // namespace railshield
