#include "railshield/simengine.hpp"

#include "railshield/controller.hpp"
#include "railshield/errors.hpp"

namespace railshield {

namespace {

TraceState snapshot(const WorldState& s) {
  TraceState t;
  t.pos = s.train_pos;
  t.ma = s.ma;
  for (const auto& sig : s.signals) t.aspects.push_back(sig.aspect);
  for (const auto& d : s.derailers) t.derailers.push_back(d.active);
  t.confirmations = s.confirmations;
  t.phantoms = s.phantoms;
  t.status = s.status;
  t.violation = s.violation;
  return t;
}

/// Certificate stage behind one interface: stochastic acceptance model or
/// the image checker on the frame the detector classified.
bool certify_detection(const Detection& det, const Perceived& seen, const ScenarioConfig& cfg, Rng& rng,
                       CertTally& tally) {
  if (cfg.cert_stage == CertStage::Stochastic || !seen.frame)
    return apply_certificate(det, cfg.cert, cfg.cert_model, rng, tally);

  bool accepted = true;
  if (cfg.cert == CertMode::On || (cfg.cert == CertMode::NoStop && det.cls != DetectionClass::StopSignal))
    accepted = apply_certificate_cv(*seen.frame, det.cls, cfg.perception.cv.certifier);
  if (accepted) {
    ++tally.accepted;
  } else if (det.correct) {
    ++tally.rejected_true;
  } else {
    ++tally.rejected_false;
  }
  return accepted;
}

ActionOutcome scripted_action(const WorldState& s, const ScriptedAction& a, const ScenarioConfig& cfg) {
  switch (a.kind) {
    case ScriptedAction::Kind::Move:
      return move_branch(s, cfg);
    case ScriptedAction::Kind::Update: {
      ActionOutcome out;
      out.event = Event{EventKind::CtrlUpdateOnly, -1, std::nullopt};
      out.state = apply_event(s, out.event, cfg);
      out.state.ma = update_authority(out.state, cfg.known_map, cfg);
      return out;
    }
    case ScriptedAction::Kind::SwitchSignal:
      return env_action(s, Event{EventKind::EnvSwitchSignal, a.target, std::nullopt}, cfg);
    case ScriptedAction::Kind::ToggleDerailer:
      return env_action(s, Event{EventKind::EnvToggleDerailer, a.target, std::nullopt}, cfg);
  }
  return move_branch(s, cfg);
}

ActionOutcome random_action(const WorldState& s, const ScenarioConfig& cfg, Rng& rng) {
  if (rng.uniform01() < cfg.p_env) {
    std::vector<Event> env;
    for (auto& e : enabled_events(s, cfg))
      if (e.is_env()) env.push_back(std::move(e));
    if (!env.empty()) {
      const int pick = rng.uniform_int(0, static_cast<int>(env.size()) - 1);
      return env_action(s, env[static_cast<std::size_t>(pick)], cfg);
    }
  }
  return move_branch(s, cfg);
}

RunStatus classify_termination(const WorldState& s, const ScenarioConfig& cfg) {
  if (s.violation) return RunStatus::Violation;
  if (s.train_pos >= cfg.route_length) return RunStatus::ReachedEnd;
  // A phantom directly ahead can only be revisited by a detection reported at
  // train_pos + 1, i.e. never unless d_fix == 1.
  if (cfg.d_fix != 1 && halted_before_phantom_stop(s)) return RunStatus::HaltedAtStop;
  if (s.halted_steps >= cfg.halt_steps)
    return halted_before_believed_stop(s, cfg) ? RunStatus::HaltedAtStop : RunStatus::Stalled;
  if (s.step >= cfg.max_steps) return RunStatus::Stalled;
  return RunStatus::Running;
}

}  // namespace

WorldState start_state(const ScenarioConfig& cfg) {
  WorldState s = initial_state(cfg);
  s.ma = update_authority(s, cfg.known_map, cfg);
  return s;
}

StepOutput step(const WorldState& state, const ScenarioConfig& cfg, Rng& rng, PerceptionSource& source,
                CertTally& tally, int run_id) {
  if (state.status != RunStatus::Running) throw ContractViolation("step: run has already terminated");

  WorldState s = state;
  TraceRecord rec;
  rec.run = run_id;
  rec.step = state.step + 1;
  std::vector<SafetyId> violations;

  // (1) what the camera would see here, (2) what the detector makes of it
  const GroundTruth gt = ground_truth(s, cfg);
  const SceneContext scene{run_id, rec.step, s.train_pos, gt.true_class};
  const Perceived seen = source.perceive(scene, rng);

  if (seen.detected != DetectionClass::NoSignal) {
    const Detection det = make_detection(seen.detected, gt.true_class, s.train_pos + cfg.d_fix);
    TraceDetection td;
    td.cls = det.cls;
    td.true_class = det.true_class;
    td.correct = det.correct;
    td.reported_position = det.reported_position;
    td.confidence = seen.confidence;
    td.cert_accepted = certify_detection(det, seen, cfg, rng, tally);
    if (td.cert_accepted) {
      auto delivered = deliver_detection(s, det, cfg);
      rec.event = event_name(delivered.vis_event);
      td.shield_verdict = delivered.verdict;
      violations = std::move(delivered.violations);
      s = std::move(delivered.state);
    }
    rec.detection = td;
  }

  // (3) environment change or controller move
  if (violations.empty()) {
    const auto idx = static_cast<std::size_t>(rec.step - 1);
    ActionOutcome action = idx < cfg.actions.size() ? scripted_action(s, cfg.actions[idx], cfg)
                                                    : random_action(s, cfg, rng);
    rec.action = event_name(action.event);
    violations = std::move(action.violations);
    s = std::move(action.state);
  }

  s.step = rec.step;
  s.halted_steps = s.train_pos == state.train_pos ? state.halted_steps + 1 : 0;
  if (!violations.empty()) s.violation = violations.front();
  s.status = classify_termination(s, cfg);

  rec.state = snapshot(s);
  return {std::move(s), std::move(rec)};
}

RunOutput run(const ScenarioConfig& cfg, std::uint64_t seed, RunOptions options) {
  validate(cfg);
  RunOutput out;
  out.seed = seed;
  Rng rng(seed);
  CertTally tally;
  auto source = make_perception_source(cfg);
  WorldState s = start_state(cfg);

  while (s.status == RunStatus::Running) {
    try {
      auto next = step(s, cfg, rng, *source, tally, options.run_id);
      s = std::move(next.state);
      if (options.keep_trace) out.trace.push_back(std::move(next.record));
    } catch (const ExternalPerceptionError& e) {
      s.status = RunStatus::Aborted;
      out.result.abort_reason = e.what();
      if (!e.payload().empty()) out.result.abort_reason += " (payload: " + e.payload() + ")";
    }
  }

  RunResult& r = out.result;
  r.distance = s.train_pos;
  r.terminal_status = s.status;
  r.violation = s.violation;
  r.safe = s.status != RunStatus::Violation;
  r.reached_end = s.status == RunStatus::ReachedEnd;
  r.counters.false_det_activated = s.false_det_activated;
  r.counters.correct_det_activated = s.correct_det_activated;
  r.counters.rejected_true = tally.rejected_true;
  r.counters.rejected_false = tally.rejected_false;
  r.counters.steps = s.step;
  return out;
}

}  // namespace railshield
