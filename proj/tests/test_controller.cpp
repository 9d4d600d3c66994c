#include "doctest.h"
#include "railshield/controller.hpp"
#include "railshield/perception.hpp"
#include "support.hpp"

using namespace railshield;

namespace {

Detection det_at(DetectionClass cls, int reported, DetectionClass truth = DetectionClass::NoSignal) {
  return make_detection(cls, truth, reported);
}

}  // namespace

TEST_CASE("shield_filter examples") {
  auto cfg = fixtures::one_signal(60, Aspect::Stop);
  cfg.known_map.tolerance = 1;
  auto s = initial_state(cfg);
  s.train_pos = 56;

  SUBCASE("shield off forwards anything") {
    cfg.shield = false;
    CHECK(shield_filter(det_at(DetectionClass::StopSignal, 35), s, cfg.known_map, cfg) == ShieldVerdict::Forwarded);
  }
  SUBCASE("within tolerance") {
    CHECK(shield_filter(det_at(DetectionClass::StopSignal, 61), s, cfg.known_map, cfg) == ShieldVerdict::Forwarded);
    CHECK(shield_filter(det_at(DetectionClass::StopSignal, 59), s, cfg.known_map, cfg) == ShieldVerdict::Forwarded);
  }
  SUBCASE("outside tolerance") {
    s.train_pos = 30;
    CHECK(shield_filter(det_at(DetectionClass::StopSignal, 35), s, cfg.known_map, cfg) == ShieldVerdict::Ignored);
    CHECK(shield_filter(det_at(DetectionClass::StopSignal, 62), s, cfg.known_map, cfg) == ShieldVerdict::Ignored);
  }
  SUBCASE("known signal behind the train no longer matches") {
    s.train_pos = 60;
    CHECK(shield_filter(det_at(DetectionClass::StopSignal, 60), s, cfg.known_map, cfg) == ShieldVerdict::Ignored);
  }
}

TEST_CASE("associate prefers the nearest known signal") {
  KnownMap map{{{0, 60}, {1, 65}}, 5};
  CHECK(associate(61, 50, map)->id == 0);
  CHECK(associate(64, 50, map)->id == 1);
  CHECK(associate(62, 50, map)->id == 0);  // 2 vs 3
  CHECK_FALSE(associate(71, 50, map).has_value());
  CHECK(associate(61, 60, map)->id == 1);  // 60 is not ahead of a train at 60
}

TEST_CASE("on_detection: Permission at a known signal confirms it") {
  const auto cfg = fixtures::one_signal(60, Aspect::Permission);
  auto s = initial_state(cfg);
  s.train_pos = 55;
  const auto t = on_detection(s, det_at(DetectionClass::PermissionSignal, 60), cfg.known_map, cfg);
  CHECK(t.confirmations[0] == Confirmation::ConfirmedPermission);
  CHECK(t.ma == cfg.route_length - 55);
}

TEST_CASE("on_detection: later Stop downgrades a Permission confirmation") {
  const auto cfg = fixtures::one_signal(60, Aspect::Stop);
  auto s = initial_state(cfg);
  s.train_pos = 55;
  s.confirmations[0] = Confirmation::ConfirmedPermission;
  const auto t = on_detection(s, det_at(DetectionClass::StopSignal, 60), cfg.known_map, cfg);
  CHECK(t.confirmations[0] == Confirmation::ConfirmedStop);
  CHECK(t.ma == 4);
}

TEST_CASE("on_detection: shield off, unmatched Stop creates a phantom") {
  auto cfg = fixtures::one_signal(60, Aspect::Stop);
  cfg.shield = false;
  auto s = initial_state(cfg);
  s.train_pos = 12;
  const auto t = on_detection(s, det_at(DetectionClass::StopSignal, 17), cfg.known_map, cfg);
  REQUIRE(t.phantoms.size() == 1);
  CHECK(t.phantoms[0] == PhantomConstraint{17, Aspect::Stop});
  CHECK(t.ma == 4);  // stops at 16, directly before the phantom
  CHECK(t.confirmations[0] == Confirmation::Unconfirmed);

  const auto u = on_detection(t, det_at(DetectionClass::PermissionSignal, 17), cfg.known_map, cfg);
  REQUIRE(u.phantoms.size() == 1);
  CHECK(u.phantoms[0].aspect == Aspect::Permission);
  CHECK(u.ma == 59 - 12);  // the phantom Stop is lifted; signal 60 still bounds
}

TEST_CASE("on_detection: shield on never creates phantoms") {
  const auto cfg = fixtures::one_signal(60, Aspect::Stop);
  auto s = initial_state(cfg);
  s.train_pos = 12;
  const auto t = on_detection(s, det_at(DetectionClass::StopSignal, 17), cfg.known_map, cfg);
  CHECK(t.phantoms.empty());
}

TEST_CASE("update_authority examples") {
  auto cfg = fixtures::one_signal(60, Aspect::Stop, 250);
  auto s = initial_state(cfg);

  SUBCASE("unconfirmed signal ahead stops the train directly before it") {
    s.train_pos = 55;
    CHECK(update_authority(s, cfg.known_map, cfg) == 4);
    s.train_pos = 51;
    CHECK(update_authority(s, cfg.known_map, cfg) == 8);
  }
  SUBCASE("all signals confirmed Permission: route end bounds") {
    s.confirmations[0] = Confirmation::ConfirmedPermission;
    CHECK(update_authority(s, cfg.known_map, cfg) == 250);
  }
  SUBCASE("a signal the train stands on no longer constrains") {
    s.train_pos = 60;
    s.confirmations[0] = Confirmation::ConfirmedStop;
    CHECK(update_authority(s, cfg.known_map, cfg) == 190);
  }
  SUBCASE("active derailer bounds authority") {
    cfg.derailers = {{0, 30, true}};
    s = initial_state(cfg);
    s.train_pos = 20;
    CHECK(update_authority(s, cfg.known_map, cfg) == 9);
  }
  SUBCASE("ignoring signals (mutation) only leaves the route end") {
    cfg.mutate_ignore_signals = true;
    s.train_pos = 55;
    CHECK(update_authority(s, cfg.known_map, cfg) == 195);
  }
}

TEST_CASE("property: authority equals a brute-force walk to the first blocker") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    Rng rng(seed);
    ScenarioConfig cfg;
    cfg.route_length = rng.uniform_int(20, 120);
    int pos = 0;
    int id = 0;
    while (true) {
      pos += rng.uniform_int(3, 25);
      if (pos > cfg.route_length) break;
      cfg.signals.push_back({id++, pos, Aspect::Stop});
    }
    cfg.known_map = map_from_signals(cfg.signals, 3);
    const int dpos = rng.uniform_int(1, cfg.route_length);
    bool clash = false;
    for (const auto& sg : cfg.signals) clash |= sg.position == dpos;
    if (!clash) cfg.derailers = {{0, dpos, rng.bernoulli(0.5)}};

    auto s = initial_state(cfg);
    s.train_pos = rng.uniform_int(0, cfg.route_length);
    std::vector<int> blockers;
    for (std::size_t i = 0; i < s.confirmations.size(); ++i) {
      s.confirmations[i] = static_cast<Confirmation>(rng.uniform_int(0, 2));
      if (s.confirmations[i] != Confirmation::ConfirmedPermission) blockers.push_back(cfg.known_map.signals[i].position);
    }
    for (int k = rng.uniform_int(0, 3); k > 0; --k) {
      const PhantomConstraint p{rng.uniform_int(1, cfg.route_length), rng.bernoulli(0.5) ? Aspect::Stop : Aspect::Permission};
      s.phantoms.push_back(p);
      if (p.aspect == Aspect::Stop) blockers.push_back(p.position);
    }
    for (const auto& d : s.derailers)
      if (d.active) blockers.push_back(d.position);

    const int ma = update_authority(s, cfg.known_map, cfg);
    REQUIRE(ma == oracle::authority(s.train_pos, cfg.route_length, blockers));
    // Authority safety: no non-permission known signal can be crossed.
    for (int q : blockers)
      if (q > s.train_pos) REQUIRE(ma <= q - s.train_pos - 1);
  }
}

TEST_CASE("expected_signal examples") {
  auto cfg = fixtures::one_signal(60, Aspect::Stop);
  auto s = initial_state(cfg);
  s.train_pos = 51;
  CHECK(expected_signal(s, cfg.known_map, cfg) == 0);
  s.train_pos = 49;
  CHECK_FALSE(expected_signal(s, cfg.known_map, cfg).has_value());

  cfg.signals = {{0, 60, Aspect::Stop}, {1, 65, Aspect::Stop}};
  cfg.known_map = map_from_signals(cfg.signals, 5);
  s = initial_state(cfg);
  s.train_pos = 56;
  CHECK(expected_signal(s, cfg.known_map, cfg) == 0);
}

TEST_CASE("forget_passed drops phantoms and confirmations behind the train") {
  auto cfg = fixtures::one_signal(60, Aspect::Stop);
  auto s = initial_state(cfg);
  s.train_pos = 60;
  s.confirmations[0] = Confirmation::ConfirmedPermission;
  s.phantoms = {{40, Aspect::Stop}, {60, Aspect::Stop}, {70, Aspect::Permission}};
  const auto t = forget_passed(s, cfg.known_map);
  CHECK(t.confirmations[0] == Confirmation::Unconfirmed);
  CHECK(t.phantoms == std::vector<PhantomConstraint>{{70, Aspect::Permission}});
}

TEST_CASE("halted_before_believed_stop") {
  auto cfg = fixtures::one_signal(60, Aspect::Stop);
  auto s = initial_state(cfg);
  s.train_pos = 59;
  s.ma = 0;
  CHECK_FALSE(halted_before_believed_stop(s, cfg));  // unconfirmed: waiting, not halted
  s.confirmations[0] = Confirmation::ConfirmedStop;
  CHECK(halted_before_believed_stop(s, cfg));
  s.ma = 1;
  CHECK_FALSE(halted_before_believed_stop(s, cfg));
  s.ma = 0;
  s.train_pos = 30;
  s.confirmations[0] = Confirmation::Unconfirmed;
  s.phantoms = {{31, Aspect::Stop}};
  CHECK(halted_before_phantom_stop(s));
  CHECK(halted_before_believed_stop(s, cfg));
}

TEST_CASE("deliver_detection: ignored detections still count but do not change belief") {
  const auto cfg = fixtures::one_signal(60, Aspect::Stop);
  auto s = initial_state(cfg);
  s.train_pos = 10;
  s.ma = update_authority(s, cfg.known_map, cfg);
  const auto out = deliver_detection(s, make_detection(DetectionClass::StopSignal, DetectionClass::NoSignal, 15), cfg);
  CHECK(out.verdict == ShieldVerdict::Ignored);
  CHECK(out.vis_event.kind == EventKind::VisDetectWrongStopSignal);
  CHECK(out.state.false_det_activated == 1);
  CHECK(out.state.phantoms.empty());
  CHECK(out.state.ma == s.ma);
  CHECK_FALSE(out.state.inbox.has_value());
  CHECK(out.violations.empty());
}

TEST_CASE("deliver_detection: forwarded correct detection confirms") {
  const auto cfg = fixtures::one_signal(60, Aspect::Stop);
  auto s = initial_state(cfg);
  s.train_pos = 51;
  const auto out = deliver_detection(s, make_detection(DetectionClass::StopSignal, DetectionClass::StopSignal, 56), cfg);
  CHECK(out.verdict == ShieldVerdict::Forwarded);
  CHECK(out.state.correct_det_activated == 1);
  CHECK(out.state.confirmations[0] == Confirmation::ConfirmedStop);
  CHECK(out.state.ma == 8);
}

TEST_CASE("move_branch moves one unit or waits") {
  const auto cfg = fixtures::one_signal(60, Aspect::Stop);
  auto s = initial_state(cfg);
  s.train_pos = 57;
  auto out = move_branch(s, cfg);
  CHECK(out.event.kind == EventKind::CtrlMoveForward);
  CHECK(out.state.train_pos == 58);
  CHECK(out.state.ma == 1);
  out = move_branch(out.state, cfg);
  CHECK(out.state.train_pos == 59);
  out = move_branch(out.state, cfg);
  CHECK(out.event.kind == EventKind::CtrlUpdateOnly);
  CHECK(out.state.train_pos == 59);
  CHECK(out.violations.empty());
}

TEST_CASE("property: perfect perception keeps the visible signal's belief equal to its aspect") {
  // Deliver the true class every step and flip signals at random: after each
  // delivery the belief about the visible known signal equals ground truth.
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Rng rng(seed);
    auto cfg = fixtures::two_signals_one_derailer();
    auto s = initial_state(cfg);
    s.ma = update_authority(s, cfg.known_map, cfg);
    for (int i = 0; i < 400 && s.train_pos < cfg.route_length; ++i) {
      const auto gt = ground_truth(s, cfg);
      if (gt.true_class != DetectionClass::NoSignal) {
        s = deliver_detection(s, make_detection(gt.true_class, gt.true_class, s.train_pos + cfg.d_fix), cfg).state;
        const auto idx = s.signal_index(*gt.visible_signal);
        const auto want = s.signals[idx].aspect == Aspect::Stop ? Confirmation::ConfirmedStop
                                                                : Confirmation::ConfirmedPermission;
        REQUIRE(s.confirmations[idx] == want);
      }
      if (rng.bernoulli(0.25)) {
        s = env_action(s, {EventKind::EnvSwitchSignal, rng.uniform_int(0, 1), std::nullopt}, cfg).state;
      } else {
        auto out = move_branch(s, cfg);
        REQUIRE(out.violations.empty());
        s = out.state;
      }
    }
  }
}

TEST_CASE("failure mode: stale Permission plus rejected Stops crosses a Stop signal") {
  const auto cfg = fixtures::one_signal(60, Aspect::Permission);
  auto s = initial_state(cfg);
  s.train_pos = 59;
  s = on_detection(s, make_detection(DetectionClass::PermissionSignal, DetectionClass::PermissionSignal, 64),
                   cfg.known_map, cfg);
  REQUIRE(s.confirmations[0] == Confirmation::ConfirmedPermission);
  s = env_action(s, {EventKind::EnvSwitchSignal, 0, std::nullopt}, cfg).state;
  REQUIRE(s.signals[0].aspect == Aspect::Stop);
  // Every Stop detection is rejected, so nothing reaches the controller.
  const auto out = move_branch(s, cfg);
  CHECK(out.event.kind == EventKind::CtrlMoveForward);
  CHECK(out.violations == std::vector{SafetyId::SAF1});
}
