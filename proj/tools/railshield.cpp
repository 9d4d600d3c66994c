/**
 * @file railshield.cpp
 * @brief Command-line entry point.
 *
 * Exit codes: 0 success / safe / verified / accepted, 1 usage, config or
 * input-format error, 2 violation / counterexample / mismatch / rejected,
 * 3 aborted run or inconclusive check.
 */

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "railshield/animate.hpp"
#include "railshield/config.hpp"
#include "railshield/errors.hpp"
#include "railshield/montecarlo.hpp"
#include "railshield/signvision.hpp"
#include "railshield/simengine.hpp"
#include "railshield/trace.hpp"
#include "railshield/worldmodel.hpp"

namespace rs = railshield;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUnsafe = 2;
constexpr int kExitInconclusive = 3;

rs::ScenarioConfig load_or_default(const std::string& path) {
  return path.empty() ? rs::default_config() : rs::load_config(path);
}

std::uint64_t parse_seed(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used, 0);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw rs::ConfigError(std::string(what) + ": \"" + text + "\" is not an unsigned integer");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rs::FormatError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rs::ConfigError("cannot write " + path);
  out << text;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::string seed;
  std::string trace;
};

int cmd_simulate(const SimulateArgs& a) {
  rs::ScenarioConfig cfg = load_or_default(a.config);
  if (const char* env = std::getenv("RAILSHIELD_SEED"); env && *env) cfg.seed = parse_seed(env, "RAILSHIELD_SEED");
  if (!a.seed.empty()) cfg.seed = parse_seed(a.seed, "--seed");
  rs::validate(cfg);

  const rs::RunOutput out = rs::run(cfg, cfg.seed, {0, !a.trace.empty()});
  if (!a.trace.empty()) {
    std::ofstream os(a.trace, std::ios::binary);
    if (!os) throw rs::ConfigError("--trace: cannot write " + a.trace);
    rs::write_trace(os, {cfg.seed, rs::config_hash(cfg), 0, cfg}, out.trace);
  }

  const auto& r = out.result;
  std::cout << "seed " << cfg.seed << "\n"
            << "status " << rs::to_string(r.terminal_status);
  if (r.violation) std::cout << " (" << rs::to_string(*r.violation) << ")";
  std::cout << "\n"
            << "distance " << r.distance << "/" << cfg.route_length << "\n"
            << "steps " << r.counters.steps << "\n"
            << "safe " << (r.safe ? "yes" : "no") << "\n"
            << "false detections activated " << r.counters.false_det_activated << "\n"
            << "correct detections activated " << r.counters.correct_det_activated << "\n"
            << "rejected true " << r.counters.rejected_true << "\n"
            << "rejected false " << r.counters.rejected_false << "\n";
  if (r.aborted()) {
    std::cerr << "aborted: " << r.abort_reason << "\n";
    return kExitInconclusive;
  }
  return r.safe ? kExitOk : kExitUnsafe;
}

// --- montecarlo -------------------------------------------------------------

struct MonteCarloArgs {
  std::string config;
  int runs = 500;
  std::string base_seed;
  bool matrix = false;
  std::string report;
  int jobs = 1;
};

int cmd_montecarlo(const MonteCarloArgs& a) {
  rs::ScenarioConfig cfg = load_or_default(a.config);
  if (a.runs < 1) throw rs::ConfigError("--runs: must be >= 1");
  if (a.jobs < 1) throw rs::ConfigError("--jobs: must be >= 1");
  const std::uint64_t base = a.base_seed.empty() ? cfg.seed : parse_seed(a.base_seed, "--base-seed");

  rs::AggregateReport report;
  if (a.matrix) {
    report = rs::run_matrix(cfg, a.runs, base, a.jobs);
  } else {
    report.n = a.runs;
    report.base_seed = base;
    report.cells.push_back(rs::run_batch(cfg, a.runs, base, a.jobs));
  }
  std::cout << rs::render_table(report);
  if (!a.report.empty()) write_text(a.report, rs::to_json(report).dump(2) + "\n");
  return kExitOk;
}

// --- check ------------------------------------------------------------------

int cmd_check(const std::string& config, const std::string& preset, long long max_states, bool mutate) {
  rs::ScenarioConfig cfg;
  if (!config.empty() && !preset.empty()) throw rs::ConfigError("--config and --preset are exclusive");
  if (preset == "small")
    cfg = rs::small_preset();
  else if (!preset.empty())
    throw rs::ConfigError("--preset: unknown preset \"" + preset + "\"");
  else
    cfg = load_or_default(config);
  if (mutate) cfg.mutate_ignore_signals = true;
  if (max_states < 1) throw rs::ConfigError("--max-states: must be >= 1");

  const auto r = rs::bounded_model_check(cfg, static_cast<std::size_t>(max_states));
  std::cout << "verdict " << rs::to_string(r.verdict) << "\n"
            << "states explored " << r.states_explored << "\n";
  switch (r.verdict) {
    case rs::ModelCheckResult::Verdict::Verified:
      return kExitOk;
    case rs::ModelCheckResult::Verdict::Violated:
      std::cout << "violated " << rs::to_string(*r.violated) << "\n"
                << "counterexample (" << r.counterexample.size() << " events):\n";
      for (std::size_t i = 0; i < r.counterexample.size(); ++i)
        std::cout << "  " << i + 1 << ". " << r.counterexample[i] << "\n";
      return kExitUnsafe;
    case rs::ModelCheckResult::Verdict::BudgetExceeded:
      std::cout << "inconclusive: state budget exhausted\n";
      return kExitInconclusive;
  }
  return kExitError;
}

// --- replay -----------------------------------------------------------------

int cmd_replay(const std::string& trace_path, const std::string& config) {
  std::ifstream in(trace_path, std::ios::binary);
  if (!in) throw rs::FormatError("cannot open " + trace_path);
  const rs::ParsedTrace trace = rs::parse_trace(in);
  const rs::ReplayReport rep =
      config.empty() ? rs::replay_verify(trace) : rs::replay_verify(trace, rs::load_config(config));
  std::cout << "replay " << rs::to_string(rep.status) << " (" << trace.records.size() << " records)\n";
  if (rep.status != rs::ReplayReport::Status::Ok) {
    if (rep.mismatch_step) std::cout << "at step " << *rep.mismatch_step << "\n";
    std::cout << rep.message << "\n";
    return kExitUnsafe;
  }
  if (rep.rechecked.empty()) {
    std::cout << "independent re-check: no violation\n";
  } else {
    const auto& f = rep.rechecked.front();
    std::cout << "independent re-check: " << rs::to_string(f.id) << " at step " << f.step << " (matches trace)\n";
  }
  return kExitOk;
}

// --- signs ------------------------------------------------------------------

struct RenderArgs {
  std::string kind = "sh0";
  std::string seed = "1";
  int noise = rs::vision::RenderParams{}.noise_amp;
  double occlusion = rs::vision::RenderParams{}.occlusion_prob;
  double distractor = rs::vision::RenderParams{}.distractor_prob;
  std::string out;
};

int cmd_render_sign(const RenderArgs& a) {
  rs::vision::SignKind kind;
  if (a.kind == "sh0")
    kind = rs::vision::SignKind::Sh0;
  else if (a.kind == "sh1")
    kind = rs::vision::SignKind::Sh1;
  else if (a.kind == "none")
    kind = rs::vision::SignKind::NoneScene;
  else
    throw rs::ConfigError("--kind: expected sh0, sh1 or none");
  if (a.noise < 0) throw rs::ConfigError("--noise: must be >= 0");
  if (a.occlusion < 0 || a.occlusion > 1) throw rs::ConfigError("--occlusion: must be in [0, 1]");
  if (a.distractor < 0 || a.distractor > 1) throw rs::ConfigError("--distractor: must be in [0, 1]");

  rs::Rng rng(parse_seed(a.seed, "--seed"));
  const auto img = rs::vision::render_sign(kind, a.noise, a.occlusion, a.distractor, rng);
  const std::string pgm = rs::vision::to_pgm(img);
  if (a.out.empty() || a.out == "-")
    std::cout << pgm;
  else
    write_text(a.out, pgm);
  return kExitOk;
}

int cmd_certify_sign(const std::string& image, const std::string& claimed_text) {
  const auto claimed = rs::detection_class_from_string(claimed_text);
  if (!claimed || *claimed == rs::DetectionClass::NoSignal)
    throw rs::ConfigError("--claimed: expected stop or permission");
  const auto img = rs::vision::parse_pgm(read_file(image));
  const auto weak = rs::vision::weak_classify(img);
  const bool ok = rs::vision::certify(img, *claimed);
  std::cout << "weak classifier: " << rs::to_string(weak) << "\n"
            << "certificate for " << rs::to_string(*claimed) << ": " << (ok ? "accepted" : "rejected") << "\n";
  return ok ? kExitOk : kExitUnsafe;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"railshield: closed-loop train perception, shield and certificate simulator"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run one seeded simulation");
  simulate->add_option("--config", sim.config, "Scenario JSON (default: built-in defaults)");
  simulate->add_option("--seed", sim.seed, "Run seed (overrides RAILSHIELD_SEED and the config)");
  simulate->add_option("--trace", sim.trace, "Write a JSONL trace here");

  MonteCarloArgs mc;
  auto* montecarlo = app.add_subcommand("montecarlo", "Fixed-n batch of seeded runs");
  montecarlo->add_option("--config", mc.config, "Scenario JSON (default: built-in defaults)");
  montecarlo->add_option("--runs", mc.runs, "Runs per cell")->capture_default_str();
  montecarlo->add_option("--base-seed", mc.base_seed, "Base seed (default: config seed)");
  montecarlo->add_flag("--matrix", mc.matrix, "Run all shield x certificate cells");
  montecarlo->add_option("--report", mc.report, "Write a JSON report here");
  montecarlo->add_option("--jobs", mc.jobs, "Worker threads")->capture_default_str();

  std::string check_config, check_preset;
  long long max_states = 1000000;
  bool mutate = false;
  auto* check = app.add_subcommand("check", "Exhaustive bounded model check");
  check->add_option("--config", check_config, "Scenario JSON");
  check->add_option("--preset", check_preset, "Built-in scenario (small)");
  check->add_option("--max-states", max_states, "State budget")->capture_default_str();
  check->add_flag("--mutate-ignore-signals", mutate, "Check a controller that ignores signals");

  std::string replay_trace, replay_config;
  auto* replay = app.add_subcommand("replay", "Re-run a trace and verify it byte for byte");
  replay->add_option("--trace", replay_trace, "JSONL trace")->required();
  replay->add_option("--config", replay_config, "Replay with this config instead of the embedded one");

  std::string animate_config;
  auto* animate = app.add_subcommand("animate", "Step through the model interactively");
  animate->add_option("--config", animate_config, "Scenario JSON (default: small preset)");

  RenderArgs ren;
  auto* render = app.add_subcommand("render-sign", "Render a synthetic sign frame as PGM");
  render->add_option("--kind", ren.kind, "sh0, sh1 or none")->capture_default_str();
  render->add_option("--seed", ren.seed, "Render seed")->capture_default_str();
  render->add_option("--noise", ren.noise, "Noise amplitude")->capture_default_str();
  render->add_option("--occlusion", ren.occlusion, "Occlusion probability")->capture_default_str();
  render->add_option("--distractor", ren.distractor, "Distractor probability (none scenes)")->capture_default_str();
  render->add_option("--out", ren.out, "Output PGM (default: stdout)");

  std::string cert_image, cert_claimed;
  auto* certify = app.add_subcommand("certify-sign", "Certify a claimed class against a PGM frame");
  certify->add_option("--image", cert_image, "PGM frame")->required();
  certify->add_option("--claimed", cert_claimed, "stop or permission")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return cmd_simulate(sim);
    if (*montecarlo) return cmd_montecarlo(mc);
    if (*check) return cmd_check(check_config, check_preset, max_states, mutate);
    if (*replay) return cmd_replay(replay_trace, replay_config);
    if (*animate) {
      const auto cfg = animate_config.empty() ? rs::small_preset() : rs::load_config(animate_config);
      rs::run_animation(std::cin, std::cout, cfg);
      return kExitOk;
    }
    if (*render) return cmd_render_sign(ren);
    if (*certify) return cmd_certify_sign(cert_image, cert_claimed);
  } catch (const rs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitError;
  } catch (const rs::FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
