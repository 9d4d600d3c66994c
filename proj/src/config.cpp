#include "railshield/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "railshield/errors.hpp"

namespace railshield {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& reason) {
  throw ConfigError(field + ": " + reason);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool known = key == "description";
    for (const char* a : allowed) known = known || key == a;
    if (!known) fail(join(path, key), "unknown field");
  }
}

const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  return j;
}

int get_int(const json& j, const char* key, int def, const std::string& path) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
  return v.get<int>();
}

double get_double(const json& j, const char* key, double def, const std::string& path) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_number()) fail(join(path, key), "expected a number");
  return v.get<double>();
}

bool get_bool(const json& j, const char* key, bool def, const std::string& path) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_boolean()) fail(join(path, key), "expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& j, const char* key, const std::string& def, const std::string& path) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_string()) fail(join(path, key), "expected a string");
  return v.get<std::string>();
}

Aspect parse_aspect(const json& j, const std::string& field) {
  if (!j.is_string()) fail(field, "expected \"stop\" or \"permission\"");
  auto a = aspect_from_string(j.get<std::string>());
  if (!a) fail(field, "expected \"stop\" or \"permission\", got \"" + j.get<std::string>() + "\"");
  return *a;
}

DetectionClass parse_class(const json& j, const std::string& field) {
  if (!j.is_string()) fail(field, "expected \"none\", \"stop\" or \"permission\"");
  auto c = detection_class_from_string(j.get<std::string>());
  if (!c) fail(field, "unknown detection class \"" + j.get<std::string>() + "\"");
  return *c;
}

CertMode parse_cert_mode(const std::string& s, const std::string& field) {
  if (s == "off") return CertMode::Off;
  if (s == "nostop") return CertMode::NoStop;
  if (s == "on") return CertMode::On;
  fail(field, "expected \"off\", \"nostop\" or \"on\", got \"" + s + "\"");
}

PerceptionMode parse_perception_mode(const std::string& s, const std::string& field) {
  if (s == "confusion") return PerceptionMode::Confusion;
  if (s == "cv") return PerceptionMode::Cv;
  if (s == "external") return PerceptionMode::External;
  if (s == "script") return PerceptionMode::Script;
  fail(field, "expected \"confusion\", \"cv\", \"external\" or \"script\", got \"" + s + "\"");
}

std::string action_to_string(const ScriptedAction& a) {
  switch (a.kind) {
    case ScriptedAction::Kind::Move:
      return "move";
    case ScriptedAction::Kind::Update:
      return "update";
    case ScriptedAction::Kind::SwitchSignal:
      return "switch:" + std::to_string(a.target);
    case ScriptedAction::Kind::ToggleDerailer:
      return "toggle:" + std::to_string(a.target);
  }
  return "update";
}

ScriptedAction parse_action(const json& j, const std::string& field) {
  if (!j.is_string()) fail(field, "expected an action string");
  const std::string s = j.get<std::string>();
  if (s == "move") return {ScriptedAction::Kind::Move, 0};
  if (s == "update") return {ScriptedAction::Kind::Update, 0};
  auto with_target = [&](std::string_view prefix, ScriptedAction::Kind kind) -> std::optional<ScriptedAction> {
    if (s.rfind(prefix, 0) != 0) return std::nullopt;
    const std::string rest = s.substr(prefix.size());
    std::size_t used = 0;
    int id = 0;
    try {
      id = std::stoi(rest, &used);
    } catch (const std::exception&) {
      fail(field, "bad target in \"" + s + "\"");
    }
    if (used != rest.size()) fail(field, "bad target in \"" + s + "\"");
    return ScriptedAction{kind, id};
  };
  if (auto a = with_target("switch:", ScriptedAction::Kind::SwitchSignal)) return *a;
  if (auto a = with_target("toggle:", ScriptedAction::Kind::ToggleDerailer)) return *a;
  fail(field, "expected move, update, switch:<id> or toggle:<id>, got \"" + s + "\"");
}

std::array<double, 3> parse_class_probs(const json& j, const std::array<double, 3>& def, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, path, {"stop", "permission"});
  std::array<double, 3> out = def;
  out[1] = get_double(j, "stop", def[1], path);
  out[2] = get_double(j, "permission", def[2], path);
  return out;
}

json class_probs_to_json(const std::array<double, 3>& p) { return json{{"stop", p[1]}, {"permission", p[2]}}; }

void check_probability(double p, const std::string& field) {
  if (!(p >= 0.0 && p <= 1.0)) fail(field, "probability must lie in [0, 1]");
}

}  // namespace

ConfusionModel ConfusionModel::identity() {
  ConfusionModel m;
  m.rows = {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
  return m;
}

ConfusionModel ConfusionModel::defaults() {
  ConfusionModel m;
  m.rows = {{{0.90, 0.08, 0.02}, {0.10, 0.895, 0.005}, {0.10, 0.05, 0.85}}};
  return m;
}

KnownMap map_from_signals(const std::vector<Signal>& signals, int tolerance) {
  KnownMap map;
  map.tolerance = tolerance;
  for (const auto& s : signals) map.signals.push_back({s.id, s.position});
  return map;
}

ScenarioConfig default_config() {
  ScenarioConfig cfg;
  cfg.route_length = 250;
  cfg.signals = {{0, 60, Aspect::Stop}, {1, 120, Aspect::Stop}, {2, 180, Aspect::Stop}, {3, 240, Aspect::Stop}};
  cfg.derailers = {{0, 200, false}};
  cfg.known_map = map_from_signals(cfg.signals, cfg.visibility - cfg.d_fix);
  return cfg;
}

ScenarioConfig small_preset() {
  ScenarioConfig cfg;
  cfg.route_length = 40;
  cfg.signals = {{0, 15, Aspect::Stop}, {1, 30, Aspect::Stop}};
  cfg.derailers = {{0, 22, false}};
  cfg.known_map = map_from_signals(cfg.signals, cfg.visibility - cfg.d_fix);
  cfg.perception.confusion = ConfusionModel::identity();
  cfg.shield = true;
  return cfg;
}

void validate(const ScenarioConfig& cfg) {
  if (cfg.route_length < 1) fail("route_length", "must be >= 1");

  std::set<int> signal_ids;
  std::set<int> signal_positions;
  for (std::size_t i = 0; i < cfg.signals.size(); ++i) {
    const auto& s = cfg.signals[i];
    const std::string field = "signals[" + std::to_string(i) + "]";
    if (!signal_ids.insert(s.id).second) fail(field + ".id", "duplicate signal id " + std::to_string(s.id));
    if (s.position < 1 || s.position > cfg.route_length)
      fail(field + ".position", "must lie in [1, route_length]");
    if (i > 0 && s.position <= cfg.signals[i - 1].position)
      fail(field + ".position", "signal positions must be strictly increasing");
    if (i > 0 && s.id <= cfg.signals[i - 1].id) fail(field + ".id", "signal ids must increase with position");
    signal_positions.insert(s.position);
  }

  std::set<int> derailer_ids;
  for (std::size_t i = 0; i < cfg.derailers.size(); ++i) {
    const auto& d = cfg.derailers[i];
    const std::string field = "derailers[" + std::to_string(i) + "]";
    if (!derailer_ids.insert(d.id).second) fail(field + ".id", "duplicate derailer id " + std::to_string(d.id));
    if (d.position < 1 || d.position > cfg.route_length)
      fail(field + ".position", "must lie in [1, route_length]");
    if (signal_positions.count(d.position)) fail(field + ".position", "coincides with a signal position");
  }

  for (std::size_t i = 0; i < cfg.obstacles.size(); ++i) {
    const int o = cfg.obstacles[i];
    if (o < 1 || o > cfg.route_length)
      fail("obstacles[" + std::to_string(i) + "]", "must lie in [1, route_length]");
  }

  if (cfg.known_map.tolerance < 0) fail("known_map.tolerance", "must be >= 0");
  for (std::size_t i = 0; i < cfg.known_map.signals.size(); ++i) {
    const auto& k = cfg.known_map.signals[i];
    const std::string field = "known_map.positions[" + std::to_string(i) + "]";
    if (i > 0 && k.position <= cfg.known_map.signals[i - 1].position)
      fail(field + ".position", "known positions must be strictly increasing");
    if (cfg.shield) {
      bool matches = false;
      for (const auto& s : cfg.signals) matches = matches || (s.id == k.id && s.position == k.position);
      if (!matches) fail(field, "shield requires every known position to be an actual signal position");
    }
  }

  if (cfg.visibility < 1) fail("visibility", "must be >= 1");
  if (cfg.d_fix < 0) fail("d_fix", "must be >= 0");
  check_probability(cfg.p_env, "p_env");
  if (cfg.halt_steps < 1) fail("halt_steps", "must be >= 1");
  if (cfg.max_steps < 1) fail("max_steps", "must be >= 1");

  for (int r = 0; r < 3; ++r) {
    double sum = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double p = cfg.perception.confusion.rows[r][c];
      check_probability(p, "perception.confusion[" + std::to_string(r) + "][" + std::to_string(c) + "]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      std::ostringstream msg;
      msg << "row sums to " << sum << ", expected 1";
      fail("perception.confusion[" + std::to_string(r) + "]", msg.str());
    }
  }
  for (int c = 1; c < 3; ++c) {
    check_probability(cfg.cert_model.accept_true[c], "cert_model.accept_true");
    check_probability(cfg.cert_model.accept_false[c], "cert_model.accept_false");
  }

  const auto& render = cfg.perception.cv.render;
  if (render.noise_amp < 0) fail("perception.cv.noise_amp", "must be >= 0");
  check_probability(render.occlusion_prob, "perception.cv.occlusion_prob");
  check_probability(render.distractor_prob, "perception.cv.distractor_prob");

  if (cfg.perception.mode == PerceptionMode::External) {
    const auto& ep = cfg.perception.endpoint;
    if (ep.port < 1 || ep.port > 65535) fail("perception.endpoint.port", "must lie in [1, 65535]");
    if (ep.timeout_ms < 1) fail("perception.endpoint.timeout_ms", "must be >= 1");
    if (ep.host.empty()) fail("perception.endpoint.host", "must not be empty");
  }
  if (cfg.cert_stage == CertStage::Cv && cfg.perception.mode != PerceptionMode::Cv)
    fail("cert_stage", "\"cv\" needs perception.mode \"cv\" (the checker inspects the classified frame)");

  for (std::size_t i = 0; i < cfg.actions.size(); ++i) {
    const auto& a = cfg.actions[i];
    const std::string field = "actions[" + std::to_string(i) + "]";
    if (a.kind == ScriptedAction::Kind::SwitchSignal && !signal_ids.count(a.target))
      fail(field, "no signal with id " + std::to_string(a.target));
    if (a.kind == ScriptedAction::Kind::ToggleDerailer && !derailer_ids.count(a.target))
      fail(field, "no derailer with id " + std::to_string(a.target));
  }
}

json to_json(const ScenarioConfig& cfg) {
  json j;
  j["route_length"] = cfg.route_length;
  j["signals"] = json::array();
  for (const auto& s : cfg.signals)
    j["signals"].push_back({{"id", s.id}, {"position", s.position}, {"aspect", std::string(to_string(s.aspect))}});
  j["derailers"] = json::array();
  for (const auto& d : cfg.derailers) j["derailers"].push_back({{"id", d.id}, {"position", d.position}, {"active", d.active}});
  j["obstacles"] = cfg.obstacles;
  json known = json::array();
  for (const auto& k : cfg.known_map.signals) known.push_back({{"id", k.id}, {"position", k.position}});
  j["known_map"] = {{"positions", known}, {"tolerance", cfg.known_map.tolerance}};
  j["visibility"] = cfg.visibility;
  j["d_fix"] = cfg.d_fix;
  j["p_env"] = cfg.p_env;
  j["shield"] = cfg.shield;
  j["cert"] = std::string(to_string(cfg.cert));
  j["cert_stage"] = cfg.cert_stage == CertStage::Cv ? "cv" : "stochastic";

  const auto& p = cfg.perception;
  json perception;
  perception["mode"] = std::string(to_string(p.mode));
  json rows = json::array();
  for (const auto& row : p.confusion.rows) rows.push_back(row);
  perception["confusion"] = rows;
  perception["cv"] = {
      {"noise_amp", p.cv.render.noise_amp},
      {"occlusion_prob", p.cv.render.occlusion_prob},
      {"distractor_prob", p.cv.render.distractor_prob},
      {"classifier",
       {{"threshold", p.cv.classifier.threshold},
        {"min_area", p.cv.classifier.min_area},
        {"angle_window", p.cv.classifier.angle_window_deg}}},
      {"certifier",
       {{"threshold", p.cv.certifier.threshold},
        {"min_area", p.cv.certifier.min_area},
        {"max_area", p.cv.certifier.max_area},
        {"min_elongation", p.cv.certifier.min_elongation},
        {"angle_window", p.cv.certifier.angle_window_deg}}},
  };
  perception["endpoint"] = {{"host", p.endpoint.host},
                            {"port", p.endpoint.port},
                            {"timeout_ms", p.endpoint.timeout_ms},
                            {"image_dir", p.endpoint.image_dir}};
  json script = json::array();
  for (auto c : p.script) script.push_back(std::string(to_string(c)));
  perception["script"] = script;
  j["perception"] = perception;

  j["cert_model"] = {{"accept_true", class_probs_to_json(cfg.cert_model.accept_true)},
                     {"accept_false", class_probs_to_json(cfg.cert_model.accept_false)}};
  j["halt_steps"] = cfg.halt_steps;
  j["max_steps"] = cfg.max_steps;
  j["seed"] = cfg.seed;
  json actions = json::array();
  for (const auto& a : cfg.actions) actions.push_back(action_to_string(a));
  j["actions"] = actions;
  j["mutate_ignore_signals"] = cfg.mutate_ignore_signals;
  return j;
}

ScenarioConfig config_from_json(const json& j) {
  require_object(j, "");
  reject_unknown(j, "", {"route_length", "signals", "derailers", "obstacles", "known_map", "visibility", "d_fix",
                         "p_env", "shield", "cert", "cert_stage", "perception", "cert_model", "halt_steps",
                         "max_steps", "seed", "actions", "mutate_ignore_signals"});
  const ScenarioConfig def = default_config();
  ScenarioConfig cfg;
  cfg.route_length = get_int(j, "route_length", def.route_length, "");

  if (j.contains("signals")) {
    const json& arr = j.at("signals");
    if (!arr.is_array()) fail("signals", "expected an array");
    cfg.signals.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "signals[" + std::to_string(i) + "]";
      const json& s = require_object(arr[i], path);
      reject_unknown(s, path, {"id", "position", "aspect"});
      Signal sig;
      sig.id = get_int(s, "id", static_cast<int>(i), path);
      if (!s.contains("position")) fail(path + ".position", "required");
      sig.position = get_int(s, "position", 0, path);
      sig.aspect = s.contains("aspect") ? parse_aspect(s.at("aspect"), path + ".aspect") : Aspect::Stop;
      cfg.signals.push_back(sig);
    }
  } else {
    cfg.signals = def.signals;
  }

  if (j.contains("derailers")) {
    const json& arr = j.at("derailers");
    if (!arr.is_array()) fail("derailers", "expected an array");
    cfg.derailers.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "derailers[" + std::to_string(i) + "]";
      const json& d = require_object(arr[i], path);
      reject_unknown(d, path, {"id", "position", "active"});
      Derailer der;
      der.id = get_int(d, "id", static_cast<int>(i), path);
      if (!d.contains("position")) fail(path + ".position", "required");
      der.position = get_int(d, "position", 0, path);
      der.active = get_bool(d, "active", false, path);
      cfg.derailers.push_back(der);
    }
  } else {
    cfg.derailers = def.derailers;
  }

  if (j.contains("obstacles")) {
    const json& arr = j.at("obstacles");
    if (!arr.is_array()) fail("obstacles", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number_integer()) fail("obstacles[" + std::to_string(i) + "]", "expected an integer");
      cfg.obstacles.push_back(arr[i].get<int>());
    }
  }

  cfg.visibility = get_int(j, "visibility", def.visibility, "");
  cfg.d_fix = get_int(j, "d_fix", def.d_fix, "");
  cfg.p_env = get_double(j, "p_env", def.p_env, "");
  cfg.shield = get_bool(j, "shield", def.shield, "");
  cfg.cert = parse_cert_mode(get_string(j, "cert", "off", ""), "cert");
  const std::string stage = get_string(j, "cert_stage", "stochastic", "");
  if (stage == "stochastic") {
    cfg.cert_stage = CertStage::Stochastic;
  } else if (stage == "cv") {
    cfg.cert_stage = CertStage::Cv;
  } else {
    fail("cert_stage", "expected \"stochastic\" or \"cv\", got \"" + stage + "\"");
  }

  // Default association radius spans the visibility window ahead of d_fix.
  int tolerance = std::max(0, cfg.visibility - cfg.d_fix);
  bool explicit_positions = false;
  if (j.contains("known_map")) {
    const json& km = require_object(j.at("known_map"), "known_map");
    reject_unknown(km, "known_map", {"positions", "tolerance"});
    tolerance = get_int(km, "tolerance", tolerance, "known_map");
    if (km.contains("positions")) {
      explicit_positions = true;
      const json& arr = km.at("positions");
      if (!arr.is_array()) fail("known_map.positions", "expected an array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string path = "known_map.positions[" + std::to_string(i) + "]";
        const json& k = require_object(arr[i], path);
        reject_unknown(k, path, {"id", "position"});
        if (!k.contains("id") || !k.contains("position")) fail(path, "needs id and position");
        cfg.known_map.signals.push_back({get_int(k, "id", 0, path), get_int(k, "position", 0, path)});
      }
    }
  }
  cfg.known_map.tolerance = tolerance;
  if (!explicit_positions) cfg.known_map = map_from_signals(cfg.signals, tolerance);

  if (j.contains("perception")) {
    const std::string path = "perception";
    const json& p = require_object(j.at("perception"), path);
    reject_unknown(p, path, {"mode", "confusion", "cv", "endpoint", "script"});
    cfg.perception.mode = parse_perception_mode(get_string(p, "mode", "confusion", path), "perception.mode");
    if (p.contains("confusion")) {
      const json& m = p.at("confusion");
      if (m == "identity") {
        cfg.perception.confusion = ConfusionModel::identity();
      } else {
        if (!m.is_array() || m.size() != 3) fail("perception.confusion", "expected a 3x3 array or \"identity\"");
        for (int r = 0; r < 3; ++r) {
          const std::string rp = "perception.confusion[" + std::to_string(r) + "]";
          if (!m[r].is_array() || m[r].size() != 3) fail(rp, "expected 3 entries");
          for (int c = 0; c < 3; ++c) {
            if (!m[r][c].is_number()) fail(rp + "[" + std::to_string(c) + "]", "expected a number");
            cfg.perception.confusion.rows[r][c] = m[r][c].get<double>();
          }
        }
      }
    }
    if (p.contains("cv")) {
      const std::string cp = "perception.cv";
      const json& cv = require_object(p.at("cv"), cp);
      reject_unknown(cv, cp, {"noise_amp", "occlusion_prob", "distractor_prob", "classifier", "certifier"});
      auto& r = cfg.perception.cv.render;
      r.noise_amp = get_int(cv, "noise_amp", r.noise_amp, cp);
      r.occlusion_prob = get_double(cv, "occlusion_prob", r.occlusion_prob, cp);
      r.distractor_prob = get_double(cv, "distractor_prob", r.distractor_prob, cp);
      if (cv.contains("classifier")) {
        const std::string kp = cp + ".classifier";
        const json& k = require_object(cv.at("classifier"), kp);
        reject_unknown(k, kp, {"threshold", "min_area", "angle_window"});
        auto& c = cfg.perception.cv.classifier;
        c.threshold = get_int(k, "threshold", c.threshold, kp);
        c.min_area = static_cast<std::size_t>(get_int(k, "min_area", static_cast<int>(c.min_area), kp));
        c.angle_window_deg = get_double(k, "angle_window", c.angle_window_deg, kp);
      }
      if (cv.contains("certifier")) {
        const std::string kp = cp + ".certifier";
        const json& k = require_object(cv.at("certifier"), kp);
        reject_unknown(k, kp, {"threshold", "min_area", "max_area", "min_elongation", "angle_window"});
        auto& c = cfg.perception.cv.certifier;
        c.threshold = get_int(k, "threshold", c.threshold, kp);
        c.min_area = static_cast<std::size_t>(get_int(k, "min_area", static_cast<int>(c.min_area), kp));
        c.max_area = static_cast<std::size_t>(get_int(k, "max_area", static_cast<int>(c.max_area), kp));
        c.min_elongation = get_double(k, "min_elongation", c.min_elongation, kp);
        c.angle_window_deg = get_double(k, "angle_window", c.angle_window_deg, kp);
      }
    }
    if (p.contains("endpoint")) {
      const std::string ep_path = "perception.endpoint";
      const json& e = require_object(p.at("endpoint"), ep_path);
      reject_unknown(e, ep_path, {"host", "port", "timeout_ms", "image_dir"});
      auto& ep = cfg.perception.endpoint;
      ep.host = get_string(e, "host", ep.host, ep_path);
      ep.port = get_int(e, "port", ep.port, ep_path);
      ep.timeout_ms = get_int(e, "timeout_ms", ep.timeout_ms, ep_path);
      ep.image_dir = get_string(e, "image_dir", ep.image_dir, ep_path);
    }
    if (p.contains("script")) {
      const json& arr = p.at("script");
      if (!arr.is_array()) fail("perception.script", "expected an array");
      for (std::size_t i = 0; i < arr.size(); ++i)
        cfg.perception.script.push_back(parse_class(arr[i], "perception.script[" + std::to_string(i) + "]"));
    }
  }

  if (j.contains("cert_model")) {
    const json& cm = require_object(j.at("cert_model"), "cert_model");
    reject_unknown(cm, "cert_model", {"accept_true", "accept_false"});
    if (cm.contains("accept_true"))
      cfg.cert_model.accept_true =
          parse_class_probs(cm.at("accept_true"), cfg.cert_model.accept_true, "cert_model.accept_true");
    if (cm.contains("accept_false"))
      cfg.cert_model.accept_false =
          parse_class_probs(cm.at("accept_false"), cfg.cert_model.accept_false, "cert_model.accept_false");
  }

  cfg.halt_steps = get_int(j, "halt_steps", def.halt_steps, "");
  cfg.max_steps = get_int(j, "max_steps", def.max_steps, "");
  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
      fail("seed", "expected a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  if (j.contains("actions")) {
    const json& arr = j.at("actions");
    if (!arr.is_array()) fail("actions", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i)
      cfg.actions.push_back(parse_action(arr[i], "actions[" + std::to_string(i) + "]"));
  }
  cfg.mutate_ignore_signals = get_bool(j, "mutate_ignore_signals", false, "");

  validate(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const ScenarioConfig& cfg) {
  const std::string canonical = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

std::string_view to_string(CertMode m) {
  switch (m) {
    case CertMode::Off:
      return "off";
    case CertMode::NoStop:
      return "nostop";
    case CertMode::On:
      return "on";
  }
  return "off";
}

std::string_view to_string(PerceptionMode m) {
  switch (m) {
    case PerceptionMode::Confusion:
      return "confusion";
    case PerceptionMode::Cv:
      return "cv";
    case PerceptionMode::External:
      return "external";
    case PerceptionMode::Script:
      return "script";
  }
  return "confusion";
}

}  // namespace railshield
