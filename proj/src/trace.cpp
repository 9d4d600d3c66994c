#include "railshield/trace.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "railshield/errors.hpp"

namespace railshield {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <typename E, std::size_t N>
E parse_enum(const std::string& s, const std::array<E, N>& values, const char* what) {
  for (E v : values)
    if (to_string(v) == s) return v;
  throw FormatError(std::string("unknown ") + what + " \"" + s + "\"");
}

constexpr std::array kStatuses = {RunStatus::Running, RunStatus::ReachedEnd, RunStatus::HaltedAtStop,
                                  RunStatus::Stalled, RunStatus::Violation, RunStatus::Aborted};
constexpr std::array kSafety = {SafetyId::SAF1, SafetyId::SAF2, SafetyId::SAF3, SafetyId::SAF4, SafetyId::SAF5};
constexpr std::array kConfirmations = {Confirmation::Unconfirmed, Confirmation::ConfirmedPermission,
                                       Confirmation::ConfirmedStop};
constexpr std::array kVerdicts = {ShieldVerdict::Forwarded, ShieldVerdict::Ignored};

DetectionClass class_of(const json& j) {
  auto c = detection_class_from_string(j.get<std::string>());
  if (!c) throw FormatError("unknown detection class \"" + j.get<std::string>() + "\"");
  return *c;
}

}  // namespace

ordered_json to_json(const TraceRecord& r) {
  ordered_json j;
  j["run"] = r.run;
  j["step"] = r.step;
  j["event"] = r.event;
  j["action"] = r.action;
  if (r.detection) {
    const auto& d = *r.detection;
    ordered_json dj;
    dj["class"] = std::string(to_string(d.cls));
    dj["true_class"] = std::string(to_string(d.true_class));
    dj["correct"] = d.correct;
    dj["cert_accepted"] = d.cert_accepted;
    dj["shield_verdict"] = d.shield_verdict ? ordered_json(std::string(to_string(*d.shield_verdict))) : ordered_json();
    dj["reported_position"] = d.reported_position;
    if (d.confidence) dj["confidence"] = *d.confidence;
    j["detection"] = dj;
  } else {
    j["detection"] = nullptr;
  }
  ordered_json st;
  st["pos"] = r.state.pos;
  st["ma"] = r.state.ma;
  st["aspects"] = ordered_json::array();
  for (auto a : r.state.aspects) st["aspects"].push_back(std::string(to_string(a)));
  st["derailers"] = ordered_json::array();
  for (bool d : r.state.derailers) st["derailers"].push_back(d);
  st["confirmations"] = ordered_json::array();
  for (auto c : r.state.confirmations) st["confirmations"].push_back(std::string(to_string(c)));
  st["phantoms"] = ordered_json::array();
  for (const auto& p : r.state.phantoms)
    st["phantoms"].push_back(ordered_json::array({p.position, std::string(to_string(p.aspect))}));
  st["status"] = std::string(to_string(r.state.status));
  st["violation"] = r.state.violation ? ordered_json(std::string(to_string(*r.state.violation))) : ordered_json();
  j["state"] = st;
  return j;
}

TraceRecord trace_record_from_json(const json& j) {
  try {
    TraceRecord r;
    r.run = j.at("run").get<int>();
    r.step = j.at("step").get<int>();
    r.event = j.at("event").get<std::string>();
    r.action = j.at("action").get<std::string>();
    const json& dj = j.at("detection");
    if (!dj.is_null()) {
      TraceDetection d;
      d.cls = class_of(dj.at("class"));
      d.true_class = class_of(dj.at("true_class"));
      d.correct = dj.at("correct").get<bool>();
      d.cert_accepted = dj.at("cert_accepted").get<bool>();
      if (!dj.at("shield_verdict").is_null())
        d.shield_verdict = parse_enum(dj.at("shield_verdict").get<std::string>(), kVerdicts, "shield verdict");
      d.reported_position = dj.at("reported_position").get<int>();
      if (dj.contains("confidence")) d.confidence = dj.at("confidence").get<double>();
      r.detection = d;
    }
    const json& st = j.at("state");
    r.state.pos = st.at("pos").get<int>();
    r.state.ma = st.at("ma").get<int>();
    for (const auto& a : st.at("aspects")) {
      auto asp = aspect_from_string(a.get<std::string>());
      if (!asp) throw FormatError("unknown aspect \"" + a.get<std::string>() + "\"");
      r.state.aspects.push_back(*asp);
    }
    for (const auto& d : st.at("derailers")) r.state.derailers.push_back(d.get<bool>());
    for (const auto& c : st.at("confirmations"))
      r.state.confirmations.push_back(parse_enum(c.get<std::string>(), kConfirmations, "confirmation"));
    for (const auto& p : st.at("phantoms")) {
      auto asp = aspect_from_string(p.at(1).get<std::string>());
      if (!asp) throw FormatError("unknown phantom aspect");
      r.state.phantoms.push_back({p.at(0).get<int>(), *asp});
    }
    r.state.status = parse_enum(st.at("status").get<std::string>(), kStatuses, "status");
    if (!st.at("violation").is_null())
      r.state.violation = parse_enum(st.at("violation").get<std::string>(), kSafety, "safety property");
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad trace record: ") + e.what());
  }
}

std::string header_line(const TraceHeader& h) {
  ordered_json j;
  j["format"] = kTraceFormat;
  j["version"] = kTraceVersion;
  j["seed"] = h.seed;
  j["config_hash"] = h.config_hash;
  j["run"] = h.run;
  j["config"] = to_json(h.config);
  return j.dump();
}

std::string record_line(const TraceRecord& r) { return to_json(r).dump(); }

void write_trace(std::ostream& os, const TraceHeader& header, const std::vector<TraceRecord>& records) {
  os << header_line(header) << '\n';
  for (const auto& r : records) os << record_line(r) << '\n';
}

ParsedTrace parse_trace(std::istream& is) {
  ParsedTrace out;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& why) { return FormatError("line " + std::to_string(line_no) + ": " + why); };

  if (!std::getline(is, line)) throw FormatError("line 1: empty trace");
  line_no = 1;
  json h;
  try {
    h = json::parse(line);
    if (h.value("format", "") != kTraceFormat) throw fail("not a railshield-trace header");
    if (h.value("version", -1) != kTraceVersion) throw fail("unsupported trace version");
    out.header.seed = h.at("seed").get<std::uint64_t>();
    out.header.config_hash = h.at("config_hash").get<std::string>();
    out.header.run = h.value("run", 0);
  } catch (const json::exception& e) {
    throw fail(e.what());
  }
  try {
    out.header.config = config_from_json(h.at("config"));
  } catch (const ConfigError& e) {
    throw fail(std::string("embedded config: ") + e.what());
  } catch (const json::exception& e) {
    throw fail(std::string("embedded config: ") + e.what());
  }

  int last_step = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    TraceRecord rec;
    try {
      rec = trace_record_from_json(json::parse(line));
    } catch (const json::exception& e) {
      throw fail(e.what());
    } catch (const FormatError& e) {
      throw fail(e.what());
    }
    if (rec.step <= last_step) throw fail("steps must be strictly increasing");
    last_step = rec.step;
    out.lines.push_back(line);
    out.records.push_back(std::move(rec));
  }
  return out;
}

std::vector<SafetyFinding> recheck_safety(const std::vector<TraceRecord>& records, const ScenarioConfig& cfg) {
  std::vector<SafetyFinding> out;
  int prev_pos = 0;
  for (const auto& r : records) {
    const int pos = r.state.pos;
    auto flag = [&](SafetyId id) { out.push_back({r.step, id}); };

    if (pos > prev_pos) {
      for (std::size_t i = 0; i < cfg.signals.size() && i < r.state.aspects.size(); ++i) {
        const int q = cfg.signals[i].position;
        if (prev_pos < q && q <= pos && r.state.aspects[i] == Aspect::Stop) {
          flag(SafetyId::SAF1);
          break;
        }
      }
      for (std::size_t i = 0; i < cfg.derailers.size() && i < r.state.derailers.size(); ++i) {
        const int q = cfg.derailers[i].position;
        if (prev_pos < q && q <= pos && r.state.derailers[i]) {
          flag(SafetyId::SAF2);
          break;
        }
      }
    }
    if (pos > cfg.route_length) flag(SafetyId::SAF3);
    // One step moves the train by at most one unit, never backwards.
    if (pos - prev_pos > 1 || pos < prev_pos) flag(SafetyId::SAF4);
    if (std::find(cfg.obstacles.begin(), cfg.obstacles.end(), pos) != cfg.obstacles.end()) flag(SafetyId::SAF5);
    prev_pos = pos;
  }
  return out;
}

std::string_view to_string(ReplayReport::Status s) {
  switch (s) {
    case ReplayReport::Status::Ok:
      return "ok";
    case ReplayReport::Status::ConfigMismatch:
      return "config mismatch";
    case ReplayReport::Status::Divergence:
      return "divergence";
    case ReplayReport::Status::SafetyDisagreement:
      return "safety disagreement";
  }
  return "?";
}

ReplayReport replay_verify(const ParsedTrace& trace, const ScenarioConfig& cfg) {
  ReplayReport report;
  const std::string hash = config_hash(cfg);
  if (hash != trace.header.config_hash) {
    report.status = ReplayReport::Status::ConfigMismatch;
    report.message = "trace was recorded with config " + trace.header.config_hash + ", replaying with " + hash;
    return report;
  }

  const RunOutput again = run(cfg, trace.header.seed, {trace.header.run, true});
  const std::size_t n = std::max(again.trace.size(), trace.lines.size());
  for (std::size_t i = 0; i < n; ++i) {
    const bool have_recorded = i < trace.lines.size();
    const bool have_replayed = i < again.trace.size();
    if (have_recorded && have_replayed && record_line(again.trace[i]) == trace.lines[i]) continue;
    report.status = ReplayReport::Status::Divergence;
    report.mismatch_step = have_recorded ? trace.records[i].step : again.trace[i].step;
    if (!have_recorded) {
      report.message = "trace ends early; replay continues";
    } else if (!have_replayed) {
      report.message = "trace has records beyond the replayed run's end";
    } else {
      report.message = "recorded:  " + trace.lines[i] + "\nreplayed:  " + record_line(again.trace[i]);
    }
    return report;
  }

  report.rechecked = recheck_safety(trace.records, cfg);
  std::vector<SafetyFinding> recorded;
  for (const auto& r : trace.records)
    if (r.state.violation) recorded.push_back({r.step, *r.state.violation});
  const bool agree =
      recorded.empty() ? report.rechecked.empty()
                       : (!report.rechecked.empty() && report.rechecked.front() == recorded.front());
  if (!agree) {
    report.status = ReplayReport::Status::SafetyDisagreement;
    report.mismatch_step = !recorded.empty() ? recorded.front().step : report.rechecked.front().step;
    report.message = "independent safety re-check disagrees with the recorded verdict";
  }
  return report;
}

ReplayReport replay_verify(const ParsedTrace& trace) { return replay_verify(trace, trace.header.config); }

}  // namespace railshield
