#pragma once

/**
 * @file trace.hpp
 * @brief JSON Lines trace format and replay verification.
 *
 * Line 1 is a header
 *   {"format":"railshield-trace","version":1,"seed":S,"config_hash":H,"run":R,"config":{...}}
 * followed by one TraceRecord per step.
 */

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "railshield/simengine.hpp"

namespace railshield {

inline constexpr const char* kTraceFormat = "railshield-trace";
inline constexpr int kTraceVersion = 1;

struct TraceHeader {
  std::uint64_t seed = 0;
  std::string config_hash;
  int run = 0;
  ScenarioConfig config;
};

nlohmann::ordered_json to_json(const TraceRecord& r);
TraceRecord trace_record_from_json(const nlohmann::json& j);

std::string header_line(const TraceHeader& h);
std::string record_line(const TraceRecord& r);

void write_trace(std::ostream& os, const TraceHeader& header, const std::vector<TraceRecord>& records);

struct ParsedTrace {
  TraceHeader header;
  std::vector<std::string> lines;  ///< record lines, verbatim
  std::vector<TraceRecord> records;
};

/// Throws FormatError with "line N: ..." for the first bad line.
ParsedTrace parse_trace(std::istream& is);

struct SafetyFinding {
  int step = 0;
  SafetyId id = SafetyId::SAF1;
  bool operator==(const SafetyFinding&) const = default;
};

/**
 * Re-checks SAF1-SAF5 from the recorded states alone, without the engine's
 * transition code: consecutive positions, aspects and derailer flags are
 * enough to tell whether a move passed a Stop signal or an active derailer.
 */
std::vector<SafetyFinding> recheck_safety(const std::vector<TraceRecord>& records, const ScenarioConfig& cfg);

struct ReplayReport {
  enum class Status : std::uint8_t { Ok, ConfigMismatch, Divergence, SafetyDisagreement };
  Status status = Status::Ok;
  std::optional<int> mismatch_step;
  std::string message;
  std::vector<SafetyFinding> rechecked;

  bool ok() const { return status == Status::Ok; }
};

std::string_view to_string(ReplayReport::Status s);

/// Re-simulates from cfg and the recorded seed and compares line by line.
ReplayReport replay_verify(const ParsedTrace& trace, const ScenarioConfig& cfg);
/// Uses the config embedded in the header.
ReplayReport replay_verify(const ParsedTrace& trace);

}  // namespace railshield
