#pragma once

/**
 * @file external_perception.hpp
 * @brief Line-delimited JSON client for an out-of-process detector.
 *
 * One request/response pair per simulation step over a TCP stream:
 *
 *   -> {"type":"perceive","run":R,"step":K,"scene":{"train_pos":P,"visible":"stop"|"permission"|"none"[,"image":PATH]}}
 *   <- {"type":"detection","class":"stop"|"permission"|"none","confidence":C}
 */

#include <chrono>
#include <optional>
#include <string>

#include "railshield/config.hpp"
#include "railshield/perception.hpp"

namespace railshield {

std::string encode_perceive_request(const SceneContext& scene, const std::optional<std::string>& image);

struct DetectorReply {
  DetectionClass cls = DetectionClass::NoSignal;
  std::optional<double> confidence;
};

/// Throws ExternalPerceptionError (payload = line) on anything malformed.
DetectorReply decode_detection_reply(const std::string& line);

/// Blocking TCP line stream with a per-read timeout.
class LineConnection {
 public:
  LineConnection(const std::string& host, int port, std::chrono::milliseconds timeout);
  ~LineConnection();
  LineConnection(const LineConnection&) = delete;
  LineConnection& operator=(const LineConnection&) = delete;
  LineConnection(LineConnection&& other) noexcept;
  LineConnection& operator=(LineConnection&& other) noexcept;

  void send_line(const std::string& line);
  /// Reads up to the next '\n' (stripped). Throws ExternalPerceptionError on
  /// timeout or closed peer.
  std::string read_line();

 private:
  int fd_ = -1;
  std::chrono::milliseconds timeout_;
  std::string buffer_;
};

/// Sends one request and maps the reply onto DetectionClass.
DetectorReply perceive_external(const SceneContext& scene, LineConnection& connection,
                                const std::optional<std::string>& image = std::nullopt);

class ExternalSource final : public PerceptionSource {
 public:
  explicit ExternalSource(ExternalEndpoint endpoint, vision::RenderParams render = {})
      : endpoint_(std::move(endpoint)), render_(render) {}
  Perceived perceive(const SceneContext& scene, Rng& rng) override;

 private:
  ExternalEndpoint endpoint_;
  vision::RenderParams render_;
  std::optional<LineConnection> connection_;
};

}  // namespace railshield
