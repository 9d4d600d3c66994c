#include "railshield/external_perception.hpp"

#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "railshield/errors.hpp"

namespace railshield {

using nlohmann::json;

std::string encode_perceive_request(const SceneContext& scene, const std::optional<std::string>& image) {
  nlohmann::ordered_json scene_j;
  scene_j["train_pos"] = scene.train_pos;
  scene_j["visible"] = std::string(to_string(scene.truth));
  if (image) scene_j["image"] = *image;
  nlohmann::ordered_json req;
  req["type"] = "perceive";
  req["run"] = scene.run;
  req["step"] = scene.step;
  req["scene"] = scene_j;
  return req.dump();
}

DetectorReply decode_detection_reply(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ExternalPerceptionError(std::string("detector reply is not JSON: ") + e.what(), line);
  }
  if (!j.is_object()) throw ExternalPerceptionError("detector reply is not an object", line);
  if (j.value("type", "") != "detection")
    throw ExternalPerceptionError("detector reply has no \"type\":\"detection\"", line);
  if (!j.contains("class") || !j["class"].is_string())
    throw ExternalPerceptionError("detector reply lacks a class string", line);
  auto cls = detection_class_from_string(j["class"].get<std::string>());
  if (!cls) throw ExternalPerceptionError("detector reply has unknown class", line);

  DetectorReply reply;
  reply.cls = *cls;
  if (j.contains("confidence")) {
    const auto& c = j["confidence"];
    if (!c.is_number() || c.get<double>() < 0.0 || c.get<double>() > 1.0)
      throw ExternalPerceptionError("detector confidence must be a number in [0, 1]", line);
    reply.confidence = c.get<double>();
  }
  return reply;
}

LineConnection::LineConnection(const std::string& host, int port, std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string port_s = std::to_string(port);
  if (int rc = ::getaddrinfo(host.c_str(), port_s.c_str(), &hints, &res); rc != 0)
    throw ExternalPerceptionError("cannot resolve " + host + ": " + ::gai_strerror(rc));

  std::string last_error = "no address";
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      fd_ = fd;
      break;
    }
    last_error = std::strerror(errno);
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (fd_ < 0) throw ExternalPerceptionError("cannot connect to " + host + ":" + port_s + ": " + last_error);
}

LineConnection::~LineConnection() {
  if (fd_ >= 0) ::close(fd_);
}

LineConnection::LineConnection(LineConnection&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), timeout_(other.timeout_), buffer_(std::move(other.buffer_)) {}

LineConnection& LineConnection::operator=(LineConnection&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = std::exchange(other.fd_, -1);
    timeout_ = other.timeout_;
    buffer_ = std::move(other.buffer_);
  }
  return *this;
}

void LineConnection::send_line(const std::string& line) {
  const std::string data = line + "\n";
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ExternalPerceptionError(std::string("send failed: ") + std::strerror(errno));
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::string LineConnection::read_line() {
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  for (;;) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    const auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0)
      throw ExternalPerceptionError("detector timed out after " + std::to_string(timeout_.count()) + " ms", buffer_);
    pollfd pfd{fd_, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw ExternalPerceptionError(std::string("poll failed: ") + std::strerror(errno));
    }
    if (rc == 0) continue;
    char chunk[4096];
    const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ExternalPerceptionError(std::string("recv failed: ") + std::strerror(errno), buffer_);
    }
    if (n == 0) throw ExternalPerceptionError("detector closed the connection", buffer_);
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

DetectorReply perceive_external(const SceneContext& scene, LineConnection& connection,
                                const std::optional<std::string>& image) {
  connection.send_line(encode_perceive_request(scene, image));
  return decode_detection_reply(connection.read_line());
}

Perceived ExternalSource::perceive(const SceneContext& scene, Rng& rng) {
  if (!connection_)
    connection_.emplace(endpoint_.host, endpoint_.port, std::chrono::milliseconds(endpoint_.timeout_ms));

  Perceived p;
  std::optional<std::string> image_path;
  if (!endpoint_.image_dir.empty()) {
    p.frame = vision::render_sign(vision::sign_for(scene.truth), render_, rng);
    const auto path = std::filesystem::path(endpoint_.image_dir) /
                      ("run" + std::to_string(scene.run) + "_step" + std::to_string(scene.step) + ".pgm");
    std::ofstream out(path);
    if (!out) throw ExternalPerceptionError("cannot write frame " + path.string());
    vision::write_pgm(out, *p.frame);
    image_path = path.string();
  }
  const DetectorReply reply = perceive_external(scene, *connection_, image_path);
  p.detected = reply.cls;
  p.confidence = reply.confidence;
  return p;
}

}  // namespace railshield
