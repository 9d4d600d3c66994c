#pragma once

#include <stdexcept>
#include <string>

namespace railshield {

/// A caller broke an operation's precondition (e.g. applying a disabled event).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Invalid scenario configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed trace, PGM or protocol text.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// External detector failed (timeout, connection, malformed reply).
class ExternalPerceptionError : public std::runtime_error {
 public:
  ExternalPerceptionError(const std::string& what, std::string payload = {})
      : std::runtime_error(what), payload_(std::move(payload)) {}

  /// Raw reply text, if any, kept for diagnostics.
  const std::string& payload() const { return payload_; }

 private:
  std::string payload_;
};

}  // namespace railshield
