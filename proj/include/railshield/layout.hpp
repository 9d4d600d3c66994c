#pragma once

/**
 * @file layout.hpp
 * @brief Static track elements of the linear shunting route.
 */

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace railshield {

/// Signal aspect. Stop is sign Sh0, Permission is sign Sh1.
enum class Aspect : std::uint8_t { Stop, Permission };

struct Signal {
  int id = 0;
  int position = 1;  ///< route units, 1..route_length
  Aspect aspect = Aspect::Stop;

  bool operator==(const Signal&) const = default;
};

struct Derailer {
  int id = 0;
  int position = 1;
  bool active = false;

  bool operator==(const Derailer&) const = default;
};

struct KnownSignal {
  int id = 0;
  int position = 0;

  bool operator==(const KnownSignal&) const = default;
};

/// The signal map the controller is allowed to trust.
struct KnownMap {
  std::vector<KnownSignal> signals;
  int tolerance = 5;  ///< association radius in route units

  bool operator==(const KnownMap&) const = default;
};

std::string_view to_string(Aspect a);
std::optional<Aspect> aspect_from_string(std::string_view s);

}  // namespace railshield
