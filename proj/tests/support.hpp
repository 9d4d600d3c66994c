#pragma once

/**
 * @file support.hpp
 * @brief Independent reference computations and fixtures shared by the tests.
 *
 * The oracles are written from the textbook definitions, deliberately not
 * by calling into the library, so a test compares two implementations.
 */

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "railshield/config.hpp"
#include "railshield/signvision.hpp"

namespace oracle {

/// Reference SplitMix64 written from the published constants.
struct SplitMix64 {
  std::uint64_t s;
  std::uint64_t operator()() {
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double unit() { return std::ldexp(static_cast<double>((*this)() >> 11), -53); }
};

/// Wilson score interval from the closed form (p + z^2/2n ± z sqrt(p(1-p)/n + z^2/4n^2)) / (1 + z^2/n).
inline std::pair<double, double> wilson(double s, double n, double z) {
  const double p = s / n;
  const double a = p + z * z / (2 * n);
  const double b = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
  const double d = 1 + z * z / n;
  double lo = (a - b) / d, hi = (a + b) / d;
  return {lo < 0 ? 0 : lo, hi > 1 ? 1 : hi};
}

/// Central moments via raw moments (m_pq), with y measured upwards.
struct Moments {
  double cx, cy, mu20, mu02, mu11, theta_deg, elongation;
};

inline Moments moments(const std::vector<std::pair<int, int>>& px) {
  double m00 = 0, m10 = 0, m01 = 0, m20 = 0, m02 = 0, m11 = 0;
  for (auto [x, yy] : px) {
    const double y = -static_cast<double>(yy);  // y-up
    m00 += 1;
    m10 += x;
    m01 += y;
    m20 += double(x) * x;
    m02 += y * y;
    m11 += x * y;
  }
  const double xb = m10 / m00, yb = m01 / m00;
  Moments m{};
  m.cx = xb;
  m.cy = -yb;
  m.mu20 = m20 - m00 * xb * xb;
  m.mu02 = m02 - m00 * yb * yb;
  m.mu11 = m11 - m00 * xb * yb;
  double t = 0.5 * std::atan2(2 * m.mu11, m.mu20 - m.mu02) * 180.0 / M_PI;
  if (t <= -90.0) t += 180.0;
  m.theta_deg = t;
  const double h = (m.mu20 + m.mu02) / 2, r = std::sqrt(std::pow((m.mu20 - m.mu02) / 2, 2) + m.mu11 * m.mu11);
  const double l1 = std::max(h + r, 1e-9), l2 = std::max(h - r, 1e-9);
  m.elongation = l1 / l2;
  return m;
}

/// Reference ground-truth predicates of the renderer's geometry.
inline bool on_disc(int x, int y) { return (x - 32) * (x - 32) + (y - 32) * (y - 32) <= 24 * 24; }

inline bool on_bar(int x, int y, double deg) {
  const double a = deg * M_PI / 180.0;
  const double dx = x - 32.0, dy = 32.0 - y;  // y-up
  const double along = dx * std::cos(a) + dy * std::sin(a);
  const double across = -dx * std::sin(a) + dy * std::cos(a);
  return std::abs(along) <= 18.0 + 1e-9 && std::abs(across) <= 4.0 + 1e-9;
}

/// Authority by brute force: walk forward until a blocking element.
inline int authority(int pos, int route, const std::vector<int>& blockers) {
  int ma = 0;
  for (int p = pos + 1; p <= route; ++p) {
    bool blocked = false;
    for (int q : blockers) blocked |= (q == p);
    if (blocked) break;
    ++ma;
  }
  return ma;
}

}  // namespace oracle

namespace fixtures {

inline railshield::ScenarioConfig one_signal(int position, railshield::Aspect aspect, int route = 100) {
  railshield::ScenarioConfig cfg;
  cfg.route_length = route;
  cfg.signals = {{0, position, aspect}};
  cfg.known_map = railshield::map_from_signals(cfg.signals, cfg.visibility - cfg.d_fix);
  cfg.perception.confusion = railshield::ConfusionModel::identity();
  return cfg;
}

/// Two signals and one derailer, the layout the worldmodel examples use.
inline railshield::ScenarioConfig two_signals_one_derailer() {
  railshield::ScenarioConfig cfg;
  cfg.route_length = 100;
  cfg.signals = {{0, 60, railshield::Aspect::Stop}, {1, 80, railshield::Aspect::Permission}};
  cfg.derailers = {{0, 20, false}};
  cfg.known_map = railshield::map_from_signals(cfg.signals, 5);
  return cfg;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("railshield_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fixtures
