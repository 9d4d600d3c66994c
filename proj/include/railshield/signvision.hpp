#pragma once

/**
 * @file signvision.hpp
 * @brief Synthetic Sh0/Sh1 sign frames, a weak pixel classifier and the
 *        moments-based feature checker that certifies its output.
 *
 * Coordinates: pixel (x, y) is column x, row y, origin top-left. Orientation
 * is measured counter-clockwise from the +x axis with y pointing *up*, so the
 * Sh1 bar (running lower-left to upper-right on screen) sits at +45 degrees.
 * Centroids are reported in pixel coordinates; mu11 is taken in the y-up frame.
 */

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "railshield/detection.hpp"
#include "railshield/rng.hpp"

namespace railshield::vision {

class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, std::uint8_t fill = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }
  void set(int x, int y, int value);  ///< clamps to 0..255

  std::span<const std::uint8_t> pixels() const { return pixels_; }

  bool operator==(const GrayImage&) const = default;

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

struct Pixel {
  int x = 0;
  int y = 0;
  bool operator==(const Pixel&) const = default;
};

/// Binary mask, row-major, same geometry as the source image.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<bool> bits;

  bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x]; }
  std::size_t count() const;
};

using Component = std::vector<Pixel>;

struct BlobStats {
  std::size_t area = 0;
  double cx = 0.0;
  double cy = 0.0;
  double mu20 = 0.0;
  double mu02 = 0.0;
  double mu11 = 0.0;  ///< y-up frame
  double theta_deg = 0.0;   ///< in (-90, 90]
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double elongation = 1.0;  ///< lambda1 / lambda2, both floored at kEpsilon
};

inline constexpr double kEpsilon = 1e-9;

enum class SignKind : std::uint8_t { Sh0, Sh1, NoneScene };

struct RenderParams {
  int noise_amp = 10;
  double occlusion_prob = 0.1;
  double distractor_prob = 0.3;

  bool operator==(const RenderParams&) const = default;
};

struct ClassifierParams {
  int threshold = 150;
  std::size_t min_area = 30;
  double angle_window_deg = 22.5;

  bool operator==(const ClassifierParams&) const = default;
};

struct CertifierParams {
  int threshold = 128;
  std::size_t min_area = 60;
  std::size_t max_area = 600;
  double min_elongation = 3.0;
  double angle_window_deg = 15.0;

  bool operator==(const CertifierParams&) const = default;
};

// Fixed render geometry.
inline constexpr int kFrameSize = 64;
inline constexpr int kBackground = 20;
inline constexpr int kDiscValue = 60;
inline constexpr int kBarValue = 230;
inline constexpr double kDiscRadius = 24.0;
inline constexpr double kBarHalfWidth = 4.0;
inline constexpr double kBarHalfLength = 18.0;

/// Canonical bar angle for a claimed class: 0 for Stop, 45 for Permission.
double canonical_angle(DetectionClass c);
SignKind sign_for(DetectionClass truth);

/// Point-on-bar predicate for a bar through the frame centre at angle_deg.
bool on_bar(int x, int y, double angle_deg);

GrayImage render_sign(SignKind kind, int noise_amp, double occlusion_prob, double distractor_prob, Rng& rng);
inline GrayImage render_sign(SignKind kind, const RenderParams& p, Rng& rng) {
  return render_sign(kind, p.noise_amp, p.occlusion_prob, p.distractor_prob, rng);
}

Mask threshold(const GrayImage& img, int t);

/// 4-connected components in row-major order of their first pixel.
std::vector<Component> connected_components(const Mask& mask);

/// Throws ContractViolation on an empty component.
BlobStats blob_stats(std::span<const Pixel> component);

/// Absolute angular distance between two orientations, modulo 180 degrees.
double angle_distance_deg(double a, double b);

DetectionClass weak_classify(const GrayImage& img, const ClassifierParams& params = {});
bool certify(const GrayImage& img, DetectionClass claimed, const CertifierParams& params = {});

/// Plain PGM (P2): "P2\n<w> <h>\n255\n" then one space-separated row per line.
std::string to_pgm(const GrayImage& img);
void write_pgm(std::ostream& os, const GrayImage& img);
/// Throws FormatError naming the first bad token.
GrayImage parse_pgm(const std::string& text);

}  // namespace railshield::vision
