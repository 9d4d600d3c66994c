#include "railshield/signvision.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "railshield/errors.hpp"

namespace railshield::vision {

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height), pixels_(static_cast<std::size_t>(width) * height, fill) {}

void GrayImage::set(int x, int y, int value) {
  pixels_[index(x, y)] = static_cast<std::uint8_t>(std::clamp(value, 0, 255));
}

std::size_t Mask::count() const { return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), true)); }

double canonical_angle(DetectionClass c) { return c == DetectionClass::PermissionSignal ? 45.0 : 0.0; }

SignKind sign_for(DetectionClass truth) {
  switch (truth) {
    case DetectionClass::StopSignal:
      return SignKind::Sh0;
    case DetectionClass::PermissionSignal:
      return SignKind::Sh1;
    case DetectionClass::NoSignal:
      break;
  }
  return SignKind::NoneScene;
}

namespace {

constexpr int kCentre = kFrameSize / 2;
constexpr double kEdge = 1e-9;

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

bool on_bar(int x, int y, double angle_deg) {
  const double dx = x - kCentre;
  const double dy = kCentre - y;  // y up
  const double c = std::cos(radians(angle_deg));
  const double s = std::sin(radians(angle_deg));
  const double along = dx * c + dy * s;
  const double across = -dx * s + dy * c;
  return std::abs(along) <= kBarHalfLength + kEdge && std::abs(across) <= kBarHalfWidth + kEdge;
}

GrayImage render_sign(SignKind kind, int noise_amp, double occlusion_prob, double distractor_prob, Rng& rng) {
  GrayImage img(kFrameSize, kFrameSize, kBackground);

  if (kind == SignKind::Sh0 || kind == SignKind::Sh1) {
    const double angle = kind == SignKind::Sh0 ? 0.0 : 45.0;
    for (int y = 0; y < kFrameSize; ++y)
      for (int x = 0; x < kFrameSize; ++x) {
        const int dx = x - kCentre;
        const int dy = y - kCentre;
        if (dx * dx + dy * dy <= kDiscRadius * kDiscRadius) img.set(x, y, kDiscValue);
        if (on_bar(x, y, angle)) img.set(x, y, kBarValue);
      }
  } else if (rng.bernoulli(distractor_prob)) {
    const int r = rng.uniform_int(3, 6);
    const int cx = rng.uniform_int(0, kFrameSize - 1);
    const int cy = rng.uniform_int(0, kFrameSize - 1);
    for (int y = cy - r; y <= cy + r; ++y)
      for (int x = cx - r; x <= cx + r; ++x)
        if (img.contains(x, y) && (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) img.set(x, y, kBarValue);
  }

  if (rng.bernoulli(occlusion_prob)) {
    const int w = rng.uniform_int(8, 24);
    const int h = rng.uniform_int(8, 24);
    const int x0 = rng.uniform_int(0, kFrameSize - 1);
    const int y0 = rng.uniform_int(0, kFrameSize - 1);
    for (int y = y0; y < std::min(y0 + h, kFrameSize); ++y)
      for (int x = x0; x < std::min(x0 + w, kFrameSize); ++x) img.set(x, y, kBackground);
  }

  if (noise_amp > 0) {
    for (int y = 0; y < kFrameSize; ++y)
      for (int x = 0; x < kFrameSize; ++x) img.set(x, y, img.at(x, y) + rng.uniform_int(-noise_amp, noise_amp));
  }
  return img;
}

Mask threshold(const GrayImage& img, int t) {
  Mask m;
  m.width = img.width();
  m.height = img.height();
  m.bits.resize(img.pixels().size());
  const auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) m.bits[i] = px[i] >= t;
  return m;
}

std::vector<Component> connected_components(const Mask& mask) {
  std::vector<Component> out;
  std::vector<bool> seen(mask.bits.size(), false);
  std::vector<Pixel> stack;
  auto idx = [&](int x, int y) { return static_cast<std::size_t>(y) * mask.width + x; };

  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y) || seen[idx(x, y)]) continue;
      Component comp;
      seen[idx(x, y)] = true;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        comp.push_back(p);
        const Pixel nbrs[4] = {{p.x + 1, p.y}, {p.x - 1, p.y}, {p.x, p.y + 1}, {p.x, p.y - 1}};
        for (const auto& n : nbrs) {
          if (n.x < 0 || n.y < 0 || n.x >= mask.width || n.y >= mask.height) continue;
          if (!mask.at(n.x, n.y) || seen[idx(n.x, n.y)]) continue;
          seen[idx(n.x, n.y)] = true;
          stack.push_back(n);
        }
      }
      std::sort(comp.begin(), comp.end(), [](const Pixel& a, const Pixel& b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
      });
      out.push_back(std::move(comp));
    }
  return out;
}

BlobStats blob_stats(std::span<const Pixel> component) {
  if (component.empty()) throw ContractViolation("blob_stats: empty component");
  BlobStats b;
  b.area = component.size();
  const double n = static_cast<double>(b.area);
  for (const auto& p : component) {
    b.cx += p.x;
    b.cy += p.y;
  }
  b.cx /= n;
  b.cy /= n;
  double sxy = 0.0;
  for (const auto& p : component) {
    const double dx = p.x - b.cx;
    const double dy = p.y - b.cy;
    b.mu20 += dx * dx;
    b.mu02 += dy * dy;
    sxy += dx * dy;
  }
  b.mu11 = sxy == 0.0 ? 0.0 : -sxy;  // rows grow downwards; flip to y-up

  double theta = 0.5 * std::atan2(2.0 * b.mu11, b.mu20 - b.mu02) * 180.0 / std::numbers::pi;
  if (theta <= -90.0) theta += 180.0;
  b.theta_deg = theta == 0.0 ? 0.0 : theta;

  const double mean = 0.5 * (b.mu20 + b.mu02);
  const double half_diff = 0.5 * (b.mu20 - b.mu02);
  const double root = std::sqrt(half_diff * half_diff + b.mu11 * b.mu11);
  b.lambda1 = mean + root;
  b.lambda2 = std::max(0.0, mean - root);
  b.elongation = std::max(b.lambda1, kEpsilon) / std::max(b.lambda2, kEpsilon);
  return b;
}

double angle_distance_deg(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 180.0);
  return std::min(d, 180.0 - d);
}

namespace {

const Component* largest(const std::vector<Component>& comps) {
  const Component* best = nullptr;
  for (const auto& c : comps)
    if (!best || c.size() > best->size()) best = &c;
  return best;
}

}  // namespace

DetectionClass weak_classify(const GrayImage& img, const ClassifierParams& params) {
  const auto comps = connected_components(threshold(img, params.threshold));
  const Component* blob = largest(comps);
  if (!blob || blob->size() < params.min_area) return DetectionClass::NoSignal;
  const double theta = blob_stats(*blob).theta_deg;
  if (angle_distance_deg(theta, 0.0) <= params.angle_window_deg) return DetectionClass::StopSignal;
  if (angle_distance_deg(theta, 45.0) <= params.angle_window_deg) return DetectionClass::PermissionSignal;
  return DetectionClass::NoSignal;
}

bool certify(const GrayImage& img, DetectionClass claimed, const CertifierParams& params) {
  if (claimed == DetectionClass::NoSignal) throw ContractViolation("certify: nothing to certify for a NoSignal claim");
  const auto comps = connected_components(threshold(img, params.threshold));
  const Component* blob = largest(comps);
  if (!blob) return false;
  const BlobStats b = blob_stats(*blob);
  if (b.area < params.min_area || b.area > params.max_area) return false;
  if (b.elongation < params.min_elongation) return false;
  return angle_distance_deg(b.theta_deg, canonical_angle(claimed)) <= params.angle_window_deg;
}

void write_pgm(std::ostream& os, const GrayImage& img) {
  os << "P2\n" << img.width() << ' ' << img.height() << "\n255\n";
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (x) os << ' ';
      os << static_cast<int>(img.at(x, y));
    }
    os << '\n';
  }
}

std::string to_pgm(const GrayImage& img) {
  std::ostringstream os;
  write_pgm(os, img);
  return os.str();
}

GrayImage parse_pgm(const std::string& text) {
  std::size_t pos = 0;
  int line = 1;
  int token_no = 0;

  auto next_token = [&]() -> std::pair<std::string, int> {
    while (pos < text.size()) {
      const char c = text[pos];
      if (c == '#') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (c == '\n') ++line;
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    ++token_no;
    return {text.substr(start, pos - start), line};
  };
  auto bad = [&](const std::string& tok, int at_line, const std::string& why) -> FormatError {
    std::ostringstream msg;
    msg << "pgm token " << token_no << " ('" << tok << "') at line " << at_line << ": " << why;
    return FormatError(msg.str());
  };
  auto number = [&](int lo, int hi, const char* what) {
    auto [tok, at] = next_token();
    if (tok.empty()) throw bad(tok, at, std::string("unexpected end of data, expected ") + what);
    int v = 0;
    std::size_t used = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw bad(tok, at, std::string("expected ") + what);
    }
    if (used != tok.size()) throw bad(tok, at, std::string("expected ") + what);
    if (v < lo || v > hi) throw bad(tok, at, std::string(what) + " out of range");
    return v;
  };

  auto [magic, magic_line] = next_token();
  if (magic != "P2") throw bad(magic, magic_line, "expected magic number P2");
  const int w = number(1, 1 << 14, "width");
  const int h = number(1, 1 << 14, "height");
  const int maxval = number(1, 255, "maxval");
  GrayImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img.set(x, y, number(0, maxval, "pixel value"));
  auto [extra, extra_line] = next_token();
  if (!extra.empty()) throw bad(extra, extra_line, "trailing data after last pixel");
  return img;
}

}  // namespace railshield::vision
