#include "signpipe/perturb/motion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "signpipe/error.hpp"

namespace signpipe::perturb {

double landmark_speed(const kb::Keypoint& prev, const kb::Keypoint& curr) noexcept {
  const double dx = curr.x - prev.x;
  const double dy = curr.y - prev.y;
  return std::sqrt(dx * dx + dy * dy);
}

namespace {

void rasterize(MotionMask& mask, const kb::Keypoint& p, double radius) {
  const auto h = static_cast<double>(mask.height());
  const auto w = static_cast<double>(mask.width());

  const double rx = std::round(p.x);
  const double ry = std::round(p.y);
  if (rx >= 0 && rx < w && ry >= 0 && ry < h) mask.set(static_cast<std::size_t>(ry), static_cast<std::size_t>(rx));

  const double x0 = std::max(0.0, std::ceil(p.x - radius));
  const double x1 = std::min(w - 1, std::floor(p.x + radius));
  const double y0 = std::max(0.0, std::ceil(p.y - radius));
  const double y1 = std::min(h - 1, std::floor(p.y + radius));
  for (double y = y0; y <= y1; ++y) {
    for (double x = x0; x <= x1; ++x) {
      const double dx = x - p.x;
      const double dy = y - p.y;
      if (std::sqrt(dx * dx + dy * dy) <= radius) mask.set(static_cast<std::size_t>(y), static_cast<std::size_t>(x));
    }
  }
}

}  // namespace

std::vector<MotionMask> fast_motion_mask(const VideoClip& clip, double theta, double radius) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw Error(ErrorCode::InvalidConfig, "theta must be positive");
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw Error(ErrorCode::InvalidConfig, "radius must be >= 0");
  if (!clip.landmarks) throw Error(ErrorCode::MissingLandmarks, "clip has no landmark track");
  if (clip.frames.size() < 2) throw Error(ErrorCode::TooShort, "need at least 2 frames for motion");
  clip.check();

  const auto shape = clip.shape();
  const auto& track = *clip.landmarks;
  std::vector<MotionMask> masks(clip.frames.size(), MotionMask(shape.height, shape.width));
  for (std::size_t t = 1; t < track.size(); ++t) {
    if (track[t].size() != track[t - 1].size()) {
      throw Error(ErrorCode::ShapeMismatch, "frame " + std::to_string(t) + " has " +
                                                std::to_string(track[t].size()) + " landmarks, previous has " +
                                                std::to_string(track[t - 1].size()));
    }
    for (std::size_t i = 0; i < track[t].size(); ++i) {
      if (landmark_speed(track[t - 1][i], track[t][i]) > theta) rasterize(masks[t], track[t][i], radius);
    }
  }
  return masks;
}

}  // namespace signpipe::perturb
