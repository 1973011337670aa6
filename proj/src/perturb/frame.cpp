#include "signpipe/perturb/frame.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "signpipe/error.hpp"

namespace signpipe::perturb {

namespace {

void check_shape(const FrameShape& shape) {
  if (shape.height == 0 || shape.width == 0) throw Error(ErrorCode::InvalidConfig, "frame dimensions must be positive");
  if (shape.channels != 1 && shape.channels != 3) {
    throw Error(ErrorCode::InvalidConfig, "frames have 1 or 3 channels, got " + std::to_string(shape.channels));
  }
}

}  // namespace

FrameGrid::FrameGrid(FrameShape shape) : shape_(shape) {
  check_shape(shape_);
  values_.assign(shape_.values(), 0.0f);
}

FrameGrid::FrameGrid(FrameShape shape, std::vector<float> values) : shape_(shape), values_(std::move(values)) {
  check_shape(shape_);
  if (values_.size() != shape_.values()) {
    throw Error(ErrorCode::ShapeMismatch, std::to_string(values_.size()) + " values for a " +
                                              std::to_string(shape_.height) + "x" + std::to_string(shape_.width) +
                                              "x" + std::to_string(shape_.channels) + " frame");
  }
  for (float v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "frame value is NaN or infinite");
    if (v < 0.0f || v > 1.0f) throw Error(ErrorCode::ValueOutOfRange, "frame value outside [0, 1]");
  }
}

void VideoClip::check() const {
  if (frames.empty()) throw Error(ErrorCode::EmptyInput, "clip has no frames");
  const auto shape = frames.front().shape();
  for (std::size_t t = 1; t < frames.size(); ++t) {
    if (!(frames[t].shape() == shape)) {
      throw Error(ErrorCode::ShapeMismatch, "frame " + std::to_string(t) + " differs in shape from frame 0");
    }
  }
  if (landmarks && landmarks->size() != frames.size()) {
    throw Error(ErrorCode::ShapeMismatch, std::to_string(landmarks->size()) + " landmark frames for " +
                                              std::to_string(frames.size()) + " video frames");
  }
}

std::size_t MotionMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

MotionMask MotionMask::complement() const {
  MotionMask out(height_, width_);
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] ? 0 : 1;
  return out;
}

std::vector<std::uint32_t> MotionMask::indices() const {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

}  // namespace signpipe::perturb
