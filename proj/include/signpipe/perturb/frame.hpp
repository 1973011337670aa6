#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "signpipe/kb/types.hpp"

namespace signpipe::perturb {

struct FrameShape {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 1;

  std::size_t pixels() const noexcept { return height * width; }
  std::size_t values() const noexcept { return height * width * channels; }
  bool operator==(const FrameShape&) const = default;
};

/// Dense H x W x C image, row-major with interleaved channels, values in [0, 1].
class FrameGrid {
 public:
  FrameGrid() = default;
  /// Zero-filled. Throws InvalidConfig for empty dimensions or C not in {1, 3}.
  explicit FrameGrid(FrameShape shape);
  /// Throws ShapeMismatch, NonFinite or ValueOutOfRange.
  FrameGrid(FrameShape shape, std::vector<float> values);

  const FrameShape& shape() const noexcept { return shape_; }
  std::size_t height() const noexcept { return shape_.height; }
  std::size_t width() const noexcept { return shape_.width; }
  std::size_t channels() const noexcept { return shape_.channels; }

  std::span<float> values() noexcept { return values_; }
  std::span<const float> values() const noexcept { return values_; }

  float& at(std::size_t y, std::size_t x, std::size_t c = 0) { return values_[index(y, x, c)]; }
  float at(std::size_t y, std::size_t x, std::size_t c = 0) const { return values_[index(y, x, c)]; }

  /// Channels of the pixel with linear index y * W + x.
  std::span<float> pixel(std::size_t linear) noexcept {
    return std::span<float>(values_).subspan(linear * shape_.channels, shape_.channels);
  }
  std::span<const float> pixel(std::size_t linear) const noexcept {
    return std::span<const float>(values_).subspan(linear * shape_.channels, shape_.channels);
  }

  bool operator==(const FrameGrid&) const = default;

 private:
  std::size_t index(std::size_t y, std::size_t x, std::size_t c) const noexcept {
    return (y * shape_.width + x) * shape_.channels + c;
  }

  FrameShape shape_;
  std::vector<float> values_;
};

using Landmarks = std::vector<kb::Keypoint>;

struct VideoClip {
  std::vector<FrameGrid> frames;
  /// One landmark list per frame when present.
  std::optional<std::vector<Landmarks>> landmarks;

  /// Throws ShapeMismatch if frames differ in shape or the landmark track
  /// length differs from the frame count; EmptyInput for no frames.
  void check() const;
  FrameShape shape() const { return frames.empty() ? FrameShape{} : frames.front().shape(); }

  bool operator==(const VideoClip&) const = default;
};

/// Per-pixel membership grid for one frame.
class MotionMask {
 public:
  MotionMask() = default;
  MotionMask(std::size_t height, std::size_t width) : height_(height), width_(width), bits_(height * width, 0) {}

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }

  bool contains(std::size_t y, std::size_t x) const { return bits_[y * width_ + x] != 0; }
  void set(std::size_t y, std::size_t x, bool on = true) { bits_[y * width_ + x] = on ? 1 : 0; }
  bool contains_linear(std::size_t i) const { return bits_[i] != 0; }

  std::size_t count() const noexcept;
  bool empty() const noexcept { return count() == 0; }
  MotionMask complement() const;
  /// Linear indices (y * W + x) of member pixels, ascending.
  std::vector<std::uint32_t> indices() const;

  bool operator==(const MotionMask&) const = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<std::uint8_t> bits_;
};

}  // namespace signpipe::perturb
