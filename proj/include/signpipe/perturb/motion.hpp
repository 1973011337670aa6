#pragma once

#include <vector>

#include "signpipe/perturb/frame.hpp"

namespace signpipe::perturb {

/// Euclidean displacement of one landmark between consecutive frames,
/// in pixels per frame.
double landmark_speed(const kb::Keypoint& prev, const kb::Keypoint& curr) noexcept;

/// Fast-motion masks, one per frame. For t > 0 a pixel (x, y) is in M_t when
/// some landmark i of frame t moved faster than theta since frame t-1 and
/// (x, y) lies within radius of its unrounded position. The landmark's own
/// rounded pixel is always included. Frame 0 has no predecessor and gets an
/// empty mask. Landmark i of frame t is paired with landmark i of frame t-1.
///
/// Throws MissingLandmarks, TooShort (< 2 frames), InvalidConfig
/// (theta <= 0, radius < 0) and ShapeMismatch (landmark counts differ
/// between consecutive frames).
std::vector<MotionMask> fast_motion_mask(const VideoClip& clip, double theta, double radius);

}  // namespace signpipe::perturb
