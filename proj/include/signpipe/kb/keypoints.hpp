#pragma once

#include <json.hpp>

#include "signpipe/kb/types.hpp"

namespace signpipe::kb {

/// Distance outside [0, 1] within which a confidence is clamped instead of
/// rejected.
inline constexpr double kConfidenceTolerance = 1e-6;

/// Parses one OpenPose frame. Accepts either a bare flat array
/// [x, y, c, x, y, c, ...] or an OpenPose output object, in which case the
/// first person's pose_keypoints_2d, hand_left_keypoints_2d and
/// hand_right_keypoints_2d arrays are concatenated in that order.
/// Keypoints keep document order; the count must equal the layout's.
PoseFrame parse_openpose_frame(const nlohmann::json& doc, const Layout& layout = Layout::openpose());

/// Parses one MediaPipe frame. Accepts a flat array of pairs or triples, an
/// array of [x, y(, c)] arrays, an array of {"x", "y"(, "visibility")}
/// objects, or an object with pose_landmarks / left_hand_landmarks /
/// right_hand_landmarks lists. Missing confidence becomes 1.0.
PoseFrame parse_mediapipe_frame(const nlohmann::json& doc,
                                const Layout& layout = Layout::mediapipe());

/// Applies the confidence bound rule: clamps within tolerance of [0, 1],
/// throws OutOfRangeConfidence beyond it and NonFinite on NaN/Inf.
Keypoint checked_keypoint(double x, double y, double confidence);

}  // namespace signpipe::kb
