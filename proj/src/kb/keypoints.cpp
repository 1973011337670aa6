#include "signpipe/kb/keypoints.hpp"

#include <algorithm>
#include <cmath>

#include "signpipe/error.hpp"

namespace signpipe::kb {

using nlohmann::json;

namespace {

double number_at(const json& value, const char* what) {
  if (!value.is_number()) {
    throw Error(ErrorCode::MalformedDocument, std::string("expected number in ") + what);
  }
  return value.get<double>();
}

std::vector<double> flat_numbers(const json& array, const char* what) {
  std::vector<double> out;
  out.reserve(array.size());
  for (const auto& v : array) out.push_back(number_at(v, what));
  return out;
}

void check_count(std::size_t got, const Layout& layout) {
  if (got != layout.point_count()) {
    throw Error(ErrorCode::MalformedDocument,
                std::to_string(got) + " keypoints, layout " + layout.name() + " expects " +
                    std::to_string(layout.point_count()));
  }
}

PoseFrame from_triples(const std::vector<double>& flat, const Layout& layout) {
  if (flat.empty() || flat.size() % 3 != 0) {
    throw Error(ErrorCode::MalformedDocument,
                "flat keypoint list of length " + std::to_string(flat.size()) +
                    " is not a non-empty multiple of 3");
  }
  check_count(flat.size() / 3, layout);
  PoseFrame frame{layout, {}};
  frame.points.reserve(flat.size() / 3);
  for (std::size_t i = 0; i < flat.size(); i += 3) {
    frame.points.push_back(checked_keypoint(flat[i], flat[i + 1], flat[i + 2]));
  }
  return frame;
}

// One MediaPipe landmark given as [x, y(, c)] or {"x", "y"(, "visibility")}.
Keypoint mediapipe_point(const json& p) {
  if (p.is_array()) {
    if (p.size() == 2) return checked_keypoint(number_at(p[0], "point"), number_at(p[1], "point"), 1.0);
    if (p.size() == 3) {
      return checked_keypoint(number_at(p[0], "point"), number_at(p[1], "point"),
                              number_at(p[2], "point"));
    }
    throw Error(ErrorCode::MalformedDocument, "point array must have 2 or 3 values");
  }
  if (p.is_object()) {
    if (!p.contains("x") || !p.contains("y")) {
      throw Error(ErrorCode::MalformedDocument, "point object lacks x or y");
    }
    double c = 1.0;
    for (const char* key : {"visibility", "confidence", "c"}) {
      if (p.contains(key)) {
        c = number_at(p[key], key);
        break;
      }
    }
    return checked_keypoint(number_at(p["x"], "x"), number_at(p["y"], "y"), c);
  }
  throw Error(ErrorCode::MalformedDocument, "point must be an array or object");
}

}  // namespace

Keypoint checked_keypoint(double x, double y, double confidence) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(confidence)) {
    throw Error(ErrorCode::NonFinite, "keypoint has a NaN or infinite component");
  }
  if (confidence < -kConfidenceTolerance || confidence > 1.0 + kConfidenceTolerance) {
    throw Error(ErrorCode::OutOfRangeConfidence,
                "confidence " + std::to_string(confidence) + " outside [0, 1]");
  }
  return Keypoint{x, y, std::clamp(confidence, 0.0, 1.0)};
}

PoseFrame parse_openpose_frame(const json& doc, const Layout& layout) {
  if (doc.is_array()) return from_triples(flat_numbers(doc, "keypoint list"), layout);
  if (doc.is_object() && doc.contains("people")) {
    const auto& people = doc["people"];
    if (!people.is_array() || people.empty()) {
      throw Error(ErrorCode::MalformedDocument, "OpenPose document has no people");
    }
    const auto& person = people[0];
    std::vector<double> flat;
    for (const char* key : {"pose_keypoints_2d", "hand_left_keypoints_2d", "hand_right_keypoints_2d"}) {
      if (!person.contains(key)) continue;
      if (!person[key].is_array()) {
        throw Error(ErrorCode::MalformedDocument, std::string(key) + " is not an array");
      }
      auto part = flat_numbers(person[key], key);
      flat.insert(flat.end(), part.begin(), part.end());
    }
    return from_triples(flat, layout);
  }
  throw Error(ErrorCode::MalformedDocument, "expected a flat keypoint array or an OpenPose object");
}

PoseFrame parse_mediapipe_frame(const json& doc, const Layout& layout) {
  const json* points = &doc;
  json merged;
  if (doc.is_object()) {
    merged = json::array();
    bool any = false;
    for (const char* key : {"pose_landmarks", "left_hand_landmarks", "right_hand_landmarks"}) {
      if (!doc.contains(key)) continue;
      if (!doc[key].is_array()) {
        throw Error(ErrorCode::MalformedDocument, std::string(key) + " is not an array");
      }
      any = true;
      for (const auto& p : doc[key]) merged.push_back(p);
    }
    if (!any) throw Error(ErrorCode::MalformedDocument, "MediaPipe document has no landmark lists");
    points = &merged;
  }
  if (!points->is_array() || points->empty()) {
    throw Error(ErrorCode::MalformedDocument, "empty MediaPipe document");
  }

  PoseFrame frame{layout, {}};
  if ((*points)[0].is_number()) {
    const auto flat = flat_numbers(*points, "landmark list");
    const std::size_t n = layout.point_count();
    if (n > 0 && flat.size() == 2 * n) {
      frame.points.reserve(n);
      for (std::size_t i = 0; i < flat.size(); i += 2) {
        frame.points.push_back(checked_keypoint(flat[i], flat[i + 1], 1.0));
      }
      return frame;
    }
    return from_triples(flat, layout);
  }
  frame.points.reserve(points->size());
  for (const auto& p : *points) frame.points.push_back(mediapipe_point(p));
  check_count(frame.points.size(), layout);
  return frame;
}

}  // namespace signpipe::kb
