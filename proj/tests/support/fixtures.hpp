#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "signpipe/kb/types.hpp"

namespace signpipe::testing {

inline kb::PoseSequence tiny_pose(double offset = 0.0, std::size_t frames = 2) {
  kb::PoseSequence pose;
  pose.fps = 25.0;
  for (std::size_t f = 0; f < frames; ++f) {
    kb::PoseFrame frame{kb::Layout::custom(2), {}};
    frame.points.push_back({offset + f, 1.0, 0.9});
    frame.points.push_back({offset + 2.0 * f, 3.5, 1.0});
    pose.frames.push_back(frame);
  }
  return pose;
}

inline kb::GlossEntry entry(std::string symbol, std::vector<double> embedding,
                            std::vector<std::string> synonyms = {}) {
  kb::GlossEntry e;
  e.symbol = std::move(symbol);
  e.pose = tiny_pose(static_cast<double>(e.symbol.size()));
  e.embedding = std::move(embedding);
  e.synonyms = std::move(synonyms);
  return e;
}

/// Unique scratch directory under the system temp dir, removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("signpipe-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace signpipe::testing
