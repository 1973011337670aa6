#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace signpipe::kb {

struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double confidence = 0.0;

  bool operator==(const Keypoint&) const = default;
};

/// Skeleton rig of a frame. Custom carries its own point count.
class Layout {
 public:
  enum class Kind { OpenPoseBody25Hands, MediaPipeHolistic, Custom };

  static constexpr std::size_t kOpenPosePoints = 25 + 2 * 21;
  static constexpr std::size_t kMediaPipePoints = 33 + 2 * 21;

  static Layout openpose() { return Layout(Kind::OpenPoseBody25Hands, kOpenPosePoints); }
  static Layout mediapipe() { return Layout(Kind::MediaPipeHolistic, kMediaPipePoints); }
  static Layout custom(std::size_t n) { return Layout(Kind::Custom, n); }

  /// "openpose_body25_hands", "mediapipe_holistic" or "custom:<n>".
  static Layout parse(std::string_view name);
  std::string name() const;

  Kind kind() const noexcept { return kind_; }
  std::size_t point_count() const noexcept { return count_; }

  bool operator==(const Layout&) const = default;

 private:
  Layout(Kind kind, std::size_t count) : kind_(kind), count_(count) {}

  Kind kind_;
  std::size_t count_;
};

struct PoseFrame {
  Layout layout = Layout::custom(0);
  std::vector<Keypoint> points;

  bool operator==(const PoseFrame&) const = default;
};

struct PoseSequence {
  std::vector<PoseFrame> frames;
  double fps = 25.0;

  bool operator==(const PoseSequence&) const = default;
};

struct GlossEntry {
  std::string symbol;
  PoseSequence pose;
  std::optional<std::vector<double>> embedding;
  std::vector<std::string> synonyms;

  bool operator==(const GlossEntry&) const = default;
};

inline constexpr std::string_view kFormatVersion = "kb/1";

/// Symbol-keyed store. std::map keeps iteration in lexicographic symbol
/// order, which retrieval relies on for tie-breaking.
struct KnowledgeBase {
  std::map<std::string, GlossEntry, std::less<>> entries;
  std::size_t embedding_dim = 0;
  std::string version = std::string(kFormatVersion);

  const GlossEntry* find(std::string_view symbol) const {
    auto it = entries.find(symbol);
    return it == entries.end() ? nullptr : &it->second;
  }

  /// Inserts or replaces by symbol.
  void put(GlossEntry entry) {
    auto key = entry.symbol;
    entries.insert_or_assign(std::move(key), std::move(entry));
  }

  bool operator==(const KnowledgeBase&) const = default;
};

struct SplitAssignment {
  std::set<std::string> train;
  std::set<std::string> dev;
  std::set<std::string> test;
  std::uint64_t seed = 0;

  bool operator==(const SplitAssignment&) const = default;
};

}  // namespace signpipe::kb
