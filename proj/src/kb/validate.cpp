#include "signpipe/kb/validate.hpp"

#include <cmath>
#include <set>

#include "signpipe/kb/keypoints.hpp"

namespace signpipe::kb {

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::EmptySymbol: return "empty_symbol";
    case ViolationKind::DuplicateSymbol: return "duplicate_symbol";
    case ViolationKind::InvalidDimension: return "invalid_dimension";
    case ViolationKind::DimensionMismatch: return "dimension_mismatch";
    case ViolationKind::ZeroNormEmbedding: return "zero_norm_embedding";
    case ViolationKind::NonFiniteValue: return "non_finite_value";
    case ViolationKind::EmptyPose: return "empty_pose";
    case ViolationKind::MixedLayouts: return "mixed_layouts";
    case ViolationKind::PointCountMismatch: return "point_count_mismatch";
    case ViolationKind::ConfidenceOutOfRange: return "confidence_out_of_range";
    case ViolationKind::NonPositiveFps: return "non_positive_fps";
  }
  return "unknown";
}

namespace {

void check_embedding(const GlossEntry& e, std::size_t dim, std::vector<Violation>& out) {
  if (!e.embedding) return;
  const auto& v = *e.embedding;
  if (v.size() != dim) {
    out.push_back({ViolationKind::DimensionMismatch, e.symbol,
                   "embedding length " + std::to_string(v.size()) + " != " + std::to_string(dim)});
  }
  double sq = 0.0;
  bool finite = true;
  for (double x : v) {
    finite = finite && std::isfinite(x);
    sq += x * x;
  }
  if (!finite) {
    out.push_back({ViolationKind::NonFiniteValue, e.symbol, "embedding has NaN or Inf"});
  } else if (!(sq > 0.0)) {
    out.push_back({ViolationKind::ZeroNormEmbedding, e.symbol, "embedding norm is zero"});
  }
}

void check_pose(const GlossEntry& e, std::vector<Violation>& out) {
  const auto& pose = e.pose;
  if (!(pose.fps > 0.0) || !std::isfinite(pose.fps)) {
    out.push_back({ViolationKind::NonPositiveFps, e.symbol, "fps must be positive"});
  }
  if (pose.frames.empty()) {
    out.push_back({ViolationKind::EmptyPose, e.symbol, "pose has no frames"});
    return;
  }
  const Layout& layout = pose.frames.front().layout;
  bool mixed = false, count = false, finite = false, confidence = false;
  for (const auto& f : pose.frames) {
    mixed = mixed || !(f.layout == layout);
    count = count || f.points.size() != f.layout.point_count();
    for (const auto& p : f.points) {
      finite = finite || !std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.confidence);
      confidence = confidence || p.confidence < 0.0 || p.confidence > 1.0;
    }
  }
  if (mixed) out.push_back({ViolationKind::MixedLayouts, e.symbol, "frames use different layouts"});
  if (count) {
    out.push_back({ViolationKind::PointCountMismatch, e.symbol,
                   "a frame's point count differs from its layout"});
  }
  if (finite) out.push_back({ViolationKind::NonFiniteValue, e.symbol, "keypoint has NaN or Inf"});
  if (confidence) {
    out.push_back({ViolationKind::ConfidenceOutOfRange, e.symbol, "keypoint confidence outside [0, 1]"});
  }
}

}  // namespace

ValidationReport validate_entries(std::span<const GlossEntry> entries, std::size_t embedding_dim) {
  ValidationReport report;
  auto& out = report.violations;
  if (embedding_dim == 0) {
    out.push_back({ViolationKind::InvalidDimension, "", "embedding_dim must be positive"});
  }
  std::set<std::string, std::less<>> seen;
  for (const auto& e : entries) {
    if (e.symbol.empty()) out.push_back({ViolationKind::EmptySymbol, "", "entry has an empty symbol"});
    if (!seen.insert(e.symbol).second) {
      out.push_back({ViolationKind::DuplicateSymbol, e.symbol, "symbol appears more than once"});
    }
    check_embedding(e, embedding_dim, out);
    check_pose(e, out);
  }
  return report;
}

ValidationReport validate_kb(const KnowledgeBase& kb) {
  std::vector<GlossEntry> flat;
  flat.reserve(kb.entries.size());
  ValidationReport report;
  for (const auto& [key, entry] : kb.entries) {
    flat.push_back(entry);
    if (key != entry.symbol) {
      report.violations.push_back({ViolationKind::DuplicateSymbol, entry.symbol,
                                   "stored under a different key '" + key + "'"});
    }
  }
  auto rest = validate_entries(flat, kb.embedding_dim);
  report.violations.insert(report.violations.end(), rest.violations.begin(), rest.violations.end());
  return report;
}

}  // namespace signpipe::kb
