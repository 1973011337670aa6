#pragma once

#include <span>
#include <string>
#include <vector>

#include "signpipe/kb/types.hpp"

namespace signpipe::kb {

enum class ViolationKind {
  EmptySymbol,
  DuplicateSymbol,
  InvalidDimension,
  DimensionMismatch,
  ZeroNormEmbedding,
  NonFiniteValue,
  EmptyPose,
  MixedLayouts,
  PointCountMismatch,
  ConfidenceOutOfRange,
  NonPositiveFps,
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string symbol;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

/// Checks entries as they appear on disk, before symbol de-duplication.
ValidationReport validate_entries(std::span<const GlossEntry> entries, std::size_t embedding_dim);

ValidationReport validate_kb(const KnowledgeBase& kb);

}  // namespace signpipe::kb
