#pragma once

#include <span>
#include <string>
#include <vector>

#include "signpipe/kb/types.hpp"

namespace signpipe::cvr {

/// L2 norm, accumulated left to right.
double l2_norm(std::span<const double> v) noexcept;

/// (a . b) / (|a| |b|). Throws DimensionMismatch or ZeroNormVector.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

struct SearchHit {
  const kb::GlossEntry* entry = nullptr;
  double score = 0.0;
  std::size_t examined = 0;
};

/// Precomputed entry norms for repeated argmax queries over one KB. The KB
/// must outlive the index. Scores are computed with the same operation order
/// as cosine_similarity, so they agree bit for bit.
class EmbeddingIndex {
 public:
  /// Throws EmptyKnowledgeBase, MissingEmbeddings, DimensionMismatch or
  /// ZeroNormVector when an entry is unusable.
  explicit EmbeddingIndex(const kb::KnowledgeBase& kb);

  /// Argmax of cosine similarity; ties go to the lexicographically smallest
  /// symbol. Throws DimensionMismatch / ZeroNormVector for a bad query.
  SearchHit search(std::span<const double> query) const;

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t size() const noexcept { return rows_.size(); }

 private:
  struct Row {
    const kb::GlossEntry* entry;
    std::span<const double> vec;
    double norm;
  };
  std::vector<Row> rows_;  // in symbol order
  std::size_t dim_ = 0;
};

/// One-shot search without a persistent index.
SearchHit embedding_search(std::span<const double> query, const kb::KnowledgeBase& kb);

}  // namespace signpipe::cvr
