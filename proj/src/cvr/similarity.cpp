#include "signpipe/cvr/similarity.hpp"

#include <cmath>

#include "signpipe/error.hpp"

namespace signpipe::cvr {

namespace {

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double l2_norm(std::span<const double> v) noexcept { return std::sqrt(dot(v, v)); }

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "vectors of length " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  const double na = l2_norm(a);
  const double nb = l2_norm(b);
  if (!(na > 0.0) || !(nb > 0.0)) throw Error(ErrorCode::ZeroNormVector, "cosine of a zero-norm vector");
  return dot(a, b) / (na * nb);
}

EmbeddingIndex::EmbeddingIndex(const kb::KnowledgeBase& kb) : dim_(kb.embedding_dim) {
  if (kb.entries.empty()) throw Error(ErrorCode::EmptyKnowledgeBase, "knowledge base has no entries");
  rows_.reserve(kb.entries.size());
  for (const auto& [symbol, entry] : kb.entries) {
    if (!entry.embedding) throw Error(ErrorCode::MissingEmbeddings, "entry '" + symbol + "' has no embedding");
    const auto& v = *entry.embedding;
    if (v.size() != dim_) {
      throw Error(ErrorCode::DimensionMismatch, "entry '" + symbol + "' has embedding length " +
                                                    std::to_string(v.size()) + ", KB declares " +
                                                    std::to_string(dim_));
    }
    const double norm = l2_norm(v);
    if (!(norm > 0.0)) throw Error(ErrorCode::ZeroNormVector, "entry '" + symbol + "' has a zero embedding");
    rows_.push_back({&entry, v, norm});
  }
}

SearchHit EmbeddingIndex::search(std::span<const double> query) const {
  if (query.size() != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "query length " + std::to_string(query.size()) +
                                                  ", KB dimension " + std::to_string(dim_));
  }
  const double qn = l2_norm(query);
  if (!(qn > 0.0)) throw Error(ErrorCode::ZeroNormVector, "query embedding has zero norm");

  SearchHit best;
  for (const auto& row : rows_) {
    const double score = dot(query, row.vec) / (qn * row.norm);
    // Strict '>' keeps the earliest (smallest) symbol on ties.
    if (best.entry == nullptr || score > best.score) {
      best.entry = row.entry;
      best.score = score;
    }
  }
  best.examined = rows_.size();
  return best;
}

SearchHit embedding_search(std::span<const double> query, const kb::KnowledgeBase& kb) {
  return EmbeddingIndex(kb).search(query);
}

}  // namespace signpipe::cvr
