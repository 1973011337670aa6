#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "signpipe/kb/types.hpp"

namespace signpipe::cvr {

/// Maps text to a fixed-length vector. Implementations must be deterministic
/// and return finite values of length dimension().
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::vector<double> embed(std::string_view text) = 0;
  virtual std::size_t dimension() const = 0;
  /// False if concurrent embed() calls are unsafe; the resolver then
  /// serializes them.
  virtual bool reentrant() const { return true; }
};

/// Proposes replacement candidates for a token, best first, at most `max`.
class SynonymBackend {
 public:
  virtual ~SynonymBackend() = default;
  virtual std::vector<std::string> propose(std::string_view token, std::span<const std::string> context,
                                           std::size_t max) = 0;
  virtual bool reentrant() const { return true; }
};

/// Offline embedding: signed feature hashing of character unigrams and
/// bigrams (FNV-1a). Cheap and deterministic; related strings that share
/// characters land close together, nothing more.
class HashingEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HashingEmbeddingProvider(std::size_t dimension);
  std::vector<double> embed(std::string_view text) override;
  std::size_t dimension() const override { return dim_; }

 private:
  std::size_t dim_;
};

/// Fixed lookup table loaded from JSONL records {"text": str, "embedding": [f64]}.
/// Texts missing from the table go to the fallback, or raise BackendError
/// when there is none.
class TableEmbeddingProvider final : public EmbeddingProvider {
 public:
  TableEmbeddingProvider(std::map<std::string, std::vector<double>, std::less<>> table, std::size_t dimension,
                         std::shared_ptr<EmbeddingProvider> fallback = nullptr);
  static TableEmbeddingProvider load(const std::filesystem::path& path,
                                     std::shared_ptr<EmbeddingProvider> fallback = nullptr);

  std::vector<double> embed(std::string_view text) override;
  std::size_t dimension() const override { return dim_; }
  bool reentrant() const override { return !fallback_ || fallback_->reentrant(); }

 private:
  std::map<std::string, std::vector<double>, std::less<>> table_;
  std::size_t dim_;
  std::shared_ptr<EmbeddingProvider> fallback_;
};

/// Offline stand-in for an LLM synonym generator: proposes the KB symbols
/// whose synonym lists contain the token, in symbol order.
class KbSynonymBackend final : public SynonymBackend {
 public:
  explicit KbSynonymBackend(const kb::KnowledgeBase& kb);
  std::vector<std::string> propose(std::string_view token, std::span<const std::string> context,
                                   std::size_t max) override;

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> by_synonym_;
};

}  // namespace signpipe::cvr
