#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "signpipe/cvr/providers.hpp"
#include "signpipe/cvr/similarity.hpp"
#include "signpipe/cvr/tokenize.hpp"
#include "signpipe/kb/types.hpp"

namespace signpipe::cvr {

enum class OnUnresolved { Skip, Error };

OnUnresolved parse_on_unresolved(std::string_view name);
std::string_view to_string(OnUnresolved policy);

struct CascadeConfig {
  double accept_threshold = 0.7;
  TokenizerMode tokenizer = TokenizerMode::Lexicon;
  OnUnresolved on_unresolved = OnUnresolved::Skip;
  std::size_t max_synonyms = 8;
};

enum class Level { Direct, Embedding, Synonym, Unresolved };

std::string_view to_string(Level level);

struct ResolutionTrace {
  std::string token;
  Level level = Level::Unresolved;
  std::optional<std::string> chosen_symbol;
  /// Similarity of the accepted embedding match; set only for Level::Embedding.
  std::optional<double> score;
  std::size_t candidates_examined = 0;
  /// Best level-2 match whenever the embedding stage ran, accepted or not.
  std::optional<std::string> nearest_symbol;
  std::optional<double> nearest_score;
  double threshold = 0.0;
};

struct ResolvedItem {
  std::string symbol;
  kb::PoseSequence pose;
};

struct SymbolPoseSequence {
  std::vector<ResolvedItem> items;
  std::vector<ResolutionTrace> traces;
};

/// Three-level token-to-gloss resolution over a read-only KB:
/// direct symbol lookup, then cosine argmax over KB embeddings accepted at
/// accept_threshold, then backend synonyms filtered to KB symbols.
///
/// The KB, provider and backend must outlive the resolver. Either of
/// provider / backend may be null, which disables that level. Resolving is
/// safe from several threads; calls into a non-reentrant provider or backend
/// are serialized.
class Resolver {
 public:
  Resolver(const kb::KnowledgeBase& kb, EmbeddingProvider* provider, SynonymBackend* backend,
           CascadeConfig cfg = {});

  /// Returns the chosen entry (null when unresolved) and its trace.
  std::pair<const kb::GlossEntry*, ResolutionTrace> resolve_token(
      std::string_view token, std::span<const std::string> context = {}) const;

  /// Throws UnresolvedToken under OnUnresolved::Error.
  SymbolPoseSequence resolve_sentence(std::string_view text) const;

  const CascadeConfig& config() const noexcept { return cfg_; }

 private:
  std::vector<double> embed(std::string_view token) const;
  std::vector<std::string> propose(std::string_view token, std::span<const std::string> context) const;

  const kb::KnowledgeBase& kb_;
  EmbeddingProvider* provider_;
  SynonymBackend* backend_;
  CascadeConfig cfg_;
  std::optional<EmbeddingIndex> index_;
  mutable std::mutex provider_mutex_;
  mutable std::mutex backend_mutex_;
};

/// Convenience wrappers that build a throwaway Resolver.
std::pair<std::optional<ResolvedItem>, ResolutionTrace> resolve_token(std::string_view token,
                                                                      const kb::KnowledgeBase& kb,
                                                                      EmbeddingProvider* provider,
                                                                      SynonymBackend* backend,
                                                                      const CascadeConfig& cfg = {});
SymbolPoseSequence resolve_sentence(std::string_view text, const kb::KnowledgeBase& kb,
                                    EmbeddingProvider* provider, SynonymBackend* backend,
                                    const CascadeConfig& cfg = {});

/// {"token", "level", "symbol", "score", "candidates_examined", ...}
nlohmann::json trace_to_json(const ResolutionTrace& trace);

/// One output record: {"text", "items": [{"symbol", "pose_ref"}], "traces": [...]}.
nlohmann::json resolution_to_json(std::string_view text, const SymbolPoseSequence& seq);

}  // namespace signpipe::cvr
