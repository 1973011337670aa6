#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace signpipe::textgen {

using Tokens = std::vector<std::string>;

struct CorruptConfig {
  double p_shuffle = 0.15;
  double p_delete = 0.15;
  double p_substitute = 0.15;
  double p_insert = 0.15;
  /// Tokens may move at most window - 1 places per shuffle step; a window of
  /// at least the sentence length gives an unrestricted Fisher-Yates shuffle.
  std::size_t shuffle_window = 3;
  /// Deletions that would leave fewer tokens than this are skipped.
  std::size_t min_length = 1;
  Tokens vocab;
  std::uint64_t seed = 0;

  /// InvalidConfig for probabilities outside [0, 1] or a zero window;
  /// EmptyVocab when substitution or insertion is enabled without a vocab.
  void check() const;
};

nlohmann::json config_to_json(const CorruptConfig& cfg);

enum class EditOp { Swap, Delete, Substitute, Insert };

std::string_view to_string(EditOp op) noexcept;
EditOp parse_edit_op(std::string_view text);

/// Positions index the sequence as it is when the edit is applied.
/// Swap exchanges `position` and `other`; Substitute and Insert carry `token`.
struct Edit {
  EditOp op = EditOp::Delete;
  std::size_t position = 0;
  std::size_t other = 0;
  std::string token;

  bool operator==(const Edit&) const = default;
};

struct CorruptionRecord {
  Tokens clean;
  Tokens corrupted;
  std::vector<Edit> edits;
  std::uint64_t seed = 0;

  bool operator==(const CorruptionRecord&) const = default;
};

/// Runs the four passes in order shuffle, delete, substitute, insert, one
/// Bernoulli draw per site, from a generator seeded with cfg.seed. Every
/// logged edit changes the sequence: swaps with itself are not drawn and
/// substitutes always pick a different vocab token (skipped if none exists).
/// Throws EmptyInput for no tokens plus anything from cfg.check().
CorruptionRecord corrupt(const Tokens& tokens, const CorruptConfig& cfg);

/// Applies edits in order. Throws InvalidEdit when a position is out of range.
Tokens replay(const Tokens& clean, const std::vector<Edit>& edits);

/// `reps` records per sentence in sentence-major order. Record (i, r) uses
/// seed derive_seed(cfg.seed, i, r), so content does not depend on threads.
/// Errors are rethrown with the sentence index.
std::vector<CorruptionRecord> generate_corpus(const std::vector<Tokens>& sentences, const CorruptConfig& cfg,
                                              std::size_t reps, unsigned threads = 1);

nlohmann::json edit_to_json(const Edit& e);
Edit edit_from_json(const nlohmann::json& j);
nlohmann::json record_to_json(const CorruptionRecord& r);
CorruptionRecord record_from_json(const nlohmann::json& j);

/// One compact JSON record per line.
void write_records(std::ostream& out, const std::vector<CorruptionRecord>& records);

}  // namespace signpipe::textgen
