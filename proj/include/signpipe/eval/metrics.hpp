#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace signpipe::eval {

using Tokens = std::vector<std::string>;

enum class Smoothing { None, AddOne };
enum class EvalTokenizer { Char, Whitespace };

Smoothing parse_smoothing(std::string_view text);
std::string_view to_string(Smoothing s) noexcept;
EvalTokenizer parse_eval_tokenizer(std::string_view text);
std::string_view to_string(EvalTokenizer t) noexcept;

/// Aggregated integer statistics for corpus BLEU; order k is index k - 1.
struct NgramCounts {
  std::array<std::uint64_t, 4> matches{};
  std::array<std::uint64_t, 4> totals{};
  std::uint64_t hyp_length = 0;
  std::uint64_t ref_length = 0;

  NgramCounts& operator+=(const NgramCounts& o);
};

/// Clipped n-gram matches of one pair for orders 1..4.
NgramCounts ngram_counts(const Tokens& hypothesis, const Tokens& reference);

/// Corpus BLEU over orders 1..n on the 0-100 scale, from pooled counts.
/// Orders for which the hypotheses contain no n-grams at all are left out
/// of the geometric mean, so identical short sentences still score 100.
/// Brevity penalty exp(1 - r/c) when c <= r; zero when c = 0.
double bleu_from_counts(const NgramCounts& counts, int n, Smoothing smoothing = Smoothing::None);

/// Throws LengthMismatch, EmptyReference (no pairs or an empty reference),
/// InvalidConfig for n outside 1..4.
double bleu_n(const std::vector<Tokens>& hypotheses, const std::vector<Tokens>& references, int n,
              Smoothing smoothing = Smoothing::None);

std::size_t lcs_length(const Tokens& a, const Tokens& b);

/// ROUGE-L F1 (beta = 1) for one pair, 0-100. Throws EmptyReference.
double rouge_l(const Tokens& hypothesis, const Tokens& reference);
/// Mean of per-pair ROUGE-L F1.
double corpus_rouge_l(const std::vector<Tokens>& hypotheses, const std::vector<Tokens>& references);

/// Levenshtein distance over Unicode scalars.
std::size_t char_edit_distance(std::u32string_view a, std::u32string_view b);

/// Character error rate in percent. Throws EmptyReference.
double cer(std::string_view hypothesis, std::string_view reference);
/// Total edits over total reference characters.
double corpus_cer(const std::vector<std::string>& hypotheses, const std::vector<std::string>& references);

/// items x categories counts with the same number of raters per item.
struct RaterMatrix {
  std::vector<std::vector<std::uint32_t>> counts;
};

/// Fleiss' kappa, evaluated from exact integer sums with one final division,
/// so universal agreement gives exactly 1. Throws ShapeMismatch (ragged rows,
/// unequal rater counts), InvalidConfig (< 2 items or < 2 raters) and
/// DegenerateAgreement when chance agreement is 1.
double fleiss_kappa(const RaterMatrix& matrix);

/// Reads whitespace-separated count rows, one item per line.
RaterMatrix read_rater_matrix(const std::filesystem::path& path);

struct MetricReport {
  std::array<double, 4> bleu{};
  double rouge_l = 0.0;
  double cer = 0.0;
  NgramCounts counts;
  std::uint64_t cer_edits = 0;
  std::uint64_t cer_ref_chars = 0;
  std::size_t pairs = 0;
  EvalTokenizer tokenizer = EvalTokenizer::Char;
  Smoothing smoothing = Smoothing::None;
};

nlohmann::json report_to_json(const MetricReport& r);

Tokens tokenize_for_eval(std::string_view line, EvalTokenizer tokenizer);

/// All metrics over line-aligned text. BLEU and ROUGE use `tokenizer`; CER
/// always compares characters with whitespace removed. Per-pair statistics
/// are integers merged exactly, so the thread count cannot change results.
/// Throws LineCountMismatch, EmptyReference.
MetricReport evaluate(const std::vector<std::string>& hypotheses, const std::vector<std::string>& references,
                      EvalTokenizer tokenizer = EvalTokenizer::Char, Smoothing smoothing = Smoothing::None,
                      unsigned threads = 1);

/// Line count mismatch is reported at the first line present in only one file.
/// Throws IoError plus anything from evaluate().
MetricReport evaluate_files(const std::filesystem::path& hyp_path, const std::filesystem::path& ref_path,
                            EvalTokenizer tokenizer = EvalTokenizer::Char, Smoothing smoothing = Smoothing::None,
                            unsigned threads = 1);

}  // namespace signpipe::eval
