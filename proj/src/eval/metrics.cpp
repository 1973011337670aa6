#include "signpipe/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "signpipe/error.hpp"
#include "signpipe/parallel.hpp"
#include "signpipe/utf8.hpp"

namespace signpipe::eval {

namespace {

using Int = __int128;

void check_pairs(std::size_t hyps, std::size_t refs) {
  if (hyps != refs) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(hyps) + " hypotheses for " + std::to_string(refs) + " references");
  }
  if (refs == 0) throw Error(ErrorCode::EmptyReference, "no reference sentences");
}

std::u32string strip_space(std::string_view text) {
  std::u32string out;
  for (char32_t cp : utf8::decode(text)) {
    if (!utf8::is_space(cp)) out.push_back(cp);
  }
  return out;
}

std::map<std::vector<std::string_view>, std::uint64_t> ngrams(const Tokens& t, std::size_t n) {
  std::map<std::vector<std::string_view>, std::uint64_t> out;
  for (std::size_t i = 0; i + n <= t.size(); ++i) {
    ++out[std::vector<std::string_view>(t.begin() + static_cast<std::ptrdiff_t>(i),
                                        t.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace

Smoothing parse_smoothing(std::string_view text) {
  if (text == "none") return Smoothing::None;
  if (text == "add_one" || text == "add1") return Smoothing::AddOne;
  throw Error(ErrorCode::InvalidConfig, "unknown smoothing '" + std::string(text) + "' (none, add_one)");
}

std::string_view to_string(Smoothing s) noexcept { return s == Smoothing::None ? "none" : "add_one"; }

EvalTokenizer parse_eval_tokenizer(std::string_view text) {
  if (text == "char") return EvalTokenizer::Char;
  if (text == "whitespace") return EvalTokenizer::Whitespace;
  throw Error(ErrorCode::InvalidConfig, "unknown tokenizer '" + std::string(text) + "' (char, whitespace)");
}

std::string_view to_string(EvalTokenizer t) noexcept { return t == EvalTokenizer::Char ? "char" : "whitespace"; }

NgramCounts& NgramCounts::operator+=(const NgramCounts& o) {
  for (std::size_t k = 0; k < 4; ++k) {
    matches[k] += o.matches[k];
    totals[k] += o.totals[k];
  }
  hyp_length += o.hyp_length;
  ref_length += o.ref_length;
  return *this;
}

NgramCounts ngram_counts(const Tokens& hyp, const Tokens& ref) {
  NgramCounts c;
  c.hyp_length = hyp.size();
  c.ref_length = ref.size();
  for (std::size_t n = 1; n <= 4; ++n) {
    if (hyp.size() < n) break;
    const auto h = ngrams(hyp, n);
    const auto r = ngrams(ref, n);
    c.totals[n - 1] = hyp.size() - n + 1;
    for (const auto& [gram, count] : h) {
      const auto it = r.find(gram);
      if (it != r.end()) c.matches[n - 1] += std::min(count, it->second);
    }
  }
  return c;
}

double bleu_from_counts(const NgramCounts& c, int n, Smoothing smoothing) {
  if (n < 1 || n > 4) throw Error(ErrorCode::InvalidConfig, "BLEU order must be 1..4");
  if (c.hyp_length == 0) return 0.0;
  double log_sum = 0.0;
  int orders = 0;
  for (int k = 0; k < n; ++k) {
    double num = static_cast<double>(c.matches[k]);
    double den = static_cast<double>(c.totals[k]);
    if (c.totals[k] == 0) continue;
    if (c.matches[k] == 0) {
      if (smoothing == Smoothing::AddOne && k >= 1) {
        num += 1.0;
        den += 1.0;
      } else {
        return 0.0;
      }
    }
    log_sum += std::log(num / den);
    ++orders;
  }
  const double bp = c.hyp_length >= c.ref_length
                        ? 1.0
                        : std::exp(1.0 - static_cast<double>(c.ref_length) / static_cast<double>(c.hyp_length));
  return 100.0 * bp * std::exp(log_sum / orders);
}

double bleu_n(const std::vector<Tokens>& hyps, const std::vector<Tokens>& refs, int n, Smoothing smoothing) {
  check_pairs(hyps.size(), refs.size());
  NgramCounts total;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    if (refs[i].empty()) throw Error(ErrorCode::EmptyReference, "reference " + std::to_string(i) + " is empty");
    total += ngram_counts(hyps[i], refs[i]);
  }
  return bleu_from_counts(total, n, smoothing);
}

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l(const Tokens& hyp, const Tokens& ref) {
  if (ref.empty()) throw Error(ErrorCode::EmptyReference, "reference is empty");
  const std::size_t lcs = lcs_length(hyp, ref);
  if (lcs == 0) return 0.0;
  const double p = static_cast<double>(lcs) / static_cast<double>(hyp.size());
  const double r = static_cast<double>(lcs) / static_cast<double>(ref.size());
  return 100.0 * 2.0 * p * r / (p + r);
}

double corpus_rouge_l(const std::vector<Tokens>& hyps, const std::vector<Tokens>& refs) {
  check_pairs(hyps.size(), refs.size());
  std::vector<double> f(hyps.size());
  for (std::size_t i = 0; i < hyps.size(); ++i) f[i] = rouge_l(hyps[i], refs[i]);
  return pairwise_sum(f) / static_cast<double>(f.size());
}

std::size_t char_edit_distance(std::u32string_view a, std::u32string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double cer(std::string_view hyp, std::string_view ref) {
  const auto r = utf8::decode(ref);
  if (r.empty()) throw Error(ErrorCode::EmptyReference, "reference is empty");
  return 100.0 * static_cast<double>(char_edit_distance(utf8::decode(hyp), r)) / static_cast<double>(r.size());
}

double corpus_cer(const std::vector<std::string>& hyps, const std::vector<std::string>& refs) {
  check_pairs(hyps.size(), refs.size());
  std::uint64_t edits = 0, chars = 0;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    const auto r = utf8::decode(refs[i]);
    if (r.empty()) throw Error(ErrorCode::EmptyReference, "reference " + std::to_string(i) + " is empty");
    edits += char_edit_distance(utf8::decode(hyps[i]), r);
    chars += r.size();
  }
  return 100.0 * static_cast<double>(edits) / static_cast<double>(chars);
}

double fleiss_kappa(const RaterMatrix& m) {
  const auto& rows = m.counts;
  if (rows.size() < 2) throw Error(ErrorCode::InvalidConfig, "Fleiss' kappa needs at least 2 items");
  const std::size_t categories = rows.front().size();
  std::vector<Int> column(categories, 0);
  Int raters = -1;
  Int agree = 0;  // sum over items of sum_j n_ij (n_ij - 1)
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != categories) {
      throw Error(ErrorCode::ShapeMismatch, "item " + std::to_string(i) + " has a different category count");
    }
    Int n = 0;
    for (std::size_t j = 0; j < categories; ++j) {
      const Int v = rows[i][j];
      n += v;
      agree += v * (v - 1);
      column[j] += v;
    }
    if (raters < 0) raters = n;
    if (n != raters) throw Error(ErrorCode::ShapeMismatch, "item " + std::to_string(i) + " has a different rater count");
  }
  if (raters < 2) throw Error(ErrorCode::InvalidConfig, "Fleiss' kappa needs at least 2 raters per item");

  // P = agree / B, Pe = C / D with B = N n (n - 1), C = sum_j col_j^2, D = (N n)^2.
  // kappa = (P - Pe) / (1 - Pe) = (agree D - C B) / (B (D - C)).
  const Int items = static_cast<Int>(rows.size());
  const Int b = items * raters * (raters - 1);
  Int c = 0;
  for (Int col : column) c += col * col;
  const Int d = (items * raters) * (items * raters);
  if (c == d) throw Error(ErrorCode::DegenerateAgreement, "every rating falls in one category; kappa is undefined");
  const Int num = agree * d - c * b;
  const Int den = b * (d - c);
  if (num == den) return 1.0;
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

RaterMatrix read_rater_matrix(const std::filesystem::path& path) {
  RaterMatrix m;
  std::size_t lineno = 0;
  for (const auto& line : read_lines(path)) {
    ++lineno;
    std::istringstream in(line);
    std::vector<std::uint32_t> row;
    std::string word;
    while (in >> word) {
      std::size_t pos = 0;
      unsigned long v = 0;
      try {
        if (word[0] == '-' || word[0] == '+') throw std::invalid_argument(word);
        v = std::stoul(word, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != word.size() || v > 0xFFFFFFFFul) {
        throw LineError(ErrorCode::MalformedRecord, lineno, "'" + word + "' is not a rating count");
      }
      row.push_back(static_cast<std::uint32_t>(v));
    }
    if (!row.empty()) m.counts.push_back(std::move(row));
  }
  return m;
}

nlohmann::json report_to_json(const MetricReport& r) {
  nlohmann::json bleu;
  for (int n = 1; n <= 4; ++n) bleu[std::to_string(n)] = r.bleu[n - 1];
  return nlohmann::json{{"bleu", bleu},
                        {"rouge_l", r.rouge_l},
                        {"cer", r.cer},
                        {"pairs", r.pairs},
                        {"tokenizer", to_string(r.tokenizer)},
                        {"smoothing", to_string(r.smoothing)},
                        {"counts",
                         {{"hyp_length", r.counts.hyp_length},
                          {"ref_length", r.counts.ref_length},
                          {"ngram_matches", r.counts.matches},
                          {"ngram_totals", r.counts.totals},
                          {"char_edits", r.cer_edits},
                          {"ref_chars", r.cer_ref_chars}}}};
}

Tokens tokenize_for_eval(std::string_view line, EvalTokenizer tokenizer) {
  if (tokenizer == EvalTokenizer::Whitespace) return utf8::split_whitespace(line);
  Tokens out;
  for (auto& s : utf8::scalars(line)) {
    if (!utf8::is_space(utf8::decode(s).front())) out.push_back(std::move(s));
  }
  return out;
}

MetricReport evaluate(const std::vector<std::string>& hyps, const std::vector<std::string>& refs,
                      EvalTokenizer tokenizer, Smoothing smoothing, unsigned threads) {
  if (hyps.size() != refs.size()) {
    throw LineError(ErrorCode::LineCountMismatch, std::min(hyps.size(), refs.size()) + 1,
                    std::to_string(hyps.size()) + " hypothesis lines, " + std::to_string(refs.size()) +
                        " reference lines");
  }
  if (refs.empty()) throw Error(ErrorCode::EmptyReference, "no reference lines");

  struct PairStats {
    NgramCounts ngrams;
    double rouge = 0.0;
    std::uint64_t edits = 0;
    std::uint64_t ref_chars = 0;
  };
  std::vector<PairStats> stats(refs.size());
  parallel_for(refs.size(), threads, [&](std::size_t i) {
    const auto h = tokenize_for_eval(hyps[i], tokenizer);
    const auto r = tokenize_for_eval(refs[i], tokenizer);
    if (r.empty()) throw LineError(ErrorCode::EmptyReference, i + 1, "reference line is empty");
    stats[i].ngrams = ngram_counts(h, r);
    stats[i].rouge = rouge_l(h, r);
    const auto hc = strip_space(hyps[i]);
    const auto rc = strip_space(refs[i]);
    stats[i].edits = char_edit_distance(hc, rc);
    stats[i].ref_chars = rc.size();
  });

  MetricReport rep;
  rep.pairs = refs.size();
  rep.tokenizer = tokenizer;
  rep.smoothing = smoothing;
  std::vector<double> rouges(refs.size());
  for (std::size_t i = 0; i < stats.size(); ++i) {
    rep.counts += stats[i].ngrams;
    rouges[i] = stats[i].rouge;
    rep.cer_edits += stats[i].edits;
    rep.cer_ref_chars += stats[i].ref_chars;
  }
  for (int n = 1; n <= 4; ++n) rep.bleu[n - 1] = bleu_from_counts(rep.counts, n, smoothing);
  rep.rouge_l = pairwise_sum(rouges) / static_cast<double>(rouges.size());
  rep.cer = 100.0 * static_cast<double>(rep.cer_edits) / static_cast<double>(rep.cer_ref_chars);
  return rep;
}

MetricReport evaluate_files(const std::filesystem::path& hyp_path, const std::filesystem::path& ref_path,
                            EvalTokenizer tokenizer, Smoothing smoothing, unsigned threads) {
  return evaluate(read_lines(hyp_path), read_lines(ref_path), tokenizer, smoothing, threads);
}

}  // namespace signpipe::eval
