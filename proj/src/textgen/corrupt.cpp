#include "signpipe/textgen/corrupt.hpp"

#include <cmath>
#include <ostream>
#include <utility>

#include "signpipe/error.hpp"
#include "signpipe/parallel.hpp"
#include "signpipe/random.hpp"

namespace signpipe::textgen {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidConfig, std::string(name) + " must lie in [0, 1]");
}

void shuffle_pass(Tokens& seq, std::vector<Edit>& edits, const CorruptConfig& cfg, Rng& rng) {
  for (std::size_t i = seq.size(); i > 1; --i) {
    const std::size_t hi = i - 1;
    if (!rng.bernoulli(cfg.p_shuffle)) continue;
    const std::size_t lo = hi + 1 > cfg.shuffle_window ? hi + 1 - cfg.shuffle_window : 0;
    const std::size_t j = lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
    if (j == hi) continue;
    std::swap(seq[hi], seq[j]);
    edits.push_back({EditOp::Swap, hi, j, {}});
  }
}

void delete_pass(Tokens& seq, std::vector<Edit>& edits, const CorruptConfig& cfg, Rng& rng) {
  std::size_t i = 0;
  while (i < seq.size()) {
    if (rng.bernoulli(cfg.p_delete) && seq.size() > cfg.min_length) {
      seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(i));
      edits.push_back({EditOp::Delete, i, 0, {}});
    } else {
      ++i;
    }
  }
}

void substitute_pass(Tokens& seq, std::vector<Edit>& edits, const CorruptConfig& cfg, Rng& rng) {
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!rng.bernoulli(cfg.p_substitute)) continue;
    std::size_t others = 0;
    for (const auto& v : cfg.vocab) others += v != seq[i];
    if (others == 0) continue;
    auto pick = rng.below(others);
    for (const auto& v : cfg.vocab) {
      if (v == seq[i]) continue;
      if (pick-- == 0) {
        seq[i] = v;
        edits.push_back({EditOp::Substitute, i, 0, v});
        break;
      }
    }
  }
}

void insert_pass(Tokens& seq, std::vector<Edit>& edits, const CorruptConfig& cfg, Rng& rng) {
  // One site per gap of the incoming sequence, including both ends.
  std::size_t i = 0;
  while (i <= seq.size()) {
    if (rng.bernoulli(cfg.p_insert)) {
      const auto& v = cfg.vocab[rng.below(cfg.vocab.size())];
      seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(i), v);
      edits.push_back({EditOp::Insert, i, 0, v});
      i += 2;
    } else {
      ++i;
    }
  }
}

}  // namespace

void CorruptConfig::check() const {
  check_probability(p_shuffle, "p_shuffle");
  check_probability(p_delete, "p_delete");
  check_probability(p_substitute, "p_substitute");
  check_probability(p_insert, "p_insert");
  if (shuffle_window == 0) throw Error(ErrorCode::InvalidConfig, "shuffle_window must be positive");
  if (vocab.empty() && (p_substitute > 0.0 || p_insert > 0.0)) {
    throw Error(ErrorCode::EmptyVocab, "substitution and insertion need a vocabulary");
  }
}

nlohmann::json config_to_json(const CorruptConfig& cfg) {
  return nlohmann::json{{"p_shuffle", cfg.p_shuffle},       {"p_delete", cfg.p_delete},
                        {"p_substitute", cfg.p_substitute}, {"p_insert", cfg.p_insert},
                        {"shuffle_window", cfg.shuffle_window}, {"min_length", cfg.min_length},
                        {"vocab", cfg.vocab},               {"seed", cfg.seed}};
}

std::string_view to_string(EditOp op) noexcept {
  switch (op) {
    case EditOp::Swap: return "swap";
    case EditOp::Delete: return "delete";
    case EditOp::Substitute: return "substitute";
    case EditOp::Insert: return "insert";
  }
  return "?";
}

EditOp parse_edit_op(std::string_view text) {
  for (auto op : {EditOp::Swap, EditOp::Delete, EditOp::Substitute, EditOp::Insert}) {
    if (to_string(op) == text) return op;
  }
  throw Error(ErrorCode::InvalidEdit, "unknown edit op '" + std::string(text) + "'");
}

CorruptionRecord corrupt(const Tokens& tokens, const CorruptConfig& cfg) {
  cfg.check();
  if (tokens.empty()) throw Error(ErrorCode::EmptyInput, "cannot corrupt an empty sentence");
  CorruptionRecord rec;
  rec.clean = tokens;
  rec.corrupted = tokens;
  rec.seed = cfg.seed;
  Rng rng(cfg.seed);
  shuffle_pass(rec.corrupted, rec.edits, cfg, rng);
  delete_pass(rec.corrupted, rec.edits, cfg, rng);
  substitute_pass(rec.corrupted, rec.edits, cfg, rng);
  insert_pass(rec.corrupted, rec.edits, cfg, rng);
  return rec;
}

Tokens replay(const Tokens& clean, const std::vector<Edit>& edits) {
  Tokens seq = clean;
  for (std::size_t k = 0; k < edits.size(); ++k) {
    const auto& e = edits[k];
    const std::size_t limit = e.op == EditOp::Insert ? seq.size() + 1 : seq.size();
    if (e.position >= limit || (e.op == EditOp::Swap && e.other >= seq.size())) {
      throw Error(ErrorCode::InvalidEdit, "edit " + std::to_string(k) + " (" + std::string(to_string(e.op)) +
                                              ") out of range for length " + std::to_string(seq.size()));
    }
    switch (e.op) {
      case EditOp::Swap: std::swap(seq[e.position], seq[e.other]); break;
      case EditOp::Delete: seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(e.position)); break;
      case EditOp::Substitute: seq[e.position] = e.token; break;
      case EditOp::Insert: seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(e.position), e.token); break;
    }
  }
  return seq;
}

std::vector<CorruptionRecord> generate_corpus(const std::vector<Tokens>& sentences, const CorruptConfig& cfg,
                                              std::size_t reps, unsigned threads) {
  cfg.check();
  std::vector<CorruptionRecord> out(sentences.size() * reps);
  parallel_for(out.size(), threads, [&](std::size_t k) {
    const std::size_t i = k / reps;
    CorruptConfig local = cfg;
    local.seed = derive_seed(cfg.seed, {i, k % reps});
    try {
      out[k] = corrupt(sentences[i], local);
    } catch (const Error& e) {
      throw Error(e.code(), "sentence " + std::to_string(i) + ": " + e.detail());
    }
  });
  return out;
}

nlohmann::json edit_to_json(const Edit& e) {
  nlohmann::json j{{"op", to_string(e.op)}, {"pos", e.position}};
  if (e.op == EditOp::Swap) j["with"] = e.other;
  if (e.op == EditOp::Substitute || e.op == EditOp::Insert) j["token"] = e.token;
  return j;
}

Edit edit_from_json(const nlohmann::json& j) {
  try {
    Edit e;
    e.op = parse_edit_op(j.at("op").get<std::string>());
    e.position = j.at("pos").get<std::size_t>();
    if (e.op == EditOp::Swap) e.other = j.at("with").get<std::size_t>();
    if (e.op == EditOp::Substitute || e.op == EditOp::Insert) e.token = j.at("token").get<std::string>();
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::InvalidEdit, ex.what());
  }
}

nlohmann::json record_to_json(const CorruptionRecord& r) {
  nlohmann::json edits = nlohmann::json::array();
  for (const auto& e : r.edits) edits.push_back(edit_to_json(e));
  return nlohmann::json{{"clean", r.clean}, {"corrupted", r.corrupted}, {"edits", std::move(edits)}, {"seed", r.seed}};
}

CorruptionRecord record_from_json(const nlohmann::json& j) {
  try {
    CorruptionRecord r;
    r.clean = j.at("clean").get<Tokens>();
    r.corrupted = j.at("corrupted").get<Tokens>();
    for (const auto& e : j.at("edits")) r.edits.push_back(edit_from_json(e));
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::MalformedRecord, ex.what());
  }
}

void write_records(std::ostream& out, const std::vector<CorruptionRecord>& records) {
  for (const auto& r : records) out << record_to_json(r).dump() << '\n';
}

}  // namespace signpipe::textgen
