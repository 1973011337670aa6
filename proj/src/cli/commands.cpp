#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "signpipe/cvr/providers.hpp"
#include "signpipe/cvr/resolver.hpp"
#include "signpipe/distill/losses.hpp"
#include "signpipe/error.hpp"
#include "signpipe/eval/metrics.hpp"
#include "signpipe/kb/kb_io.hpp"
#include "signpipe/kb/keypoints.hpp"
#include "signpipe/kb/split.hpp"
#include "signpipe/kb/validate.hpp"
#include "signpipe/parallel.hpp"
#include "signpipe/perturb/clip_io.hpp"
#include "signpipe/perturb/motion.hpp"
#include "signpipe/perturb/pipeline.hpp"
#include "signpipe/textgen/corrupt.hpp"
#include "signpipe/utf8.hpp"

namespace signpipe::cli {

using nlohmann::json;
namespace fs = std::filesystem;

bool RunContext::has(const std::string& key) const {
  return config_.contains(key) && !config_.at(key).is_null() &&
         !(config_.at(key).is_string() && config_.at(key).get<std::string>().empty());
}

std::string RunContext::str(const std::string& key) const {
  if (!has(key)) throw Error(ErrorCode::InvalidConfig, name_ + " needs " + flag_name(key));
  return config_.at(key).get<std::string>();
}

double RunContext::num(const std::string& key) const { return config_.at(key).get<double>(); }
std::uint64_t RunContext::uint(const std::string& key) const { return config_.at(key).get<std::uint64_t>(); }
bool RunContext::flag(const std::string& key) const { return config_.contains(key) && config_.at(key).get<bool>(); }

std::vector<std::string> RunContext::list(const std::string& key) const {
  if (!config_.contains(key)) return {};
  return config_.at(key).get<std::vector<std::string>>();
}

unsigned RunContext::threads() const {
  const auto t = uint("threads");
  if (t == 0 || t > 1024) throw Error(ErrorCode::InvalidConfig, "--threads must be in 1..1024");
  return static_cast<unsigned>(t);
}

fs::path RunContext::input(const fs::path& path) {
  const auto abs = fs::absolute(path).lexically_normal();
  manifest_.inputs[abs.string()] = sha256_file(abs);
  return abs;
}

fs::path RunContext::output(const fs::path& path) {
  const auto abs = fs::absolute(path).lexically_normal();
  if (abs.has_parent_path()) fs::create_directories(abs.parent_path());
  if (std::find(manifest_.outputs.begin(), manifest_.outputs.end(), abs.string()) == manifest_.outputs.end()) {
    manifest_.outputs.push_back(abs.string());
  }
  return abs;
}

void RunContext::info(const std::string& message) const {
  if (!quiet_) log_ << "signpipe " << name_ << ": " << message << '\n';
}

namespace {

// ---- helpers -------------------------------------------------------------

std::vector<std::string> read_lines(const fs::path& path) {
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

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

void write_json_file(const fs::path& path, const json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, path.string() + ": " + e.what());
  }
}

json violations_to_json(const kb::ValidationReport& report) {
  json list = json::array();
  for (const auto& v : report.violations) {
    list.push_back({{"kind", kb::to_string(v.kind)}, {"symbol", v.symbol}, {"detail", v.detail}});
  }
  return list;
}

KeySpec param(std::string name, ValueType type, json fallback, std::string help) {
  return KeySpec{std::move(name), type, std::move(fallback), std::move(help), KeyRole::Param};
}
KeySpec in_path(std::string name, std::string help) {
  return KeySpec{std::move(name), ValueType::String, nullptr, std::move(help), KeyRole::Input};
}
KeySpec out_path(std::string name, std::string help, json fallback = nullptr) {
  return KeySpec{std::move(name), ValueType::String, std::move(fallback), std::move(help), KeyRole::Output};
}

Schema with_globals(Schema s) {
  s.push_back(param("seed", ValueType::UInt, 0, "seed for every random draw"));
  s.push_back(param("threads", ValueType::UInt, 1, "worker threads (never changes results)"));
  return s;
}

// ---- kb build ------------------------------------------------------------

kb::PoseSequence pose_from_source(const json& rec, const fs::path& base, RunContext& ctx) {
  if (rec.contains("pose")) return kb::pose_from_json(rec.at("pose"));
  const std::string format = rec.value("format", "openpose");
  json frames;
  if (rec.contains("keypoints")) {
    const auto& kp = rec.at("keypoints");
    if (kp.is_string()) {
      fs::path p = kp.get<std::string>();
      if (p.is_relative()) p = base / p;
      frames = read_json_file(ctx.input(p));
    } else {
      frames = kp;
    }
  } else {
    frames = rec.at("frames");
  }
  if (!frames.is_array()) throw Error(ErrorCode::MalformedRecord, "keypoints must be an array of frames");
  kb::PoseSequence pose;
  pose.fps = rec.value("fps", 25.0);
  std::optional<kb::Layout> layout;
  if (rec.contains("layout")) layout = kb::Layout::parse(rec.at("layout").get<std::string>());
  for (const auto& f : frames) {
    if (format == "openpose") {
      pose.frames.push_back(kb::parse_openpose_frame(f, layout.value_or(kb::Layout::openpose())));
    } else if (format == "mediapipe") {
      pose.frames.push_back(kb::parse_mediapipe_frame(f, layout.value_or(kb::Layout::mediapipe())));
    } else {
      throw Error(ErrorCode::MalformedRecord, "unknown keypoint format '" + format + "'");
    }
  }
  return pose;
}

json run_kb_build(RunContext& ctx) {
  const auto source = ctx.input_key("source");
  const auto dim = ctx.uint("embedding_dim");
  const auto embedder = ctx.str("embedder");
  if (embedder != "hashing" && embedder != "none") {
    throw Error(ErrorCode::InvalidConfig, "--embedder must be hashing or none");
  }
  std::unique_ptr<cvr::HashingEmbeddingProvider> hashing;
  if (embedder == "hashing") {
    if (dim == 0) throw Error(ErrorCode::InvalidConfig, "--embedding-dim must be positive");
    hashing = std::make_unique<cvr::HashingEmbeddingProvider>(dim);
  }

  std::vector<kb::GlossEntry> entries;
  std::size_t lineno = 0;
  for (const auto& line : read_lines(source)) {
    ++lineno;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      const auto rec = json::parse(line);
      kb::GlossEntry e;
      e.symbol = rec.at("symbol").get<std::string>();
      e.synonyms = rec.value("synonyms", std::vector<std::string>{});
      if (rec.contains("embedding") && !rec.at("embedding").is_null()) {
        e.embedding = rec.at("embedding").get<std::vector<double>>();
      } else if (hashing) {
        e.embedding = hashing->embed(e.symbol);
      }
      e.pose = pose_from_source(rec, source.parent_path(), ctx);
      entries.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw LineError(ErrorCode::MalformedRecord, lineno, ex.what());
    } catch (const LineError&) {
      throw;
    } catch (const Error& ex) {
      throw LineError(ex.code(), lineno, ex.detail());
    }
  }
  if (entries.empty()) throw Error(ErrorCode::EmptyInput, "no entries in " + source.string());

  const auto report = kb::validate_entries(entries, dim);
  if (!report.ok()) {
    for (const auto& v : report.violations) ctx.info(kb::to_string(v.kind) + " " + v.symbol + ": " + v.detail);
    throw Error(ErrorCode::MalformedRecord, std::to_string(report.violations.size()) + " validation violations");
  }
  kb::KnowledgeBase base;
  base.embedding_dim = dim;
  for (auto& e : entries) base.put(std::move(e));
  const auto out = ctx.output_key("out");
  kb::save_kb(base, out);
  ctx.info("wrote " + std::to_string(base.entries.size()) + " entries to " + out.string());
  return json{{"entries", base.entries.size()}, {"embedding_dim", dim}, {"out", out.string()}};
}

// ---- kb validate ---------------------------------------------------------

json run_kb_validate(RunContext& ctx) {
  const auto records = kb::read_kb_records(ctx.input_key("kb"));
  const auto report = kb::validate_entries(records.entries, records.embedding_dim);
  json result{{"ok", report.ok()},
              {"entries", records.entries.size()},
              {"embedding_dim", records.embedding_dim},
              {"violations", violations_to_json(report)}};
  if (ctx.has("out")) write_json_file(ctx.output_key("out"), result);
  if (!report.ok()) ctx.exit_code = 1;
  return result;
}

// ---- split ---------------------------------------------------------------

json run_split(RunContext& ctx) {
  if (ctx.has("kb") == ctx.has("n_from")) throw Error(ErrorCode::InvalidConfig, "give exactly one of --kb, --n-from");
  std::vector<std::string> ids;
  if (ctx.has("kb")) {
    for (const auto& e : kb::read_kb_records(ctx.input_key("kb")).entries) ids.push_back(e.symbol);
  } else {
    for (auto& line : read_lines(ctx.input_key("n_from"))) {
      const auto b = line.find_first_not_of(" \t");
      if (b == std::string::npos) continue;
      ids.push_back(line.substr(b, line.find_last_not_of(" \t") - b + 1));
    }
  }
  const auto split = kb::split_dataset(ids, ctx.seed());
  const auto out = ctx.output_key("out");
  write_json_file(out, kb::split_to_json(split));
  return json{{"train", split.train.size()}, {"dev", split.dev.size()}, {"test", split.test.size()},
              {"out", out.string()}};
}

// ---- resolve -------------------------------------------------------------

json run_resolve(RunContext& ctx) {
  const auto base = kb::load_kb(ctx.input_key("kb"));
  cvr::CascadeConfig cfg;
  cfg.accept_threshold = ctx.num("accept_threshold");
  cfg.tokenizer = cvr::parse_tokenizer_mode(ctx.str("tokenizer"));
  cfg.on_unresolved = cvr::parse_on_unresolved(ctx.str("on_unresolved"));
  cfg.max_synonyms = ctx.uint("max_synonyms");

  std::unique_ptr<cvr::EmbeddingProvider> provider;
  const auto embedder = ctx.str("embedder");
  if (embedder == "hashing") {
    provider = std::make_unique<cvr::HashingEmbeddingProvider>(base.embedding_dim);
  } else if (embedder == "table") {
    provider = std::make_unique<cvr::TableEmbeddingProvider>(
        cvr::TableEmbeddingProvider::load(ctx.input_key("embedding_table")));
  } else if (embedder != "none") {
    throw Error(ErrorCode::InvalidConfig, "--embedder must be hashing, table or none");
  }
  std::unique_ptr<cvr::SynonymBackend> backend;
  const auto synonyms = ctx.str("synonyms");
  if (synonyms == "kb") {
    backend = std::make_unique<cvr::KbSynonymBackend>(base);
  } else if (synonyms != "none") {
    throw Error(ErrorCode::InvalidConfig, "--synonyms must be kb or none");
  }

  const cvr::Resolver resolver(base, provider.get(), backend.get(), cfg);
  std::vector<std::string> sentences;
  for (auto& line : read_lines(ctx.input_key("input"))) {
    if (line.find_first_not_of(" \t") != std::string::npos) sentences.push_back(std::move(line));
  }
  std::vector<json> records(sentences.size());
  parallel_for(sentences.size(), ctx.threads(), [&](std::size_t i) {
    try {
      records[i] = cvr::resolution_to_json(sentences[i], resolver.resolve_sentence(sentences[i]));
    } catch (const Error& e) {
      throw Error(e.code(), "sentence " + std::to_string(i + 1) + ": " + e.detail());
    }
  });

  std::map<std::string, std::size_t> levels{{"direct", 0}, {"embedding", 0}, {"synonym", 0}, {"unresolved", 0}};
  std::size_t items = 0;
  auto out = open_out(ctx.output_key("out"));
  for (const auto& r : records) {
    out << r.dump() << '\n';
    items += r.at("items").size();
    for (const auto& t : r.at("traces")) ++levels[t.at("level").get<std::string>()];
  }
  return json{{"sentences", sentences.size()}, {"items", items}, {"levels", levels}};
}

// ---- perturb -------------------------------------------------------------

json run_perturb(RunContext& ctx) {
  perturb::PerturbConfig cfg;
  cfg.theta = ctx.num("theta");
  cfg.radius = ctx.num("radius");
  cfg.w_large = ctx.num("w_large");
  cfg.w_small = ctx.has("w_small") ? ctx.num("w_small") : 1.0 - cfg.w_large;
  cfg.ops_large = perturb::parse_op_list(ctx.str("ops_large"));
  cfg.ops_small = ctx.has("ops_small") ? perturb::parse_op_list(ctx.str("ops_small")) : std::vector<perturb::PerturbOp>{};
  cfg.seed = ctx.seed();
  cfg.check();

  perturb::VideoClip clip;
  clip.frames = perturb::read_clip(ctx.input_key("clip"));
  clip.landmarks = perturb::read_landmarks(ctx.input_key("landmarks"));
  const auto pair = perturb::perturb_clip(clip, cfg, ctx.threads());

  perturb::write_clip(ctx.output_key("out"), pair.perturbed.frames);
  if (ctx.has("masks_out")) perturb::write_clip(ctx.output_key("masks_out"), perturb::masks_as_frames(pair.masks));
  if (ctx.has("landmarks_out")) perturb::write_landmarks(ctx.output_key("landmarks_out"), *pair.perturbed.landmarks);

  std::vector<std::size_t> masked;
  for (const auto& m : pair.masks) masked.push_back(m.count());
  return json{{"frames", clip.frames.size()},
              {"masked_pixels", masked},
              {"temporal_order", pair.temporal_order},
              {"reconstruction_loss", perturb::reconstruction_loss(pair.original, pair.perturbed)},
              {"perturb_config", perturb::config_to_json(cfg)}};
}

// ---- loss ----------------------------------------------------------------

json run_loss(RunContext& ctx) {
  distill::LossInputs in;
  auto pair = [&](const char* term, std::optional<distill::SequencePair>& slot) {
    const std::string p = std::string(term) + "_p", q = std::string(term) + "_q";
    if (!ctx.has(p) && !ctx.has(q)) return;
    if (!ctx.has(p) || !ctx.has(q)) throw Error(ErrorCode::InvalidConfig, std::string(term) + " needs both sides");
    try {
      slot = distill::SequencePair{distill::read_distributions(ctx.input_key(p)),
                                   distill::read_distributions(ctx.input_key(q))};
    } catch (const Error& e) {
      throw Error(e.code(), std::string(term) + "_kl: " + e.detail());
    }
  };
  pair("self", in.self_kl);
  pair("lm_video", in.lm_video_kl);
  pair("lm_t", in.lm_t_kl);
  if (ctx.has("ce_pred") || ctx.has("ce_targets")) {
    in.ce = distill::CrossEntropyInput{distill::read_distributions(ctx.input_key("ce_pred")),
                                       distill::read_targets(ctx.input_key("ce_targets"))};
  }
  const bool recon = ctx.has("recon_a") || ctx.has("recon_b");
  if (!in.self_kl && !in.lm_video_kl && !in.lm_t_kl && !in.ce && !recon) {
    throw Error(ErrorCode::InvalidConfig, "nothing to compute: give --pairs, --ce or --recon");
  }

  distill::LossWeights w;
  w.self_kl = ctx.num("weight_self_kl");
  w.lm_video_kl = ctx.num("weight_lm_video_kl");
  w.lm_t_kl = ctx.num("weight_lm_t_kl");
  w.ce = ctx.num("weight_ce");
  const auto breakdown = distill::total_loss(in, w, ctx.threads());
  json result = distill::breakdown_to_json(breakdown, w);
  if (recon) {
    perturb::VideoClip a, b;
    a.frames = perturb::read_clip(ctx.input_key("recon_a"));
    b.frames = perturb::read_clip(ctx.input_key("recon_b"));
    result["reconstruction_loss"] = perturb::reconstruction_loss(a, b);
  }
  if (ctx.has("out")) write_json_file(ctx.output_key("out"), result);
  return result;
}

// ---- corrupt -------------------------------------------------------------

json run_corrupt(RunContext& ctx) {
  const auto tokenizer = ctx.str("tokenizer");
  if (tokenizer != "whitespace" && tokenizer != "char") {
    throw Error(ErrorCode::InvalidConfig, "--tokenizer must be whitespace or char");
  }
  std::vector<textgen::Tokens> sentences;
  for (const auto& line : read_lines(ctx.input_key("input"))) {
    auto tokens = tokenizer == "char" ? eval::tokenize_for_eval(line, eval::EvalTokenizer::Char)
                                      : utf8::split_whitespace(line);
    if (!tokens.empty()) sentences.push_back(std::move(tokens));
  }

  textgen::CorruptConfig cfg;
  cfg.p_shuffle = ctx.num("p_shuffle");
  cfg.p_delete = ctx.num("p_delete");
  cfg.p_substitute = ctx.num("p_substitute");
  cfg.p_insert = ctx.num("p_insert");
  cfg.shuffle_window = ctx.uint("shuffle_window");
  cfg.min_length = ctx.flag("allow_empty") ? 0 : ctx.uint("min_length");
  cfg.seed = ctx.seed();
  std::set<std::string> vocab;
  if (ctx.has("vocab")) {
    for (const auto& line : read_lines(ctx.input_key("vocab")))
      for (auto& t : utf8::split_whitespace(line)) vocab.insert(std::move(t));
  } else {
    for (const auto& s : sentences) vocab.insert(s.begin(), s.end());
  }
  cfg.vocab.assign(vocab.begin(), vocab.end());

  const auto records = textgen::generate_corpus(sentences, cfg, ctx.uint("reps"), ctx.threads());
  auto out = open_out(ctx.output_key("out"));
  textgen::write_records(out, records);
  std::size_t edits = 0;
  for (const auto& r : records) edits += r.edits.size();
  return json{{"sentences", sentences.size()}, {"records", records.size()}, {"edits", edits},
              {"vocab_size", cfg.vocab.size()}};
}

// ---- eval ----------------------------------------------------------------

json run_eval(RunContext& ctx) {
  const bool texts = ctx.has("hyp") || ctx.has("ref");
  if (!texts && !ctx.has("ratings")) throw Error(ErrorCode::InvalidConfig, "give --hyp and --ref, or --ratings");
  json result = json::object();
  if (texts) {
    const auto rep = eval::evaluate_files(ctx.input_key("hyp"), ctx.input_key("ref"),
                                          eval::parse_eval_tokenizer(ctx.str("tokenizer")),
                                          eval::parse_smoothing(ctx.str("smoothing")), ctx.threads());
    result = eval::report_to_json(rep);
  }
  if (ctx.has("ratings")) result["fleiss_kappa"] = eval::fleiss_kappa(eval::read_rater_matrix(ctx.input_key("ratings")));
  if (ctx.has("out")) write_json_file(ctx.output_key("out"), result);
  return result;
}

std::vector<Command> build_commands() {
  std::vector<Command> c;
  c.push_back({"kb.build", "Build a knowledge base from raw entries and keypoint files",
               with_globals({in_path("source", "JSONL of raw entries"), out_path("out", "KB file to write"),
                             param("embedding_dim", ValueType::UInt, 32, "embedding length"),
                             param("embedder", ValueType::String, "hashing",
                                   "fill missing embeddings: hashing | none")}),
               run_kb_build});
  c.push_back({"kb.validate", "Check a KB file and report every violation",
               with_globals({in_path("kb", "KB file"), out_path("out", "report JSON")}), run_kb_validate});
  c.push_back({"split", "Seeded 80/10/10 split of KB symbols or an id list",
               with_globals({in_path("kb", "KB file"), in_path("n_from", "one id per line"),
                             out_path("out", "split JSON", "split.json")}),
               run_split});
  c.push_back({"resolve", "Map sentences to symbol sequences with the three-level cascade",
               with_globals({in_path("kb", "KB file"), in_path("input", "one sentence per line"),
                             out_path("out", "resolution JSONL"),
                             param("accept_threshold", ValueType::Float, 0.7, "embedding acceptance threshold"),
                             param("tokenizer", ValueType::String, "lexicon", "lexicon | char"),
                             param("on_unresolved", ValueType::String, "skip", "skip | error"),
                             param("max_synonyms", ValueType::UInt, 8, "synonym proposals per token"),
                             param("embedder", ValueType::String, "hashing", "hashing | table | none"),
                             in_path("embedding_table", "JSONL {text, embedding} for --embedder table"),
                             param("synonyms", ValueType::String, "kb", "kb | none")}),
               run_resolve});
  c.push_back({"perturb", "Landmark-weighted perturbation of a clip",
               with_globals({in_path("clip", "SPC1 clip"), in_path("landmarks", "landmark JSONL"),
                             out_path("out", "perturbed SPC1 clip"), out_path("masks_out", "mask clip (0/1)"),
                             out_path("landmarks_out", "landmarks in perturbed frame order"),
                             param("theta", ValueType::Float, 2.0, "speed threshold, px/frame"),
                             param("radius", ValueType::Float, 15.0, "mask radius, px"),
                             param("w_large", ValueType::Float, 0.7, "weight of the fast-motion branch"),
                             param("w_small", ValueType::Float, nullptr, "weight of the rest (default 1 - w_large)"),
                             param("ops_large", ValueType::String, "pixel_shuffle,block_occlude:8x8",
                                   "ops inside the mask"),
                             param("ops_small", ValueType::String, "gaussian_noise:0.05", "ops outside the mask")}),
               run_perturb});
  c.push_back({"loss", "Distillation losses and total objective",
               with_globals({in_path("self_p", "3D-conv branch distributions"),
                             in_path("self_q", "temporal branch distributions"),
                             in_path("lm_video_p", "landmark branch, before fusion"),
                             in_path("lm_video_q", "video branch, before fusion"),
                             in_path("lm_t_p", "landmark branch, after fusion"),
                             in_path("lm_t_q", "video branch, after fusion"),
                             in_path("ce_pred", "predicted distributions"), in_path("ce_targets", "class indices"),
                             in_path("recon_a", "SPC1 clip"), in_path("recon_b", "SPC1 clip"),
                             param("weight_self_kl", ValueType::Float, 1.0, "term weight"),
                             param("weight_lm_video_kl", ValueType::Float, 1.0, "term weight (0 disables)"),
                             param("weight_lm_t_kl", ValueType::Float, 1.0, "term weight"),
                             param("weight_ce", ValueType::Float, 1.0, "term weight"),
                             out_path("out", "breakdown JSON")}),
               run_loss});
  c.push_back({"corrupt", "Generate corrupted/clean sentence pairs",
               with_globals({in_path("input", "one sentence per line"), out_path("out", "record JSONL"),
                             param("p_shuffle", ValueType::Float, 0.15, "per-site shuffle probability"),
                             param("p_delete", ValueType::Float, 0.15, "per-site delete probability"),
                             param("p_substitute", ValueType::Float, 0.15, "per-site substitute probability"),
                             param("p_insert", ValueType::Float, 0.15, "per-site insert probability"),
                             param("shuffle_window", ValueType::UInt, 3, "local shuffle window"),
                             param("min_length", ValueType::UInt, 1, "deletions stop at this length"),
                             param("allow_empty", ValueType::Bool, false, "same as --min-length 0"),
                             in_path("vocab", "substitution/insertion tokens (default: corpus tokens)"),
                             param("reps", ValueType::UInt, 1, "records per sentence"),
                             param("tokenizer", ValueType::String, "whitespace", "whitespace | char")}),
               run_corrupt});
  c.push_back({"eval", "BLEU-1..4, ROUGE-L, CER and Fleiss' kappa",
               with_globals({in_path("hyp", "hypotheses, one per line"), in_path("ref", "references, one per line"),
                             in_path("ratings", "rater count matrix, one item per line"),
                             param("tokenizer", ValueType::String, "char", "char | whitespace"),
                             param("smoothing", ValueType::String, "none", "none | add_one"),
                             out_path("out", "report JSON")}),
               run_eval});
  return c;
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> all = build_commands();
  return all;
}

const Command* find_command(const std::string& id) {
  for (const auto& c : commands()) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

}  // namespace signpipe::cli
