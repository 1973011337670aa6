#include "signpipe/kb/kb_io.hpp"

#include <fstream>
#include <set>

#include "signpipe/error.hpp"

namespace signpipe::kb {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedRecord, what);
}

const json& require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) malformed(std::string("missing field \"") + key + "\"");
  return obj[key];
}

double as_number(const json& v, const char* what) {
  if (!v.is_number()) malformed(std::string(what) + " must be a number");
  return v.get<double>();
}

}  // namespace

json pose_to_json(const PoseSequence& pose) {
  json frames = json::array();
  for (const auto& f : pose.frames) {
    json flat = json::array();
    for (const auto& p : f.points) {
      flat.push_back(p.x);
      flat.push_back(p.y);
      flat.push_back(p.confidence);
    }
    frames.push_back(std::move(flat));
  }
  const std::string layout = pose.frames.empty() ? Layout::custom(0).name() : pose.frames[0].layout.name();
  return json{{"layout", layout}, {"fps", pose.fps}, {"frames", std::move(frames)}};
}

PoseSequence pose_from_json(const json& pose) {
  if (!pose.is_object()) malformed("pose must be an object");
  const auto& layout_name = require(pose, "layout");
  if (!layout_name.is_string()) malformed("pose.layout must be a string");
  Layout layout = Layout::custom(0);
  try {
    layout = Layout::parse(layout_name.get<std::string>());
  } catch (const Error& e) {
    malformed(e.detail());
  }
  PoseSequence out;
  out.fps = as_number(require(pose, "fps"), "pose.fps");
  const auto& frames = require(pose, "frames");
  if (!frames.is_array()) malformed("pose.frames must be an array");
  out.frames.reserve(frames.size());
  for (const auto& f : frames) {
    if (!f.is_array() || f.size() % 3 != 0) malformed("each frame must be a flat [x,y,c,...] list");
    PoseFrame frame{layout, {}};
    frame.points.reserve(f.size() / 3);
    for (std::size_t i = 0; i < f.size(); i += 3) {
      frame.points.push_back({as_number(f[i], "x"), as_number(f[i + 1], "y"), as_number(f[i + 2], "c")});
    }
    out.frames.push_back(std::move(frame));
  }
  return out;
}

json entry_to_json(const GlossEntry& entry) {
  json j;
  j["symbol"] = entry.symbol;
  j["synonyms"] = entry.synonyms;
  j["embedding"] = entry.embedding ? json(*entry.embedding) : json(nullptr);
  j["pose"] = pose_to_json(entry.pose);
  return j;
}

GlossEntry entry_from_json(const json& record) {
  GlossEntry e;
  const auto& symbol = require(record, "symbol");
  if (!symbol.is_string()) malformed("symbol must be a string");
  e.symbol = symbol.get<std::string>();
  if (record.contains("synonyms")) {
    const auto& syn = record["synonyms"];
    if (!syn.is_array()) malformed("synonyms must be an array");
    for (const auto& s : syn) {
      if (!s.is_string()) malformed("synonyms must be strings");
      e.synonyms.push_back(s.get<std::string>());
    }
  }
  if (record.contains("embedding") && !record["embedding"].is_null()) {
    const auto& emb = record["embedding"];
    if (!emb.is_array()) malformed("embedding must be an array or null");
    std::vector<double> v;
    v.reserve(emb.size());
    for (const auto& x : emb) v.push_back(as_number(x, "embedding value"));
    e.embedding = std::move(v);
  }
  e.pose = pose_from_json(require(record, "pose"));
  return e;
}

KbRecords read_kb_records(std::istream& in) {
  KbRecords out;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw LineError(ErrorCode::MalformedRecord, lineno, e.what());
    }
    try {
      if (!header) {
        const auto& version = require(record, "version");
        if (!version.is_string()) malformed("version must be a string");
        out.version = version.get<std::string>();
        if (out.version != kFormatVersion) {
          throw Error(ErrorCode::SchemaVersionMismatch,
                      "file version '" + out.version + "', expected '" + std::string(kFormatVersion) + "'");
        }
        const auto& dim = require(record, "embedding_dim");
        if (!dim.is_number_unsigned()) malformed("embedding_dim must be a non-negative integer");
        out.embedding_dim = dim.get<std::size_t>();
        header = true;
        continue;
      }
      out.entries.push_back(entry_from_json(record));
      out.lines.push_back(lineno);
    } catch (const LineError&) {
      throw;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MalformedRecord) throw;
      throw LineError(ErrorCode::MalformedRecord, lineno, e.detail());
    }
  }
  if (!header) throw LineError(ErrorCode::MalformedRecord, lineno + 1, "missing header record");
  return out;
}

KbRecords read_kb_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_kb_records(in);
}

KnowledgeBase load_kb(std::istream& in) {
  auto records = read_kb_records(in);
  KnowledgeBase kb;
  kb.embedding_dim = records.embedding_dim;
  kb.version = records.version;
  for (std::size_t i = 0; i < records.entries.size(); ++i) {
    auto& e = records.entries[i];
    if (kb.entries.contains(e.symbol)) {
      throw LineError(ErrorCode::MalformedRecord, records.lines[i], "duplicate symbol '" + e.symbol + "'");
    }
    kb.put(std::move(e));
  }
  return kb;
}

KnowledgeBase load_kb(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return load_kb(in);
}

void save_kb(const KnowledgeBase& kb, std::ostream& out) {
  out << json{{"version", kb.version}, {"embedding_dim", kb.embedding_dim}}.dump() << '\n';
  for (const auto& [symbol, entry] : kb.entries) out << entry_to_json(entry).dump() << '\n';
}

void save_kb(const KnowledgeBase& kb, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  save_kb(kb, out);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

json split_to_json(const SplitAssignment& split) {
  return json{{"seed", split.seed}, {"train", split.train}, {"dev", split.dev}, {"test", split.test}};
}

SplitAssignment split_from_json(const json& doc) {
  SplitAssignment out;
  try {
    out.seed = doc.at("seed").get<std::uint64_t>();
    out.train = doc.at("train").get<std::set<std::string>>();
    out.dev = doc.at("dev").get<std::set<std::string>>();
    out.test = doc.at("test").get<std::set<std::string>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, std::string("split file: ") + e.what());
  }
  return out;
}

}  // namespace signpipe::kb
