#include "signpipe/cvr/providers.hpp"

#include <fstream>

#include <json.hpp>

#include "signpipe/error.hpp"
#include "signpipe/utf8.hpp"

namespace signpipe::cvr {

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

HashingEmbeddingProvider::HashingEmbeddingProvider(std::size_t dimension) : dim_(dimension) {
  if (dim_ == 0) throw Error(ErrorCode::InvalidConfig, "embedding dimension must be positive");
}

std::vector<double> HashingEmbeddingProvider::embed(std::string_view text) {
  std::vector<double> v(dim_, 0.0);
  const auto units = utf8::scalars(text);
  auto add = [&](std::string_view feature, double weight) {
    const std::uint64_t h = fnv1a(feature);
    const double sign = (h >> 63) ? -1.0 : 1.0;
    v[h % dim_] += sign * weight;
  };
  for (std::size_t i = 0; i < units.size(); ++i) {
    add(units[i], 1.0);
    if (i + 1 < units.size()) add(units[i] + "\x1f" + units[i + 1], 0.5);
  }
  return v;
}

TableEmbeddingProvider::TableEmbeddingProvider(std::map<std::string, std::vector<double>, std::less<>> table,
                                               std::size_t dimension,
                                               std::shared_ptr<EmbeddingProvider> fallback)
    : table_(std::move(table)), dim_(dimension), fallback_(std::move(fallback)) {
  for (const auto& [text, vec] : table_) {
    if (vec.size() != dim_) {
      throw Error(ErrorCode::DimensionMismatch, "table entry '" + text + "' has length " +
                                                    std::to_string(vec.size()));
    }
  }
  if (fallback_ && fallback_->dimension() != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "fallback provider dimension differs from table");
  }
}

TableEmbeddingProvider TableEmbeddingProvider::load(const std::filesystem::path& path,
                                                    std::shared_ptr<EmbeddingProvider> fallback) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::map<std::string, std::vector<double>, std::less<>> table;
  std::size_t dim = fallback ? fallback->dimension() : 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto rec = nlohmann::json::parse(line);
      auto vec = rec.at("embedding").get<std::vector<double>>();
      if (dim == 0) dim = vec.size();
      table.insert_or_assign(rec.at("text").get<std::string>(), std::move(vec));
    } catch (const nlohmann::json::exception& e) {
      throw LineError(ErrorCode::MalformedRecord, lineno, e.what());
    }
  }
  return TableEmbeddingProvider(std::move(table), dim, std::move(fallback));
}

std::vector<double> TableEmbeddingProvider::embed(std::string_view text) {
  if (auto it = table_.find(text); it != table_.end()) return it->second;
  if (fallback_) return fallback_->embed(text);
  throw Error(ErrorCode::BackendError, "no embedding for '" + std::string(text) + "'");
}

KbSynonymBackend::KbSynonymBackend(const kb::KnowledgeBase& kb) {
  for (const auto& [symbol, entry] : kb.entries) {
    for (const auto& syn : entry.synonyms) by_synonym_[syn].push_back(symbol);
  }
}

std::vector<std::string> KbSynonymBackend::propose(std::string_view token, std::span<const std::string>,
                                                   std::size_t max) {
  auto it = by_synonym_.find(token);
  if (it == by_synonym_.end()) return {};
  std::vector<std::string> out(it->second.begin(),
                               it->second.begin() + std::min(max, it->second.size()));
  return out;
}

}  // namespace signpipe::cvr
