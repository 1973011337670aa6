#include "signpipe/cvr/resolver.hpp"

#include <cmath>

#include "signpipe/error.hpp"

namespace signpipe::cvr {

using nlohmann::json;

OnUnresolved parse_on_unresolved(std::string_view name) {
  if (name == "skip") return OnUnresolved::Skip;
  if (name == "error") return OnUnresolved::Error;
  throw Error(ErrorCode::InvalidConfig, "on-unresolved must be skip or error, got '" + std::string(name) + "'");
}

std::string_view to_string(OnUnresolved policy) { return policy == OnUnresolved::Skip ? "skip" : "error"; }

std::string_view to_string(Level level) {
  switch (level) {
    case Level::Direct: return "direct";
    case Level::Embedding: return "embedding";
    case Level::Synonym: return "synonym";
    case Level::Unresolved: return "unresolved";
  }
  return "unknown";
}

Resolver::Resolver(const kb::KnowledgeBase& kb, EmbeddingProvider* provider, SynonymBackend* backend,
                   CascadeConfig cfg)
    : kb_(kb), provider_(provider), backend_(backend), cfg_(cfg) {
  if (!std::isfinite(cfg_.accept_threshold)) {
    throw Error(ErrorCode::InvalidConfig, "accept_threshold must be finite");
  }
  if (provider_) {
    index_.emplace(kb_);
    if (provider_->dimension() != index_->dimension()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "provider dimension " + std::to_string(provider_->dimension()) + " != KB dimension " +
                      std::to_string(index_->dimension()));
    }
  }
}

std::vector<double> Resolver::embed(std::string_view token) const {
  std::unique_lock<std::mutex> lock(provider_mutex_, std::defer_lock);
  if (!provider_->reentrant()) lock.lock();
  std::vector<double> v;
  try {
    v = provider_->embed(token);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::BackendError, "embedding provider failed on token '" + std::string(token) + "': " + e.what());
  }
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::BackendError, "embedding provider returned a non-finite value for '" +
                                               std::string(token) + "'");
    }
  }
  return v;
}

std::vector<std::string> Resolver::propose(std::string_view token, std::span<const std::string> context) const {
  std::unique_lock<std::mutex> lock(backend_mutex_, std::defer_lock);
  if (!backend_->reentrant()) lock.lock();
  try {
    return backend_->propose(token, context, cfg_.max_synonyms);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::BackendError, "synonym backend failed on token '" + std::string(token) + "': " + e.what());
  }
}

std::pair<const kb::GlossEntry*, ResolutionTrace> Resolver::resolve_token(
    std::string_view token, std::span<const std::string> context) const {
  ResolutionTrace trace;
  trace.token = std::string(token);
  trace.threshold = cfg_.accept_threshold;

  if (const auto* hit = kb_.find(token)) {
    trace.level = Level::Direct;
    trace.chosen_symbol = hit->symbol;
    trace.candidates_examined = 1;
    return {hit, std::move(trace)};
  }

  if (index_) {
    const auto query = embed(token);
    SearchHit best;
    try {
      best = index_->search(query);
    } catch (const Error& e) {
      throw Error(e.code(), "token '" + std::string(token) + "': " + e.detail());
    }
    trace.candidates_examined += best.examined;
    trace.nearest_symbol = best.entry->symbol;
    trace.nearest_score = best.score;
    if (best.score >= cfg_.accept_threshold) {
      trace.level = Level::Embedding;
      trace.chosen_symbol = best.entry->symbol;
      trace.score = best.score;
      return {best.entry, std::move(trace)};
    }
  }

  if (backend_) {
    for (const auto& candidate : propose(token, context)) {
      ++trace.candidates_examined;
      if (const auto* hit = kb_.find(candidate)) {
        trace.level = Level::Synonym;
        trace.chosen_symbol = hit->symbol;
        return {hit, std::move(trace)};
      }
    }
  }

  trace.level = Level::Unresolved;
  return {nullptr, std::move(trace)};
}

SymbolPoseSequence Resolver::resolve_sentence(std::string_view text) const {
  const auto tokens = tokenize(text, cfg_.tokenizer, kb_);
  SymbolPoseSequence out;
  out.traces.reserve(tokens.size());
  for (const auto& token : tokens) {
    auto [entry, trace] = resolve_token(token, tokens);
    if (!entry && cfg_.on_unresolved == OnUnresolved::Error) {
      throw Error(ErrorCode::UnresolvedToken, "no gloss for token '" + token + "'");
    }
    if (entry) out.items.push_back({entry->symbol, entry->pose});
    out.traces.push_back(std::move(trace));
  }
  return out;
}

std::pair<std::optional<ResolvedItem>, ResolutionTrace> resolve_token(std::string_view token,
                                                                      const kb::KnowledgeBase& kb,
                                                                      EmbeddingProvider* provider,
                                                                      SynonymBackend* backend,
                                                                      const CascadeConfig& cfg) {
  Resolver resolver(kb, provider, backend, cfg);
  auto [entry, trace] = resolver.resolve_token(token);
  std::optional<ResolvedItem> item;
  if (entry) item = ResolvedItem{entry->symbol, entry->pose};
  return {std::move(item), std::move(trace)};
}

SymbolPoseSequence resolve_sentence(std::string_view text, const kb::KnowledgeBase& kb,
                                    EmbeddingProvider* provider, SynonymBackend* backend,
                                    const CascadeConfig& cfg) {
  return Resolver(kb, provider, backend, cfg).resolve_sentence(text);
}

json trace_to_json(const ResolutionTrace& trace) {
  json j;
  j["token"] = trace.token;
  j["level"] = std::string(to_string(trace.level));
  j["symbol"] = trace.chosen_symbol ? json(*trace.chosen_symbol) : json(nullptr);
  j["score"] = trace.score ? json(*trace.score) : json(nullptr);
  j["candidates_examined"] = trace.candidates_examined;
  j["threshold"] = trace.threshold;
  if (trace.nearest_symbol) {
    j["nearest_symbol"] = *trace.nearest_symbol;
    j["nearest_score"] = *trace.nearest_score;
  }
  return j;
}

json resolution_to_json(std::string_view text, const SymbolPoseSequence& seq) {
  json items = json::array();
  for (const auto& item : seq.items) items.push_back({{"symbol", item.symbol}, {"pose_ref", item.symbol}});
  json traces = json::array();
  for (const auto& t : seq.traces) traces.push_back(trace_to_json(t));
  return json{{"text", std::string(text)}, {"items", std::move(items)}, {"traces", std::move(traces)}};
}

}  // namespace signpipe::cvr
