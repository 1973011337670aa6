#include "signpipe/cvr/tokenize.hpp"

#include <algorithm>

#include "signpipe/error.hpp"
#include "signpipe/utf8.hpp"

namespace signpipe::cvr {

TokenizerMode parse_tokenizer_mode(std::string_view name) {
  if (name == "char") return TokenizerMode::Char;
  if (name == "lexicon") return TokenizerMode::Lexicon;
  throw Error(ErrorCode::InvalidConfig, "tokenizer must be char or lexicon, got '" + std::string(name) + "'");
}

std::string_view to_string(TokenizerMode mode) {
  return mode == TokenizerMode::Char ? "char" : "lexicon";
}

std::vector<std::string> tokenize_chars(std::string_view text) {
  std::vector<std::string> out;
  for (auto& unit : utf8::scalars(text)) {
    const auto cp = utf8::decode(unit);
    if (cp.size() == 1 && utf8::is_space(cp[0])) continue;
    out.push_back(std::move(unit));
  }
  return out;
}

std::vector<std::string> tokenize_lexicon(std::string_view text, const kb::KnowledgeBase& kb) {
  std::size_t longest = 1;
  for (const auto& [symbol, entry] : kb.entries) {
    longest = std::max(longest, utf8::scalars(symbol).size());
  }

  std::vector<std::string> out;
  for (const auto& word : utf8::split_whitespace(text)) {
    const auto units = utf8::scalars(word);
    std::size_t pos = 0;
    while (pos < units.size()) {
      std::size_t take = 1;
      for (std::size_t len = std::min(longest, units.size() - pos); len > 1; --len) {
        std::string candidate;
        for (std::size_t k = pos; k < pos + len; ++k) candidate += units[k];
        if (kb.find(candidate)) {
          take = len;
          break;
        }
      }
      std::string token;
      for (std::size_t k = pos; k < pos + take; ++k) token += units[k];
      out.push_back(std::move(token));
      pos += take;
    }
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text, TokenizerMode mode, const kb::KnowledgeBase& kb) {
  return mode == TokenizerMode::Char ? tokenize_chars(text) : tokenize_lexicon(text, kb);
}

}  // namespace signpipe::cvr
