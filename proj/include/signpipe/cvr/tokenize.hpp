#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "signpipe/kb/types.hpp"

namespace signpipe::cvr {

enum class TokenizerMode { Char, Lexicon };

TokenizerMode parse_tokenizer_mode(std::string_view name);
std::string_view to_string(TokenizerMode mode);

/// One token per Unicode scalar, whitespace dropped.
std::vector<std::string> tokenize_chars(std::string_view text);

/// Greedy longest match against KB symbols; positions no symbol covers fall
/// back to single characters. Whitespace separates and is dropped.
std::vector<std::string> tokenize_lexicon(std::string_view text, const kb::KnowledgeBase& kb);

std::vector<std::string> tokenize(std::string_view text, TokenizerMode mode, const kb::KnowledgeBase& kb);

}  // namespace signpipe::cvr
