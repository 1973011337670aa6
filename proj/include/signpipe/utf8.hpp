#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace signpipe::utf8 {

/// Splits text into one string per Unicode scalar value. Invalid bytes are
/// passed through as single-byte units rather than rejected.
std::vector<std::string> scalars(std::string_view text);

/// Decodes to code points (invalid bytes map to U+FFFD).
std::u32string decode(std::string_view text);

bool is_space(char32_t cp) noexcept;

/// Splits on ASCII / Unicode whitespace, dropping empty pieces.
std::vector<std::string> split_whitespace(std::string_view text);

}  // namespace signpipe::utf8
