#include "signpipe/utf8.hpp"

namespace signpipe::utf8 {
namespace {

// Length of the sequence starting at text[i], or 0 when the lead byte or a
// continuation byte is invalid.
std::size_t sequence_length(std::string_view text, std::size_t i, char32_t* out) {
  const auto lead = static_cast<unsigned char>(text[i]);
  std::size_t len;
  char32_t cp;
  if (lead < 0x80) {
    *out = lead;
    return 1;
  } else if ((lead & 0xE0) == 0xC0) {
    len = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    cp = lead & 0x07;
  } else {
    return 0;
  }
  if (i + len > text.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    const auto c = static_cast<unsigned char>(text[i + k]);
    if ((c & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (c & 0x3F);
  }
  *out = cp;
  return len;
}

}  // namespace

std::vector<std::string> scalars(std::string_view text) {
  std::vector<std::string> out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    char32_t cp;
    std::size_t len = sequence_length(text, i, &cp);
    if (len == 0) len = 1;
    out.emplace_back(text.substr(i, len));
    i += len;
  }
  return out;
}

std::u32string decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    char32_t cp;
    const std::size_t len = sequence_length(text, i, &cp);
    if (len == 0) {
      out.push_back(char32_t{0xFFFD});
      ++i;
    } else {
      out.push_back(cp);
      i += len;
    }
  }
  return out;
}

bool is_space(char32_t cp) noexcept {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (std::size_t i = 0; i < text.size();) {
    char32_t cp;
    std::size_t len = sequence_length(text, i, &cp);
    if (len == 0) {
      len = 1;
      cp = 0xFFFD;
    }
    if (is_space(cp)) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current.append(text.substr(i, len));
    }
    i += len;
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

}  // namespace signpipe::utf8
