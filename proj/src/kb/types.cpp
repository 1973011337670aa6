#include "signpipe/kb/types.hpp"

#include <charconv>

#include "signpipe/error.hpp"

namespace signpipe::kb {

Layout Layout::parse(std::string_view name) {
  if (name == "openpose_body25_hands" || name == "openpose") return openpose();
  if (name == "mediapipe_holistic" || name == "mediapipe") return mediapipe();
  constexpr std::string_view prefix = "custom:";
  if (name.substr(0, prefix.size()) == prefix) {
    const auto digits = name.substr(prefix.size());
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty()) {
      return custom(n);
    }
  }
  throw Error(ErrorCode::MalformedDocument, "unknown layout '" + std::string(name) + "'");
}

std::string Layout::name() const {
  switch (kind_) {
    case Kind::OpenPoseBody25Hands: return "openpose_body25_hands";
    case Kind::MediaPipeHolistic: return "mediapipe_holistic";
    case Kind::Custom: return "custom:" + std::to_string(count_);
  }
  return {};
}

}  // namespace signpipe::kb
