#include "signpipe/perturb/clip_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <map>

#include <json.hpp>

#include "signpipe/error.hpp"
#include "signpipe/kb/keypoints.hpp"

namespace signpipe::perturb {

namespace {

constexpr std::array<char, 4> kMagic{'S', 'P', 'C', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                         static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  out.write(bytes, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw Error(ErrorCode::MalformedDocument, "truncated clip header");
  return std::uint32_t{b[0]} | (std::uint32_t{b[1]} << 8) | (std::uint32_t{b[2]} << 16) | (std::uint32_t{b[3]} << 24);
}

std::uint32_t narrow(std::size_t v, const char* what) {
  if (v > 0xFFFFFFFFu) throw Error(ErrorCode::InvalidConfig, std::string(what) + " does not fit in u32");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

void write_clip(std::ostream& out, const std::vector<FrameGrid>& frames) {
  if (frames.empty()) throw Error(ErrorCode::EmptyInput, "no frames to write");
  const auto shape = frames.front().shape();
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, narrow(shape.height, "height"));
  put_u32(out, narrow(shape.width, "width"));
  put_u32(out, narrow(shape.channels, "channels"));
  put_u32(out, narrow(frames.size(), "frame count"));
  for (const auto& f : frames) {
    if (!(f.shape() == shape)) throw Error(ErrorCode::ShapeMismatch, "frames differ in shape");
    for (float v : f.values()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  }
}

void write_clip(const std::filesystem::path& path, const std::vector<FrameGrid>& frames) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write_clip(out, frames);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::vector<FrameGrid> read_clip(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw Error(ErrorCode::MalformedDocument, "not an SPC1 clip");
  }
  FrameShape shape;
  shape.height = get_u32(in);
  shape.width = get_u32(in);
  shape.channels = get_u32(in);
  const std::uint32_t frames = get_u32(in);
  std::vector<FrameGrid> out;
  out.reserve(frames);
  std::vector<unsigned char> raw(shape.values() * 4);
  for (std::uint32_t t = 0; t < frames; ++t) {
    if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
      throw Error(ErrorCode::MalformedDocument, "clip truncated in frame " + std::to_string(t));
    }
    std::vector<float> values(shape.values());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const unsigned char* b = raw.data() + 4 * i;
      const std::uint32_t bits = std::uint32_t{b[0]} | (std::uint32_t{b[1]} << 8) | (std::uint32_t{b[2]} << 16) |
                                 (std::uint32_t{b[3]} << 24);
      values[i] = std::bit_cast<float>(bits);
    }
    out.emplace_back(shape, std::move(values));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::MalformedDocument, "trailing bytes after the last frame");
  }
  return out;
}

std::vector<FrameGrid> read_clip(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_clip(in);
}

void write_landmarks(std::ostream& out, const std::vector<Landmarks>& track) {
  for (std::size_t t = 0; t < track.size(); ++t) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : track[t]) points.push_back({p.x, p.y, p.confidence});
    out << nlohmann::json{{"t", t}, {"points", std::move(points)}}.dump() << '\n';
  }
}

void write_landmarks(const std::filesystem::path& path, const std::vector<Landmarks>& track) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write_landmarks(out, track);
}

std::vector<Landmarks> read_landmarks(std::istream& in) {
  std::map<std::size_t, Landmarks> by_t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto rec = nlohmann::json::parse(line);
      const auto t = rec.at("t").get<std::size_t>();
      Landmarks points;
      for (const auto& p : rec.at("points")) {
        const auto v = p.get<std::vector<double>>();
        if (v.size() != 2 && v.size() != 3) throw Error(ErrorCode::MalformedRecord, "point needs 2 or 3 values");
        points.push_back(kb::checked_keypoint(v[0], v[1], v.size() == 3 ? v[2] : 1.0));
      }
      if (!by_t.emplace(t, std::move(points)).second) {
        throw Error(ErrorCode::MalformedRecord, "frame " + std::to_string(t) + " repeated");
      }
    } catch (const nlohmann::json::exception& e) {
      throw LineError(ErrorCode::MalformedRecord, lineno, e.what());
    } catch (const LineError&) {
      throw;
    } catch (const Error& e) {
      throw LineError(e.code(), lineno, e.detail());
    }
  }
  std::vector<Landmarks> track;
  track.reserve(by_t.size());
  for (auto& [t, points] : by_t) {
    if (t != track.size()) throw Error(ErrorCode::MalformedRecord, "landmark frames must cover t = 0..T-1");
    track.push_back(std::move(points));
  }
  return track;
}

std::vector<Landmarks> read_landmarks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_landmarks(in);
}

std::vector<FrameGrid> masks_as_frames(const std::vector<MotionMask>& masks) {
  std::vector<FrameGrid> out;
  out.reserve(masks.size());
  for (const auto& m : masks) {
    std::vector<float> values(m.height() * m.width());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = m.contains_linear(i) ? 1.0f : 0.0f;
    out.emplace_back(FrameShape{m.height(), m.width(), 1}, std::move(values));
  }
  return out;
}

}  // namespace signpipe::perturb
