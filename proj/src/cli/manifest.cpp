#include "signpipe/cli/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>

#include "signpipe/error.hpp"

namespace signpipe::cli {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::IoError, "SHA-256 unavailable");
  }
  std::array<char, 1 << 16> buf;
  while (in.read(buf.data(), buf.size()) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest;
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

nlohmann::json manifest_to_json(const RunManifest& m) {
  nlohmann::json inputs = nlohmann::json::object();
  for (const auto& [path, digest] : m.inputs) inputs[path] = {{"sha256", digest}};
  return nlohmann::json{{"tool", "signpipe"},
                        {"tool_version", m.tool_version},
                        {"subcommand", m.subcommand},
                        {"seed", m.seed},
                        {"threads", m.threads},
                        {"config", m.config},
                        {"inputs", inputs},
                        {"outputs", m.outputs},
                        {"json_out", m.json_out}};
}

RunManifest manifest_from_json(const nlohmann::json& j) {
  try {
    RunManifest m;
    m.tool_version = j.at("tool_version").get<std::string>();
    m.subcommand = j.at("subcommand").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.threads = j.at("threads").get<unsigned>();
    m.config = j.at("config");
    if (!m.config.is_object()) throw Error(ErrorCode::MalformedDocument, "manifest config must be an object");
    for (const auto& [path, info] : j.at("inputs").items()) m.inputs[path] = info.at("sha256").get<std::string>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.json_out = j.value("json_out", std::string{});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, std::string("manifest: ") + e.what());
  }
}

void save_manifest(const RunManifest& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << manifest_to_json(m).dump(2) << '\n';
}

RunManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  try {
    return manifest_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, std::string("manifest: ") + e.what());
  }
}

void verify_inputs(const RunManifest& m) {
  for (const auto& [path, digest] : m.inputs) {
    std::string now;
    try {
      now = sha256_file(path);
    } catch (const Error&) {
      throw Error(ErrorCode::StaleInput, "input " + path + " is missing");
    }
    if (now != digest) throw Error(ErrorCode::StaleInput, "input " + path + " changed since the recorded run");
  }
}

}  // namespace signpipe::cli
