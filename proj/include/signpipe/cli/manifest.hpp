#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace signpipe::cli {

/// Lower-case hex SHA-256 of a file's bytes. Throws IoError.
std::string sha256_file(const std::filesystem::path& path);

/// Everything needed to replay a run: the subcommand, its fully resolved
/// config, and digests of every file it read.
struct RunManifest {
  std::string tool_version;
  std::string subcommand;
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::map<std::string, std::string> inputs;  // absolute path -> sha256
  std::vector<std::string> outputs;           // absolute paths, in write order
  std::string json_out;                       // result JSON copy, if requested
};

nlohmann::json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);
void save_manifest(const RunManifest& m, const std::filesystem::path& path);
RunManifest load_manifest(const std::filesystem::path& path);

/// Throws StaleInput naming the first input whose digest changed or that
/// disappeared.
void verify_inputs(const RunManifest& m);

}  // namespace signpipe::cli
