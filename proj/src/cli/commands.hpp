#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "signpipe/cli/config.hpp"
#include "signpipe/cli/manifest.hpp"

namespace signpipe::cli {

/// What a subcommand handler sees: the resolved config plus hooks that
/// record every file read or written into the manifest.
class RunContext {
 public:
  RunContext(const nlohmann::json& config, RunManifest& manifest, std::ostream& log, bool quiet, std::string name)
      : config_(config), manifest_(manifest), log_(log), quiet_(quiet), name_(std::move(name)) {}

  bool has(const std::string& key) const;
  std::string str(const std::string& key) const;
  double num(const std::string& key) const;
  std::uint64_t uint(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<std::string> list(const std::string& key) const;

  std::uint64_t seed() const { return uint("seed"); }
  unsigned threads() const;

  /// Hashes the file into the manifest and returns its path.
  std::filesystem::path input(const std::filesystem::path& path);
  std::filesystem::path input_key(const std::string& key) { return input(str(key)); }
  std::filesystem::path output(const std::filesystem::path& path);
  std::filesystem::path output_key(const std::string& key) { return output(str(key)); }

  void info(const std::string& message) const;

  /// Handlers that finish but report a failure (e.g. validation) set this.
  int exit_code = 0;

 private:
  const nlohmann::json& config_;
  RunManifest& manifest_;
  std::ostream& log_;
  bool quiet_;
  std::string name_;
};

using Handler = nlohmann::json (*)(RunContext&);

struct Command {
  std::string id;      // "kb.build"
  std::string help;
  Schema schema;
  Handler run;
};

const std::vector<Command>& commands();
const Command* find_command(const std::string& id);

}  // namespace signpipe::cli
