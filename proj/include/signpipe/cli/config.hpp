#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace signpipe::cli {

enum class ValueType { Float, UInt, Bool, String, StringList };

/// Input and Output keys hold file paths; they are made absolute when the
/// config is resolved so a manifest can be replayed from any directory.
enum class KeyRole { Param, Input, Output };

struct KeySpec {
  std::string name;  // config spelling; the flag is --name with '_' -> '-'
  ValueType type;
  nlohmann::json fallback;  // null: no default, key stays unset
  std::string help;
  KeyRole role = KeyRole::Param;
};

using Schema = std::vector<KeySpec>;

std::string flag_name(std::string_view key);

/// Raw `key = value` text from a TOML-style file. Keys before any [section]
/// apply to every subcommand; [name] sections apply to that subcommand only.
struct ConfigEntry {
  std::string raw;
  std::size_t line = 0;
};
struct ConfigFile {
  std::map<std::string, std::map<std::string, ConfigEntry>> sections;  // "" is the top level
};

/// Supported values: "strings", numbers, true / false and one-line arrays of
/// strings. '#' starts a comment outside strings. Throws InvalidConfig with
/// the line for syntax errors and repeated keys.
ConfigFile parse_config(std::istream& in);
ConfigFile parse_config(const std::filesystem::path& path);

/// Converts a config-file literal. Throws TypeError naming the key.
nlohmann::json parse_literal(const KeySpec& spec, std::string_view raw);
/// Converts a command-line value, where strings are not quoted.
nlohmann::json parse_flag_value(const KeySpec& spec, std::string_view raw);

/// Flag > config file > default. `flags` holds already-converted values.
/// Every key in the top level must belong to `schema`; a [section] must
/// name a known subcommand and its keys must belong to that subcommand's
/// schema (UnknownKey otherwise). Input / Output paths become absolute.
nlohmann::json resolve_config(const std::string& subcommand, const Schema& schema, const ConfigFile* file,
                              const std::map<std::string, nlohmann::json>& flags,
                              const std::map<std::string, Schema>& all_schemas);

}  // namespace signpipe::cli
