#include "signpipe/cli/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "signpipe/error.hpp"

namespace signpipe::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Cuts a trailing comment, respecting double-quoted strings.
std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (quoted && s[i] == '\\') {
      ++i;
    } else if (s[i] == '"') {
      quoted = !quoted;
    } else if (s[i] == '#' && !quoted) {
      return s.substr(0, i);
    }
  }
  return s;
}

bool valid_key(std::string_view k) {
  if (k.empty()) return false;
  for (char c : k) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
  }
  return true;
}

Error type_error(const KeySpec& spec, std::string_view raw) {
  static const char* names[] = {"a number", "a non-negative integer", "true or false", "a string",
                                "a list of strings"};
  return Error(ErrorCode::TypeError, "key '" + spec.name + "' expects " + names[static_cast<int>(spec.type)] +
                                         ", got '" + std::string(raw) + "'");
}

/// Parses a quoted string starting at s[0] == '"'; returns the decoded text
/// and advances `used` past the closing quote.
bool parse_quoted(std::string_view s, std::string& out, std::size_t& used) {
  if (s.empty() || s[0] != '"') return false;
  out.clear();
  for (std::size_t i = 1; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '"') {
      used = i + 1;
      return true;
    }
    if (c == '\\') {
      if (++i >= s.size()) return false;
      switch (s[i]) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: return false;
      }
    } else {
      out += c;
    }
  }
  return false;
}

bool parse_double(std::string_view s, double& v) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc{} && p == s.data() + s.size() && std::isfinite(v);
}

bool parse_uint(std::string_view s, std::uint64_t& v) {
  if (s.empty() || s.front() == '-') return false;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace

std::string flag_name(std::string_view key) {
  std::string f = "--";
  for (char c : key) f += c == '_' ? '-' : c;
  return f;
}

ConfigFile parse_config(std::istream& in) {
  ConfigFile cfg;
  std::string section;
  std::string line;
  std::size_t lineno = 0;
  cfg.sections[""];
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = trim(strip_comment(line));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']' || !valid_key(trim(text.substr(1, text.size() - 2)))) {
        throw LineError(ErrorCode::InvalidConfig, lineno, "bad section header");
      }
      section = std::string(trim(text.substr(1, text.size() - 2)));
      cfg.sections[section];
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw LineError(ErrorCode::InvalidConfig, lineno, "expected key = value");
    const std::string key(trim(text.substr(0, eq)));
    const auto value = trim(text.substr(eq + 1));
    if (!valid_key(key)) throw LineError(ErrorCode::InvalidConfig, lineno, "bad key '" + key + "'");
    if (value.empty()) throw LineError(ErrorCode::InvalidConfig, lineno, "missing value for '" + key + "'");
    if (!cfg.sections[section].emplace(key, ConfigEntry{std::string(value), lineno}).second) {
      throw LineError(ErrorCode::InvalidConfig, lineno, "key '" + key + "' repeated");
    }
  }
  return cfg;
}

ConfigFile parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path.string());
  return parse_config(in);
}

nlohmann::json parse_literal(const KeySpec& spec, std::string_view raw) {
  raw = trim(raw);
  switch (spec.type) {
    case ValueType::Float: {
      double v = 0.0;
      if (!parse_double(raw, v)) throw type_error(spec, raw);
      return v;
    }
    case ValueType::UInt: {
      std::uint64_t v = 0;
      if (!parse_uint(raw, v)) throw type_error(spec, raw);
      return v;
    }
    case ValueType::Bool:
      if (raw == "true") return true;
      if (raw == "false") return false;
      throw type_error(spec, raw);
    case ValueType::String: {
      std::string s;
      std::size_t used = 0;
      if (!parse_quoted(raw, s, used) || used != raw.size()) throw type_error(spec, raw);
      return s;
    }
    case ValueType::StringList: {
      if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']') throw type_error(spec, raw);
      nlohmann::json list = nlohmann::json::array();
      auto rest = trim(raw.substr(1, raw.size() - 2));
      while (!rest.empty()) {
        std::string s;
        std::size_t used = 0;
        if (!parse_quoted(rest, s, used)) throw type_error(spec, raw);
        list.push_back(s);
        rest = trim(rest.substr(used));
        if (rest.empty()) break;
        if (rest.front() != ',') throw type_error(spec, raw);
        rest = trim(rest.substr(1));
      }
      return list;
    }
  }
  throw type_error(spec, raw);
}

nlohmann::json parse_flag_value(const KeySpec& spec, std::string_view raw) {
  switch (spec.type) {
    case ValueType::String: return std::string(raw);
    case ValueType::StringList: return nlohmann::json::array({std::string(raw)});
    default: return parse_literal(spec, raw);
  }
}

nlohmann::json resolve_config(const std::string& subcommand, const Schema& schema, const ConfigFile* file,
                              const std::map<std::string, nlohmann::json>& flags,
                              const std::map<std::string, Schema>& all_schemas) {
  auto find = [](const Schema& s, const std::string& key) -> const KeySpec* {
    for (const auto& k : s) {
      if (k.name == key) return &k;
    }
    return nullptr;
  };

  nlohmann::json out = nlohmann::json::object();
  for (const auto& spec : schema) {
    if (!spec.fallback.is_null()) out[spec.name] = spec.fallback;
  }

  if (file) {
    // Validate every section, including ones for other subcommands.
    for (const auto& [section, entries] : file->sections) {
      const Schema* target = &schema;
      if (!section.empty()) {
        const auto it = all_schemas.find(section);
        if (it == all_schemas.end()) throw Error(ErrorCode::UnknownKey, "unknown config section [" + section + "]");
        target = &it->second;
      }
      for (const auto& [key, entry] : entries) {
        const KeySpec* spec = find(*target, key);
        if (!spec) {
          throw LineError(ErrorCode::UnknownKey, entry.line,
                          "unknown key '" + key + "' for " + (section.empty() ? subcommand : section));
        }
        const auto value = parse_literal(*spec, entry.raw);
        if (section.empty() || section == subcommand) {
          if (section.empty() && file->sections.count(subcommand) && file->sections.at(subcommand).count(key)) {
            continue;  // the subcommand section is more specific
          }
          out[key] = value;
        }
      }
    }
  }

  for (const auto& [key, value] : flags) {
    if (!find(schema, key)) throw Error(ErrorCode::UnknownKey, "unknown key '" + key + "' for " + subcommand);
    out[key] = value;
  }

  for (const auto& spec : schema) {
    if (spec.role == KeyRole::Param || !out.contains(spec.name)) continue;
    auto& v = out[spec.name];
    if (v.is_string() && !v.get<std::string>().empty()) {
      v = std::filesystem::absolute(v.get<std::string>()).lexically_normal().string();
    }
  }
  return out;
}

}  // namespace signpipe::cli
