#include "signpipe/cli/app.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <memory>
#include <optional>

#include "commands.hpp"
#include "signpipe/error.hpp"

namespace signpipe::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

bool is_usage_error(ErrorCode code) {
  return code == ErrorCode::UnknownKey || code == ErrorCode::TypeError || code == ErrorCode::InvalidConfig ||
         code == ErrorCode::InvalidWeights;
}

struct CommonFlags {
  std::string config;
  std::string manifest;
  std::vector<std::string> json_out;  // present with zero or one value
  bool quiet = false;
};

void add_common(CLI::App& sub, CommonFlags& f) {
  sub.add_option("--config", f.config, "TOML-style config file (flags override it)")->type_name("PATH");
  sub.add_option("--manifest", f.manifest, "where to write the run manifest")->type_name("PATH");
  sub.add_option("--json", f.json_out, "print the result as JSON; with a path, also write it there")
      ->expected(0, 1)
      ->type_name("[PATH]");
  sub.add_flag("--quiet", f.quiet, "no progress messages on stderr");
}

/// Raw storage for one subcommand's schema flags.
struct FlagStore {
  std::map<std::string, std::string> scalars;
  std::map<std::string, std::vector<std::string>> lists;
  std::map<std::string, bool> bools;
  // loss sugar
  std::vector<std::string> pairs;
  std::string ce;
  std::string recon;
};

const char* type_label(const KeySpec& spec) {
  if (spec.role != KeyRole::Param) return "PATH";
  switch (spec.type) {
    case ValueType::Float: return "FLOAT";
    case ValueType::UInt: return "UINT";
    default: return "TEXT";
  }
}

void add_schema_flags(CLI::App& sub, const Schema& schema, FlagStore& store) {
  for (const auto& spec : schema) {
    const auto name = flag_name(spec.name);
    const auto help = spec.fallback.is_null() ? spec.help : spec.help + " [" + spec.fallback.dump() + "]";
    switch (spec.type) {
      case ValueType::Bool: sub.add_flag(name, store.bools[spec.name], help); break;
      case ValueType::StringList: sub.add_option(name, store.lists[spec.name], help)->type_name("LIST"); break;
      default: sub.add_option(name, store.scalars[spec.name], help)->type_name(type_label(spec)); break;
    }
  }
}

std::pair<std::string, std::string> split_pair(const std::string& text, const char* what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos || comma == 0 || comma + 1 == text.size() ||
      text.find(',', comma + 1) != std::string::npos) {
    throw Error(ErrorCode::InvalidConfig, std::string(what) + " expects A,B");
  }
  return {text.substr(0, comma), text.substr(comma + 1)};
}

std::map<std::string, json> collect_flags(const CLI::App& sub, const Schema& schema, const FlagStore& store) {
  std::map<std::string, json> flags;
  for (const auto& spec : schema) {
    const auto name = flag_name(spec.name);
    if (sub.count(name) == 0) continue;
    switch (spec.type) {
      case ValueType::Bool: flags[spec.name] = store.bools.at(spec.name); break;
      case ValueType::StringList: flags[spec.name] = store.lists.at(spec.name); break;
      default: flags[spec.name] = parse_flag_value(spec, store.scalars.at(spec.name)); break;
    }
  }
  for (const auto& p : store.pairs) {
    const auto colon = p.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::InvalidConfig, "--pairs expects TERM:P,Q");
    std::string term = p.substr(0, colon);
    if (term.size() > 3 && term.ends_with("_kl")) term.resize(term.size() - 3);
    if (term != "self" && term != "lm_video" && term != "lm_t") {
      throw Error(ErrorCode::InvalidConfig, "unknown loss term '" + term + "' (self, lm_video, lm_t)");
    }
    const auto [a, b] = split_pair(p.substr(colon + 1), "--pairs");
    flags[term + "_p"] = a;
    flags[term + "_q"] = b;
  }
  if (!store.ce.empty()) {
    const auto [a, b] = split_pair(store.ce, "--ce");
    flags["ce_pred"] = a;
    flags["ce_targets"] = b;
  }
  if (!store.recon.empty()) {
    const auto [a, b] = split_pair(store.recon, "--recon");
    flags["recon_a"] = a;
    flags["recon_b"] = b;
  }
  return flags;
}

fs::path default_manifest_path(const RunManifest& m) {
  if (!m.outputs.empty()) return m.outputs.front() + ".manifest.json";
  if (!m.json_out.empty()) return m.json_out + ".manifest.json";
  return {};
}

void print_human(std::ostream& out, const json& result, const std::string& prefix = "") {
  for (const auto& [key, value] : result.items()) {
    if (value.is_object()) {
      print_human(out, value, prefix + key + ".");
    } else {
      out << prefix << key << ": " << value.dump() << '\n';
    }
  }
}

/// Runs a command on a resolved config and handles result printing and
/// the manifest. Returns the handler's exit code.
int execute(const Command& cmd, const json& config, const CommonFlags& common, std::optional<std::string> json_path,
            bool print_json, std::ostream& out, std::ostream& err) {
  RunManifest manifest;
  manifest.tool_version = std::string(kToolVersion);
  manifest.subcommand = cmd.id;
  manifest.config = config;
  manifest.seed = config.at("seed").get<std::uint64_t>();
  manifest.threads = config.at("threads").get<unsigned>();
  if (json_path) manifest.json_out = fs::absolute(*json_path).lexically_normal().string();

  RunContext ctx(config, manifest, err, common.quiet, cmd.id);
  const json result = cmd.run(ctx);
  if (!manifest.json_out.empty()) {
    std::ofstream f(manifest.json_out, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + manifest.json_out);
    f << result.dump(2) << '\n';
  }
  if (print_json) {
    out << result.dump(2) << '\n';
  } else if (!common.quiet) {
    print_human(out, result);
  }
  const fs::path mpath = common.manifest.empty() ? default_manifest_path(manifest) : fs::path(common.manifest);
  if (!mpath.empty()) {
    save_manifest(manifest, mpath);
  } else if (!common.quiet) {
    // Nothing was written, so there is no file to put the manifest next to.
    err << "manifest: " << manifest_to_json(manifest).dump() << '\n';
  }
  return ctx.exit_code;
}

int rerun(const std::string& manifest_path, const std::string& output_dir, const CommonFlags& common,
          bool print_json, std::ostream& out, std::ostream& err) {
  const auto m = load_manifest(manifest_path);
  const Command* cmd = find_command(m.subcommand);
  if (!cmd) throw Error(ErrorCode::MalformedDocument, "manifest names unknown subcommand '" + m.subcommand + "'");
  if (m.tool_version != kToolVersion && !common.quiet) {
    err << "signpipe rerun: manifest written by version " << m.tool_version << ", running " << kToolVersion << '\n';
  }
  verify_inputs(m);

  json config = m.config;
  std::optional<std::string> json_path;
  if (!m.json_out.empty()) json_path = m.json_out;
  if (!output_dir.empty()) {
    const fs::path dir = fs::absolute(output_dir);
    fs::create_directories(dir);
    for (const auto& spec : cmd->schema) {
      if (spec.role == KeyRole::Output && config.contains(spec.name) && config[spec.name].is_string() &&
          !config[spec.name].get<std::string>().empty()) {
        config[spec.name] = (dir / fs::path(config[spec.name].get<std::string>()).filename()).string();
      }
    }
    if (json_path) json_path = (dir / fs::path(*json_path).filename()).string();
  }
  // Every schema key must be present so defaults cannot drift between versions.
  for (const auto& spec : cmd->schema) {
    if (!spec.fallback.is_null() && !config.contains(spec.name)) {
      throw Error(ErrorCode::MalformedDocument, "manifest config lacks '" + spec.name + "'");
    }
  }
  return execute(*cmd, config, common, json_path, print_json, out, err);
}

}  // namespace

const std::map<std::string, Schema>& schemas() {
  static const std::map<std::string, Schema> all = [] {
    std::map<std::string, Schema> m;
    for (const auto& c : commands()) m[c.id] = c.schema;
    return m;
  }();
  return all;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"signpipe: sign-language data toolkit", "signpipe"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  std::map<std::string, CLI::App*> subs;
  std::map<std::string, FlagStore> stores;
  std::map<std::string, CommonFlags> commons;

  CLI::App* kb = app.add_subcommand("kb", "Knowledge base tools");
  kb->require_subcommand(1);
  for (const auto& cmd : commands()) {
    CLI::App* sub = nullptr;
    if (cmd.id.starts_with("kb.")) {
      sub = kb->add_subcommand(cmd.id.substr(3), cmd.help);
    } else {
      sub = app.add_subcommand(cmd.id, cmd.help);
    }
    add_schema_flags(*sub, cmd.schema, stores[cmd.id]);
    add_common(*sub, commons[cmd.id]);
    if (cmd.id == "loss") {
      auto& s = stores[cmd.id];
      sub->add_option("--pairs", s.pairs, "TERM:P.jsonl,Q.jsonl with TERM in self, lm_video, lm_t (repeatable)");
      sub->add_option("--ce", s.ce, "PRED.jsonl,TARGETS.txt");
      sub->add_option("--recon", s.recon, "A.spc,B.spc");
    }
    subs[cmd.id] = sub;
  }

  std::string manifest_path, output_dir;
  CommonFlags rerun_common;
  CLI::App* rerun_sub = app.add_subcommand("rerun", "Replay a run from its manifest");
  rerun_sub->add_option("MANIFEST", manifest_path, "manifest JSON written by an earlier run")->required();
  rerun_sub->add_option("--output-dir", output_dir, "write outputs here instead of the recorded paths");
  rerun_sub->add_option("--manifest", rerun_common.manifest, "where to write the new manifest");
  rerun_sub->add_option("--json", rerun_common.json_out, "print the result as JSON")->expected(0, 0);
  rerun_sub->add_flag("--quiet", rerun_common.quiet, "no progress messages on stderr");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsageError;
  }

  const CLI::App* chosen = nullptr;
  std::string id;
  for (const auto& [cid, sub] : subs) {
    if (sub->parsed()) {
      chosen = sub;
      id = cid;
    }
  }

  try {
    if (rerun_sub->parsed()) {
      return rerun(manifest_path, output_dir, rerun_common, rerun_sub->count("--json") > 0, out, err);
    }
    const Command& cmd = *find_command(id);
    const auto& common = commons[id];
    try {
      std::optional<ConfigFile> file;
      if (!common.config.empty()) file = parse_config(fs::path(common.config));
      const auto flags = collect_flags(*chosen, cmd.schema, stores[id]);
      const auto config = resolve_config(id, cmd.schema, file ? &*file : nullptr, flags, schemas());
      std::optional<std::string> json_path;
      if (!common.json_out.empty() && !common.json_out.front().empty()) json_path = common.json_out.front();
      return execute(cmd, config, common, json_path, chosen->count("--json") > 0, out, err);
    } catch (const Error& e) {
      if (!is_usage_error(e.code())) throw;
      err << "signpipe " << id << ": " << e.what() << "\n\n" << chosen->help();
      return kExitUsageError;
    }
  } catch (const Error& e) {
    err << "signpipe: " << e.what() << '\n';
    return is_usage_error(e.code()) ? kExitUsageError : kExitDataError;
  } catch (const std::exception& e) {
    err << "signpipe: " << e.what() << '\n';
    return kExitDataError;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace signpipe::cli
