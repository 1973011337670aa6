#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "signpipe/kb/types.hpp"

namespace signpipe::kb {

/// Raw contents of a KB file in record order. Duplicates are preserved so
/// validation can report them.
struct KbRecords {
  std::size_t embedding_dim = 0;
  std::string version;
  std::vector<GlossEntry> entries;
  std::vector<std::size_t> lines;  // 1-based source line of each entry
};

KbRecords read_kb_records(std::istream& in);
KbRecords read_kb_records(const std::filesystem::path& path);

/// Reads a KB file; a repeated symbol is a MalformedRecord at its second
/// occurrence.
KnowledgeBase load_kb(const std::filesystem::path& path);
KnowledgeBase load_kb(std::istream& in);

void save_kb(const KnowledgeBase& kb, const std::filesystem::path& path);
void save_kb(const KnowledgeBase& kb, std::ostream& out);

nlohmann::json entry_to_json(const GlossEntry& entry);
/// Throws MalformedRecord without a line number; the file readers attach it.
GlossEntry entry_from_json(const nlohmann::json& record);

nlohmann::json pose_to_json(const PoseSequence& pose);
PoseSequence pose_from_json(const nlohmann::json& pose);

nlohmann::json split_to_json(const SplitAssignment& split);
SplitAssignment split_from_json(const nlohmann::json& doc);

}  // namespace signpipe::kb
