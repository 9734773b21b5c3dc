#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coverdx/kb.hpp"

namespace coverdx {

struct LoadOptions {
  /// Warn about unknown keys instead of rejecting the document.
  bool lenient = false;
};

struct LoadedKb {
  KnowledgeBase kb;
  /// Load notes (defaulted priors, ignored keys) followed by validation warnings.
  std::vector<Violation> warnings;
};

/// Parses and validates a KB document. Throws ParseError on malformed input
/// and ValidationError when any hard invariant fails.
LoadedKb load_kb_document(std::istream& in, const LoadOptions& options = {});
LoadedKb load_kb_document(const nlohmann::json& doc, const LoadOptions& options = {});
KnowledgeBase load_kb(std::istream& in, const LoadOptions& options = {});
KnowledgeBase load_kb_file(const std::filesystem::path& path,
                           const LoadOptions& options = {});

/// Builds a KnowledgeBase from a document without validating it.
KnowledgeBase parse_kb(const nlohmann::json& doc, const LoadOptions& options,
                       std::vector<Violation>* notes);

nlohmann::json serialize_kb(const KnowledgeBase& kb);

nlohmann::json to_json(const IdSet& ids);
IdSet id_set_from_json(const nlohmann::json& value);

}  // namespace coverdx
