#pragma once

#include "bridge/corpus/corpus.hpp"
#include "bridge/prompt/strategy.hpp"

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace bridge::prompt {

/// A strategy prompt with all [SWAP:...] slots resolved; only {{ name }} slots remain.
struct PromptTemplate {
  StrategyId strategy;
  std::string body;
  std::set<std::string> required_placeholders;
};

struct RenderOptions {
  /// Inserts the Lean library signature block ("Lean +API in context").
  bool tool_context = false;
};

enum class ArtifactLanguage { Lean, Python };

/// Template catalog loaded from a directory laid out as
///   <dir>/<domain>/_unified.tmpl        shared skeleton per domain
///   <dir>/<domain>/<Strategy>.tmpl      "@@ SLOT" sections filling the skeleton
///   <dir>/feedback/{retry,lean_translation,tool_context}.tmpl
/// Everything is read at construction; the catalog is immutable afterwards.
class TemplateCatalog {
 public:
  explicit TemplateCatalog(const std::filesystem::path& dir);

  /// Catalog at $BRIDGE_TEMPLATES, else the source-tree default.
  static TemplateCatalog load_default();
  static std::filesystem::path default_dir();

  PromptTemplate resolve(StrategyId strategy) const;

  std::string render(StrategyId strategy, const corpus::Problem& problem,
                     const RenderOptions& options = {}) const;

  /// Throws Error(Usage) unless 1 <= round <= max_rounds.
  std::string render_retry(std::string_view previous_artifact, const std::vector<std::string>& errors,
                           int round, int max_rounds,
                           ArtifactLanguage language = ArtifactLanguage::Lean) const;

  /// Prompt asking for a Lean translation of a Python solution (cross-domain feedback stage).
  std::string render_lean_translation(const corpus::Problem& problem, std::string_view python_source) const;

  /// Digest over every loaded file, for run provenance.
  const std::string& digest() const { return digest_; }

 private:
  struct StrategyFile {
    std::map<std::string, std::string> sections;
  };

  std::string expand_swaps(std::string body, const StrategyFile& file, StrategyId strategy) const;

  std::map<Domain, std::string> unified_;
  std::map<StrategyId, StrategyFile> strategies_;
  std::string retry_;
  std::string lean_translation_;
  std::string tool_context_;
  std::string digest_;
};

/// Placeholder values derived from a problem (function_name, function_params, ...).
std::map<std::string, std::string> problem_variables(const corpus::Problem& problem);

/// Replaces every {{ name }} in one left-to-right pass; substituted text is never rescanned.
/// Throws Error(Usage) naming the first placeholder without a value.
std::string substitute(std::string_view body, const std::map<std::string, std::string>& values);

/// Names of all {{ name }} placeholders in `body`.
std::set<std::string> placeholders_in(std::string_view body);

/// True when `text` still contains "{{", "}}" or "[SWAP:".
bool has_surviving_placeholder(std::string_view text);

}  // namespace bridge::prompt
