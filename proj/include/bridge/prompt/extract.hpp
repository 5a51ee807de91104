#pragma once

#include "bridge/prompt/strategy.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bridge::prompt {

enum class ArtifactKind { LeanSource, PythonSource, TheoremBlock, Narrative };

std::string_view to_string(ArtifactKind kind);

struct Span {
  std::size_t start = 0;  // byte offsets into the completion, half-open
  std::size_t end = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

struct ExtractedArtifact {
  ArtifactKind kind;
  std::string body;
  Span span;
};

class ExtractionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pulls generated artifacts out of a model completion. Pure text processing.
///  - Spec: every body between <python> and </python>, in order.
///  - Code/Proof: the last complete fenced block, else everything from the first line
///    beginning "import Std"; one TheoremBlock per top-level theorem inside it.
/// Returns an empty list when nothing is found.
std::vector<ExtractedArtifact> try_extract(std::string_view completion, Domain domain);

/// As try_extract, but throws ExtractionError when nothing is found.
std::vector<ExtractedArtifact> extract_artifacts(std::string_view completion, Domain domain);

/// The artifact the pipeline acts on: the last one of the domain's primary kind.
const ExtractedArtifact* primary_artifact(const std::vector<ExtractedArtifact>& artifacts, Domain domain);

/// Half-open byte ranges of top-level `theorem` declarations in Lean source (modifiers and
/// attributes on the same line included). Lines inside block comments are skipped.
std::vector<Span> theorem_spans(std::string_view lean);

}  // namespace bridge::prompt
