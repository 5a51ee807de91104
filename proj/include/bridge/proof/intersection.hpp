#pragma once

#include "bridge/proof/theorems.hpp"

#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace bridge::proof {

inline constexpr std::size_t kDefaultThreshold = 3;

struct PathwayGroup {
  prompt::StrategyId pathway;
  std::vector<TheoremCandidate> candidates;
};

struct IntersectionReport {
  std::string problem_id;
  std::size_t threshold = kDefaultThreshold;
  std::vector<PathwayGroup> pathways;
  std::set<TheoremCategory> common_concepts;   // in >= threshold pathways
  std::set<TheoremCategory> shared_properties;  // in >= 2 pathways
  std::vector<std::string> robust_theorems;    // per common concept, lexicographically first name
  std::set<TheoremCategory> pathway_specific;  // in exactly one pathway

  /// (concept, theorem) pairs behind robust_theorems, in concept order.
  std::vector<std::pair<TheoremCategory, std::string>> selection;
};

/// Throws Error(Usage) for an empty group list or threshold 0.
IntersectionReport intersect(const std::string& problem_id, const std::vector<PathwayGroup>& groups,
                             std::size_t threshold = kDefaultThreshold);

/// JSON document with keys intersection_analysis, final_theorem_selection and
/// complete_Lean_file, plus the per-pathway candidates needed to rebuild the report.
/// Theorems already present in `implementation` are dropped before the selection is appended.
std::string emit_meta_analysis(const IntersectionReport& report, std::string_view implementation);

/// Inverse of emit_meta_analysis. Throws Error(Usage) on malformed documents.
IntersectionReport parse_meta_analysis(std::string_view document);

/// The complete_Lean_file field of an emitted document.
std::string complete_lean_file(const IntersectionReport& report, std::string_view implementation);

}  // namespace bridge::proof
