#pragma once

#include "bridge/prompt/strategy.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace bridge::proof {

enum class TheoremCategory { Bounds, Monotonicity, InvariantPreservation, Optimality, Termination, Correctness, Other };

std::string_view to_string(TheoremCategory c);       // "Bounds"
std::string_view snake_name(TheoremCategory c);      // "bounds"
std::string_view description(TheoremCategory c);     // used in theorem selections
TheoremCategory parse_category(std::string_view s);  // accepts either name form; throws Error(Usage)
inline constexpr TheoremCategory kAllCategories[] = {
    TheoremCategory::Bounds,      TheoremCategory::Monotonicity, TheoremCategory::InvariantPreservation,
    TheoremCategory::Optimality,  TheoremCategory::Termination,  TheoremCategory::Correctness,
    TheoremCategory::Other};

struct TheoremCandidate {
  std::string name;
  std::string statement;  // from `theorem` up to the top-level ":="
  std::string proof;      // text after ":=", trimmed
  std::string text;       // the whole declaration
  std::optional<prompt::StrategyId> pathway;
  std::set<TheoremCategory> categories;
  bool has_sorry = false;  // the proof is exactly `sorry` or `by sorry`
};

/// Top-level theorem declarations in source order, categorised. Declarations without a
/// name or a ":=" are skipped.
std::vector<TheoremCandidate> extract_theorems(std::string_view lean,
                                               std::optional<prompt::StrategyId> pathway = std::nullopt);

/// Keyword rules over name and statement; multi-label, Other when nothing fires.
std::set<TheoremCategory> categorize(const TheoremCandidate& candidate);
std::set<TheoremCategory> categorize(std::string_view name, std::string_view statement);

}  // namespace bridge::proof
