#include "bridge/proof/theorems.hpp"
#include "bridge/prompt/extract.hpp"
#include "bridge/util/error.hpp"
#include "bridge/util/text.hpp"

#include <array>
#include <cctype>

namespace bridge::proof {

namespace {

struct CategoryInfo {
  TheoremCategory category;
  std::string_view name;
  std::string_view snake;
  std::string_view description;
};

constexpr std::array<CategoryInfo, 7> kInfo = {{
    {TheoremCategory::Bounds, "Bounds", "bounds", "Mathematical bounds and constraint verification"},
    {TheoremCategory::Monotonicity, "Monotonicity", "monotonicity", "Monotone response to growing inputs"},
    {TheoremCategory::InvariantPreservation, "InvariantPreservation", "invariant_preservation",
     "Invariant preserved across computation steps"},
    {TheoremCategory::Optimality, "Optimality", "optimality", "Optimality of the returned value"},
    {TheoremCategory::Termination, "Termination", "termination", "Computational termination guarantees"},
    {TheoremCategory::Correctness, "Correctness", "correctness", "Essential functional correctness property"},
    {TheoremCategory::Other, "Other", "other", "Supporting property"},
}};

const CategoryInfo& info(TheoremCategory c) {
  for (const auto& i : kInfo)
    if (i.category == c) return i;
  return kInfo.back();
}

/// Offset of the first ":=" outside brackets, or npos.
std::size_t top_level_assign(std::string_view s) {
  int depth = 0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == '[' || c == '{') ++depth;
    else if ((c == ')' || c == ']' || c == '}') && depth > 0) --depth;
    else if (c == ':' && s[i + 1] == '=' && depth == 0) return i;
  }
  return std::string_view::npos;
}

bool word_boundary_before(std::string_view s, std::size_t pos) {
  return pos == 0 || std::isspace(static_cast<unsigned char>(s[pos - 1]));
}

}  // namespace

std::string_view to_string(TheoremCategory c) { return info(c).name; }
std::string_view snake_name(TheoremCategory c) { return info(c).snake; }
std::string_view description(TheoremCategory c) { return info(c).description; }

TheoremCategory parse_category(std::string_view s) {
  for (const auto& i : kInfo)
    if (i.name == s || i.snake == s) return i.category;
  throw Error(ErrorKind::Usage, "unknown theorem category '" + std::string(s) + "'");
}

std::set<TheoremCategory> categorize(std::string_view name, std::string_view statement) {
  std::string hay = std::string(name) + "\n" + std::string(statement);
  std::string lower = text::to_lower(hay);
  std::set<TheoremCategory> out;
  auto has = [&](std::string_view needle) { return text::contains(hay, needle); };
  if (has("≤") || has("≥") || has("_upper") || has("_bounds")) out.insert(TheoremCategory::Bounds);
  if (has("_monotone") || has("Monotone")) out.insert(TheoremCategory::Monotonicity);
  if (text::contains(lower, "invariant")) out.insert(TheoremCategory::InvariantPreservation);
  if (has("_optimal") || has("optimal")) out.insert(TheoremCategory::Optimality);
  if (has("terminates") || has("WellFounded") || has("∃ output")) out.insert(TheoremCategory::Termination);
  if (has("_correct") || has("correctness")) out.insert(TheoremCategory::Correctness);
  if (out.empty()) out.insert(TheoremCategory::Other);
  return out;
}

std::set<TheoremCategory> categorize(const TheoremCandidate& c) { return categorize(c.name, c.statement); }

std::vector<TheoremCandidate> extract_theorems(std::string_view lean, std::optional<prompt::StrategyId> pathway) {
  std::vector<TheoremCandidate> out;
  for (const auto& span : prompt::theorem_spans(lean)) {
    std::string_view decl = lean.substr(span.start, span.end - span.start);
    std::size_t kw = decl.find("theorem");
    while (kw != std::string_view::npos && !word_boundary_before(decl, kw)) kw = decl.find("theorem", kw + 1);
    if (kw == std::string_view::npos) continue;
    std::string_view from_kw = decl.substr(kw);
    std::size_t assign = top_level_assign(from_kw);
    if (assign == std::string_view::npos) continue;

    auto words = text::split_whitespace(from_kw.substr(7, assign - 7));
    if (words.empty()) continue;
    TheoremCandidate c;
    c.name = words.front();
    // a binder or colon glued to the name is not part of it
    if (auto cut = c.name.find_first_of("({[:"); cut != std::string::npos) c.name.resize(cut);
    if (c.name.empty()) continue;
    c.statement = std::string(text::trim(from_kw.substr(0, assign)));
    c.proof = std::string(text::trim(from_kw.substr(assign + 2)));
    c.text = std::string(decl);
    c.pathway = pathway;
    std::string_view proof = c.proof;
    if (text::starts_with(proof, "by") && (proof.size() == 2 || std::isspace(static_cast<unsigned char>(proof[2]))))
      proof = text::trim(proof.substr(2));
    c.has_sorry = proof == "sorry";
    c.categories = categorize(c);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace bridge::proof
