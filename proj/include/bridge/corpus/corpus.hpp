#pragma once

#include "bridge/corpus/literal.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bridge::corpus {

inline constexpr std::string_view kCategories[] = {
    "arrays", "strings", "graphs", "dynamic-programming", "numerical", "trees"};

struct Param {
  std::string name;
  std::string semantic_type;
  friend bool operator==(const Param&, const Param&) = default;
};

struct UnitTest {
  std::vector<std::string> inputs;  // literal text
  std::string expected;             // literal text
  bool unordered = false;           // compare list outputs as multisets
  friend bool operator==(const UnitTest&, const UnitTest&) = default;
};

struct Problem {
  std::string id;
  std::string title;
  std::string statement;
  std::string function_name;
  std::vector<Param> params;
  std::string return_type;
  std::vector<UnitTest> tests;
  std::string category;
  std::optional<std::string> difficulty;
  friend bool operator==(const Problem&, const Problem&) = default;
};

/// Immutable, order-preserving collection of validated problems. Copies share storage.
class ProblemSet {
 public:
  ProblemSet() : items_(std::make_shared<const std::vector<Problem>>()) {}
  explicit ProblemSet(std::vector<Problem> items)
      : items_(std::make_shared<const std::vector<Problem>>(std::move(items))) {}

  std::size_t size() const { return items_->size(); }
  bool empty() const { return items_->empty(); }
  const Problem& operator[](std::size_t i) const { return (*items_)[i]; }
  auto begin() const { return items_->begin(); }
  auto end() const { return items_->end(); }
  const Problem* find(std::string_view id) const;

  friend bool operator==(const ProblemSet& a, const ProblemSet& b) { return *a.items_ == *b.items_; }

 private:
  std::shared_ptr<const std::vector<Problem>> items_;
};

/// Every violated invariant of `p`, each prefixed by the failing field. Pure.
std::vector<std::string> validate_problem(const Problem& p);

/// Parses one manifest record. Missing or mistyped fields are appended to `violations`.
Problem problem_from_json(std::string_view json_line, std::vector<std::string>& violations);
std::string problem_to_json(const Problem& p);

/// Throws Error(Corpus) listing each violation with its line and problem id.
ProblemSet load_manifest(const std::filesystem::path& path);
ProblemSet parse_manifest(std::string_view contents, std::string_view origin = "<memory>");
void save_manifest(const ProblemSet& set, const std::filesystem::path& path);
std::string serialize_manifest(const ProblemSet& set);

ProblemSet filter_by_category(const ProblemSet& set, std::string_view category);
ProblemSet filter_by_ids(const ProblemSet& set, const std::vector<std::string>& ids);

/// Parsed parameter and return types; throws LiteralError when unsupported.
std::vector<SemanticType> param_types(const Problem& p);

}  // namespace bridge::corpus
