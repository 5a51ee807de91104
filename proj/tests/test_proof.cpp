#include "proof_fixtures.hpp"

#include "bridge/util/error.hpp"
#include "bridge/util/text.hpp"

#include <doctest.h>

using namespace bridge;
using namespace bridge::proof;

TEST_CASE("theorem extraction splits statement and proof") {
  std::string src =
      "def f (n : Nat) : Nat := n\n"
      "theorem f_id (n : Nat) : f n = n := by\n  simp [f]\n"
      "-- theorem commented : True := trivial\n"
      "theorem f_le (n : Nat) : f n ≤ n := sorry\n"
      "theorem nameless\n";
  auto t = extract_theorems(src);
  REQUIRE(t.size() == 2);
  CHECK(t[0].name == "f_id");
  CHECK(t[0].statement == "theorem f_id (n : Nat) : f n = n");
  CHECK(t[0].proof == "by\n  simp [f]");
  CHECK_FALSE(t[0].has_sorry);
  CHECK(t[1].has_sorry);
  CHECK(t[1].categories.count(TheoremCategory::Bounds));
}

TEST_CASE("keyword categorisation is multi label") {
  CHECK(categorize("sum_nonneg", "theorem sum_nonneg : 0 ≤ s") == std::set{TheoremCategory::Bounds});
  CHECK(categorize("foo", "theorem foo : True").count(TheoremCategory::Other));
  auto both = categorize("sorted_monotone_bound", "theorem sorted_monotone_bound : a ≤ b");
  CHECK(both.count(TheoremCategory::Monotonicity));
  CHECK(both.count(TheoremCategory::Bounds));
}

TEST_CASE("category names") {
  for (auto c : kAllCategories) {
    CHECK(parse_category(to_string(c)) == c);
    CHECK(parse_category(snake_name(c)) == c);
  }
  CHECK(snake_name(TheoremCategory::InvariantPreservation) == "invariant_preservation");
  CHECK_THROWS_AS(parse_category("nonsense"), Error);
}

TEST_CASE("intersection matches the fixture at each threshold") {
  auto groups = testsupport::intersection_groups();
  auto expected = testsupport::intersection_expected();
  for (const auto& [t, want] : expected["thresholds"].items()) {
    auto report = intersect("arrays-001", groups, std::stoul(t));
    CHECK_MESSAGE(testsupport::category_names(report.common_concepts) ==
                      want["common_concepts"].get<std::vector<std::string>>(), "threshold " << t);
    CHECK_MESSAGE(report.robust_theorems == want["robust_theorems"].get<std::vector<std::string>>(), "threshold " << t);
    CHECK(testsupport::category_names(report.shared_properties) ==
          expected["shared_properties"].get<std::vector<std::string>>());
    CHECK(testsupport::category_names(report.pathway_specific) ==
          expected["pathway_specific"].get<std::vector<std::string>>());
  }
  CHECK_THROWS_AS(intersect("x", {}, 3), Error);
  CHECK_THROWS_AS(intersect("x", groups, 0), Error);
}

TEST_CASE("meta analysis round trip") {
  auto report = intersect("arrays-001", testsupport::intersection_groups(), 3);
  std::string impl = "def runningSum (xs : List Int) : List Int := xs\ntheorem ca_last_bounds : True := trivial\n";
  auto doc = emit_meta_analysis(report, impl);
  auto j = nlohmann::json::parse(doc);
  for (const char* key : {"intersection_analysis", "final_theorem_selection", "complete_Lean_file"})
    CHECK(j.contains(key));
  for (const char* key : {"common_concepts", "shared_properties", "robust_theorems", "pathway_specific_insights"})
    CHECK(j["intersection_analysis"].contains(key));

  auto back = parse_meta_analysis(doc);
  CHECK(back.problem_id == report.problem_id);
  CHECK(back.threshold == report.threshold);
  CHECK(back.common_concepts == report.common_concepts);
  CHECK(back.robust_theorems == report.robust_theorems);
  REQUIRE(back.pathways.size() == report.pathways.size());
  for (std::size_t i = 0; i < back.pathways.size(); ++i) {
    REQUIRE(back.pathways[i].candidates.size() == report.pathways[i].candidates.size());
    for (std::size_t k = 0; k < back.pathways[i].candidates.size(); ++k) {
      CHECK(back.pathways[i].candidates[k].name == report.pathways[i].candidates[k].name);
      CHECK(back.pathways[i].candidates[k].statement == report.pathways[i].candidates[k].statement);
    }
  }
  auto lean = j["complete_Lean_file"].get<std::string>();
  CHECK(lean == complete_lean_file(report, impl));
  std::size_t first = lean.find("theorem ca_last_bounds");
  REQUIRE(first != std::string::npos);
  CHECK(lean.find("theorem ca_last_bounds", first + 1) == std::string::npos);
  CHECK(text::contains(lean, "theorem ca_fold_correct"));
  CHECK_THROWS_AS(parse_meta_analysis("{}"), Error);
}
