#include "pass_at_k_oracle.hpp"
#include "support.hpp"

#include "bridge/metrics/report.hpp"
#include "bridge/util/error.hpp"
#include "bridge/util/text.hpp"

#include <doctest.h>
#include <json.hpp>

using namespace bridge;
using namespace bridge::metrics;

namespace {

ChainSummary chain(std::string strategy, std::string problem, bool ok, std::size_t rounds = 1,
                   std::size_t words = 10, std::set<std::string> classes = {}) {
  ChainSummary s;
  s.model = "m";
  s.strategy = std::move(strategy);
  s.problem_id = std::move(problem);
  s.status = ok ? FinalStatus::Success : FinalStatus::Failure;
  s.compile_only_success = ok;
  s.rounds = rounds;
  s.words = words;
  s.tokens = estimate_tokens(words);
  s.final_error_classes = std::move(classes);
  return s;
}

}  // namespace

TEST_CASE("pass@k agrees with subset enumeration") {
  CHECK(testsupport::pass_at_k_mismatches(12) == 0);
}

TEST_CASE("pass@k edge cases") {
  CHECK(pass_at_k(5, 0, 3) == 0.0);
  CHECK(pass_at_k(5, 5, 1) == 1.0);
  CHECK(pass_at_k(5, 4, 2) == 1.0);
  CHECK(pass_at_k_exact(10, 3, 1) == Rational(3, 10));
  CHECK(pass_at_k(200, 17, 128) == doctest::Approx(1.0));
  CHECK_THROWS_AS(pass_at_k(5, 1, 0), Error);
  CHECK_THROWS_AS(pass_at_k(5, 1, 6), Error);
  CHECK_THROWS_AS(pass_at_k(5, 6, 1), Error);
}

TEST_CASE("token estimate") {
  CHECK(estimate_tokens(0) == 0);
  CHECK(estimate_tokens(195) == 270);
  CHECK(round_rate(0.123456) == doctest::Approx(0.1235));
}

TEST_CASE("length stats and error distribution") {
  std::vector<ChainSummary> cs = {chain("Code/Direct", "a", true, 1, 100), chain("Code/Direct", "a", false, 3, 300, {"Type"}),
                                  chain("Code/Direct", "b", false, 4, 500, {"Type", "Syntax"})};
  auto ls = length_stats(cs);
  CHECK(ls.success_count == 1);
  CHECK(ls.failure_count == 2);
  REQUIRE(ls.average);
  CHECK(ls.average->words == doctest::Approx(300));
  CHECK(ls.success_avg->words == doctest::Approx(100));
  CHECK(ls.failure_avg->words == doctest::Approx(400));
  auto d = error_distribution(cs);
  CHECK(d["Type"] == doctest::Approx(1.0));
  CHECK(d["Syntax"] == doctest::Approx(0.5));
  CHECK(error_distribution({chain("Code/Direct", "a", true)}).empty());
  CHECK_FALSE(length_stats({}).average);
}

TEST_CASE("rows average pass@k over problems") {
  std::vector<ChainSummary> cs;
  for (int i = 0; i < 4; ++i) cs.push_back(chain("Code/Direct", "a", i == 0, 2));
  for (int i = 0; i < 4; ++i) cs.push_back(chain("Code/Direct", "b", true));
  for (int i = 0; i < 4; ++i) cs.push_back(chain("Spec/Direct", "a", false));
  auto rows = compute_rows(cs, {1, 4, 16});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].strategy == "Code/Direct");
  CHECK(rows[0].problems == 2);
  CHECK(rows[0].samples == 4);
  CHECK(rows[0].mean_rounds == doctest::Approx(1.5));
  REQUIRE(rows[0].pass_at_k.size() == 2);
  CHECK(rows[0].pass_at_k[0].first == 1);
  CHECK(rows[0].pass_at_k[0].second == doctest::Approx((0.25 + 1.0) / 2));
  CHECK(rows[0].pass_at_k[1].second == doctest::Approx(1.0));
  CHECK(rows[1].pass_at_k[0].second == 0.0);

  auto tsv = render_rows(rows, {1, 4, 16});
  CHECK(text::split_lines(tsv).size() == 3);
  auto curves = text::split_lines(render_curves(rows));
  CHECK(curves.size() == 4);
  auto first = nlohmann::json::parse(curves[0]);
  CHECK(first["k"] == 1);
}

TEST_CASE("compile only success is reported separately") {
  std::vector<ChainSummary> cs = {chain("Code/Direct", "a", false), chain("Code/Direct", "a", false)};
  cs[0].compile_only_success = true;
  auto rows = compute_rows(cs, {1});
  CHECK(rows[0].pass_at_k[0].second == 0.0);
  CHECK(rows[0].pass_at_k_compile_only[0].second == doctest::Approx(0.5));
}

TEST_CASE("emit report writes the three files") {
  auto dir = testsupport::temp_dir();
  emit_report({chain("Code/Direct", "a", true)}, dir.path() / "r", {1});
  for (const char* f : {"rows.tsv", "curves.jsonl", "plot_data.tsv"}) CHECK(std::filesystem::exists(dir.path() / "r" / f));
}
