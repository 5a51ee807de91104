#include "support.hpp"

#include "bridge/corpus/literal.hpp"
#include "bridge/util/digest.hpp"
#include "bridge/util/error.hpp"
#include "bridge/util/subprocess.hpp"
#include "bridge/util/text.hpp"

#include <doctest.h>

using namespace bridge;

TEST_CASE("sha256 of known inputs") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("text helpers") {
  CHECK(text::trim("  a b \n") == "a b");
  CHECK(text::split_lines("a\nb\r\nc") == std::vector<std::string>{"a", "b", "c"});
  CHECK(text::word_count("one  two\tthree\n") == 3);
  CHECK(text::word_count("") == 0);
  CHECK(text::format_fixed(0.91666, 4) == "0.9167");
  CHECK(text::is_identifier("runningSum"));
  CHECK_FALSE(text::is_identifier("2x"));
  CHECK(text::replace_all("aXbX", "X", "yy") == "ayybyy");
}

TEST_CASE("subprocess captures output and exit code") {
  ProcessSpec spec;
  spec.argv = {"/bin/sh", "-c", "echo hi; echo err >&2; exit 3"};
  auto r = run_process(spec);
  CHECK(r.exit_code == 3);
  CHECK(r.out == "hi\n");
  CHECK(r.err == "err\n");
  CHECK_FALSE(r.ok());
}

TEST_CASE("subprocess timeout kills the process group") {
  ProcessSpec spec;
  spec.argv = {"/bin/sh", "-c", "sleep 30 & sleep 30"};
  spec.timeout = std::chrono::milliseconds(200);
  auto start = std::chrono::steady_clock::now();
  auto r = run_process(spec);
  CHECK(r.timed_out);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(5));
}

TEST_CASE("subprocess reports missing executables") {
  ProcessSpec spec;
  spec.argv = {"/nonexistent/definitely-not-here"};
  CHECK(run_process(spec).spawn_failed);
  CHECK(find_executable("definitely-not-a-command-xyz").empty());
  CHECK_FALSE(find_executable("sh").empty());
}

TEST_CASE("literal grammar") {
  using corpus::parse_literal;
  CHECK(corpus::to_text(parse_literal(" [1, -2 ,3] ")) == "[1,-2,3]");
  CHECK(corpus::to_text(parse_literal("\"a\\\"b\"")) == "\"a\\\"b\"");
  CHECK(parse_literal("true").is_bool());
  CHECK(corpus::to_python(parse_literal("[true,false]")) == "[True, False]");
  CHECK_THROWS_AS(parse_literal("[1,"), corpus::LiteralError);
  CHECK_THROWS_AS(parse_literal("1.5"), corpus::LiteralError);
  CHECK_THROWS_AS(parse_literal("None"), corpus::LiteralError);
}

TEST_CASE("semantic types to Lean and Python") {
  auto t = corpus::parse_type("List (List Nat)");
  CHECK(corpus::to_lean(t) == "List (List Nat)");
  CHECK(corpus::to_python_hint(t) == "List[List[int]]");
  CHECK(corpus::to_lean(corpus::parse_literal("[-1,2]"), corpus::parse_type("Array Int")) == "#[(-1), 2]");
  CHECK(corpus::conforms(corpus::parse_literal("[1,2]"), corpus::parse_type("List Nat")));
  CHECK_FALSE(corpus::conforms(corpus::parse_literal("[-1]"), corpus::parse_type("List Nat")));
  CHECK_THROWS_AS(corpus::parse_type("Option Int"), corpus::LiteralError);
}

TEST_CASE("fixture corpus covers every category with four tests each") {
  const auto& set = testsupport::corpus();
  CHECK(set.size() == 12);
  for (auto cat : corpus::kCategories) CHECK(corpus::filter_by_category(set, cat).size() == 2);
  for (const auto& p : set) {
    CHECK(p.tests.size() == 4);
    CHECK(corpus::validate_problem(p).empty());
  }
}

TEST_CASE("manifest round trip preserves problems and order") {
  const auto& set = testsupport::corpus();
  auto dir = testsupport::temp_dir();
  auto path = dir.path() / "copy.jsonl";
  corpus::save_manifest(set, path);
  auto again = corpus::load_manifest(path);
  CHECK(again == set);
  CHECK(corpus::serialize_manifest(again) == corpus::serialize_manifest(set));
  CHECK(again[0].id == "arrays-001");
}

TEST_CASE("manifest errors name the line and field") {
  std::string bad =
      R"({"id":"x","title":"t","statement":"s","function_name":"f","params":[{"name":"a","type":"Int"}],)"
      R"("return_type":"Int","tests":[{"inputs":["1","2"],"expected":"3"}],"category":"arrays"})";
  try {
    corpus::parse_manifest(bad + "\n", "m.jsonl");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Corpus);
    std::string msg = e.what();
    CHECK(msg.find("m.jsonl:1") != std::string::npos);
    CHECK(msg.find("arity") != std::string::npos);
  }
}

TEST_CASE("manifest rejects duplicates, unknown categories and placeholder syntax") {
  std::string line =
      R"({"id":"x","title":"t","statement":"s {{ x }}","function_name":"f","params":[],)"
      R"("return_type":"Int","tests":[{"inputs":[],"expected":"3"}],"category":"poetry"})";
  try {
    corpus::parse_manifest(line + "\n" + line + "\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    std::string msg = e.what();
    CHECK(msg.find("category") != std::string::npos);
    CHECK(msg.find("placeholder") != std::string::npos);
    CHECK(msg.find("duplicate") != std::string::npos);
  }
}

TEST_CASE("filters keep manifest order") {
  auto picked = corpus::filter_by_ids(testsupport::corpus(), {"trees-002", "arrays-002"});
  REQUIRE(picked.size() == 2);
  CHECK(picked[0].id == "arrays-002");
  CHECK(picked[1].id == "trees-002");
}
