#include "support.hpp"

#include "bridge/lean/backend.hpp"
#include "bridge/util/error.hpp"
#include "bridge/util/text.hpp"

#include <doctest.h>
#include <json.hpp>

#include <atomic>

using namespace bridge;
using namespace bridge::lean;

namespace {

std::set<std::string> names(const std::set<ErrorClass>& classes) {
  std::set<std::string> out;
  for (auto c : classes) out.insert(std::string(to_string(c)));
  return out;
}

std::string fake_lean_command() {
  return "python3 " + (testsupport::fixtures() / "fake_lean.py").string();
}

}  // namespace

TEST_CASE("diagnostic parsing joins continuation lines and drops info") {
  std::string out =
      "Candidate.lean:3:4: error: type mismatch\n  h\nhas type\n  Nat : Type\n"
      "Candidate.lean:5:0: warning: declaration uses 'sorry'\n"
      "Candidate.lean:6:0: info: [1, 2]\n";
  auto d = parse_diagnostics(out);
  REQUIRE(d.size() == 2);
  CHECK(d[0].line == 3);
  CHECK(d[0].column == 4);
  CHECK(d[0].severity == Severity::Error);
  CHECK(text::contains(d[0].message, "has type"));
  CHECK(d[1].severity == Severity::Warning);
  CHECK(format(d[0]).rfind("Candidate.lean:3:4: error: type mismatch", 0) == 0);
}

TEST_CASE("sorry counting ignores comments, strings and identifiers") {
  CHECK(sorry_count("theorem t : 1 = 1 := by sorry") == 1);
  CHECK(sorry_count("-- sorry\n/- sorry /- nested sorry -/ -/\ndef s := \"sorry\"\ndef sorry_free := 1") == 0);
  CHECK(sorry_count("def c := '\"'\ntheorem x : True := sorry") == 1);
}

TEST_CASE("classifier matches every labeled transcript") {
  auto lines = text::split_lines(testsupport::read(testsupport::fixtures() / "lean" / "labeled_transcripts.jsonl"));
  std::size_t n = 0;
  std::set<std::string> seen;
  for (const auto& line : lines) {
    if (text::trim(line).empty()) continue;
    auto j = nlohmann::json::parse(line);
    auto expected = j["labels"].get<std::set<std::string>>();
    auto got = names(classify(parse_diagnostics(j["output"].get<std::string>()), j["source"].get<std::string>()));
    CHECK_MESSAGE(got == expected, j["name"].get<std::string>());
    seen.insert(expected.begin(), expected.end());
    ++n;
  }
  CHECK(n >= 20);
  for (const char* c : {"Syntax", "Type", "Termination", "UnknownIdentifier", "SorryPresent"}) CHECK(seen.count(c));
}

TEST_CASE("error class names round trip") {
  for (auto c : {ErrorClass::Syntax, ErrorClass::Type, ErrorClass::Termination, ErrorClass::UnknownIdentifier,
                 ErrorClass::SorryPresent, ErrorClass::Timeout, ErrorClass::Other})
    CHECK(parse_error_class(to_string(c)) == c);
  CHECK_THROWS_AS(parse_error_class("Nope"), Error);
}

TEST_CASE("scaffold appends one guard per test and hoists imports") {
  const auto& p = testsupport::problem("arrays-001");
  auto artifact = testsupport::read(testsupport::fixtures() / "lean_solutions" / "arrays-001.lean");
  auto s = scaffold_source("import Std\n" + artifact, p, {});
  CHECK(s.guard_lines.size() == p.tests.size());
  auto lines = text::split_lines(s.source);
  for (int g : s.guard_lines) CHECK(text::starts_with(lines.at(g - 1), "#guard"));
  CHECK(text::starts_with(s.source, "import"));
  auto no_tests = scaffold_source(artifact, p, {.include_tests = false});
  CHECK(no_tests.guard_lines.empty());
  CHECK_THROWS_AS(scaffold_source("   ", p, {}), Error);
}

TEST_CASE("scaffold uses a fresh directory per call") {
  const auto& p = testsupport::problem("arrays-001");
  std::filesystem::path first;
  {
    auto a = scaffold("def runningSum (xs : List Int) : List Int := xs", p);
    auto b = scaffold("def runningSum (xs : List Int) : List Int := xs", p);
    CHECK(a.dir != b.dir);
    CHECK(std::filesystem::exists(a.file));
    CHECK(a.file.filename() == kSourceFileName);
    first = a.dir;
  }
  CHECK_FALSE(std::filesystem::exists(first));
  int made = 0;
  auto root = testsupport::temp_dir();
  ScaffoldOptions opts;
  opts.directories = [&] {
    auto d = root.path() / ("d" + std::to_string(made++));
    std::filesystem::create_directories(d);
    return d;
  };
  auto c = scaffold("def runningSum (xs : List Int) : List Int := xs", p, opts);
  CHECK(made == 1);
  CHECK(c.dir == root.path() / "d0");
}

TEST_CASE("interpret separates guard failures from compile errors") {
  const auto& p = testsupport::problem("arrays-001");
  auto project = scaffold("def runningSum (xs : List Int) : List Int := xs", p);
  int g = project.guard_lines.at(1);
  std::string out = "Candidate.lean:" + std::to_string(g) + ":0: error: Expression\n  runningSum [1]\ndid not evaluate to `true`\n";
  auto o = interpret(project, out, 1, false, std::chrono::milliseconds(5), kDefaultTimeout);
  CHECK(o.status == Status::CompileFailed);
  CHECK(o.guard_failures == 1);
  CHECK(o.compiled);
  CHECK(o.error_classes == std::set<ErrorClass>{ErrorClass::Other});
  REQUIRE(o.diagnostics.size() == 1);
  CHECK(text::starts_with(o.diagnostics[0].message, kGuardFailurePrefix));

  auto ok = interpret(project, "", 0, false, std::chrono::milliseconds(5), kDefaultTimeout);
  CHECK(ok.status == Status::Verified);
  auto slow = interpret(project, "", -1, true, kDefaultTimeout, kDefaultTimeout);
  CHECK(slow.status == Status::Timeout);
  CHECK(slow.error_classes.count(ErrorClass::Timeout));
}

TEST_CASE("a sorry file never verifies even with exit code 0") {
  const auto& p = testsupport::problem("arrays-001");
  auto project = scaffold("def runningSum (xs : List Int) : List Int := sorry", p);
  auto o = interpret(project, "Candidate.lean:2:4: warning: declaration uses 'sorry'\n", 0, false,
                     std::chrono::milliseconds(1), kDefaultTimeout);
  CHECK(o.status == Status::CompileFailed);
  CHECK_FALSE(o.compiled);
  CHECK(o.sorry_count == 1);
  CHECK(o.error_classes.count(ErrorClass::SorryPresent));
}

TEST_CASE("transcript backend replays by source digest") {
  const auto& p = testsupport::problem("arrays-001");
  auto project = scaffold("def runningSum (xs : List Int) : List Int := xs", p);
  TranscriptBackend backend;
  CHECK(backend.check(project, kDefaultTimeout).status == Status::ToolMissing);
  backend.add_for_source(project.source, 1, "Candidate.lean:1:4: error: unknown identifier 'foo'\n");
  auto o = backend.check(project, kDefaultTimeout);
  CHECK(o.status == Status::CompileFailed);
  CHECK(o.error_classes == std::set<ErrorClass>{ErrorClass::UnknownIdentifier});
  CHECK(backend.size() == 1);
}

TEST_CASE("transcript files load and reject malformed records") {
  TranscriptBackend loaded(testsupport::fixtures() / "e2e" / "lean_transcripts.jsonl");
  CHECK(loaded.size() > 0);
  auto dir = testsupport::temp_dir();
  fs::write_file_atomic(dir.path() / "bad.jsonl", "{\"exit_code\": 0}\n");
  CHECK_THROWS_AS(TranscriptBackend(dir.path() / "bad.jsonl"), Error);
}

TEST_CASE("toolchain backend reports a missing compiler") {
  ToolchainBackend missing("/nonexistent/lean-binary");
  CHECK_FALSE(missing.available());
  auto project = scaffold("def runningSum (xs : List Int) : List Int := xs", testsupport::problem("arrays-001"));
  auto o = missing.check(project, kDefaultTimeout);
  CHECK(o.status == Status::ToolMissing);
  CHECK_FALSE(o.note.empty());
}

TEST_CASE("toolchain backend drives a compiler and records transcripts") {
  if (!testsupport::python_available()) return;
  ToolchainBackend backend(fake_lean_command());
  REQUIRE(backend.available());
  std::atomic<int> recorded{0};
  backend.set_recorder([&](const Transcript&) { ++recorded; });
  const auto& p = testsupport::problem("strings-001");
  auto good = testsupport::read(testsupport::fixtures() / "lean_solutions" / "strings-001.lean");
  CHECK(backend.check(scaffold(good, p), kDefaultTimeout).status == Status::Verified);
  auto bad = scaffold("-- fixture-diagnostic: type mismatch\n" + good, p);
  auto o = backend.check(bad, kDefaultTimeout);
  CHECK(o.status == Status::CompileFailed);
  CHECK(o.error_classes.count(ErrorClass::Type));
  CHECK(recorded == 2);
}
