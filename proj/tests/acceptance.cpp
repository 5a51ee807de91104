// Acceptance checks: one line per criterion, nonzero exit when any check fails.

#include "golden.hpp"
#include "pass_at_k_oracle.hpp"
#include "pipeline_harness.hpp"
#include "proof_fixtures.hpp"

#include "bridge/lean/backend.hpp"
#include "bridge/metrics/report.hpp"
#include "bridge/pipeline/run_store.hpp"
#include "bridge/python/runner.hpp"
#include "bridge/util/error.hpp"
#include "bridge/util/subprocess.hpp"
#include "bridge/util/text.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>

using namespace bridge;
using namespace std::chrono_literals;
using Clock = std::chrono::steady_clock;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
  Verdict verdict = Verdict::Fail;
  std::string detail;
};

Outcome pass(std::string d) { return {Verdict::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Verdict::Fail, std::move(d)}; }

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string secs(double s) { return text::format_fixed(s, 2) + " s"; }

Outcome pass_at_k_oracle() {
  auto t0 = Clock::now();
  auto bad = testsupport::pass_at_k_mismatches(12);
  double s = seconds_since(t0);
  if (bad) return fail(std::to_string(bad) + " (n,c,k) triples disagree");
  if (s >= 5) return fail("took " + secs(s));
  return pass("all n <= 12 exact, " + secs(s));
}

Outcome token_calibration() {
  const std::pair<std::size_t, std::size_t> table[] = {{195, 270}, {402, 555}, {382, 526},
                                                       {387, 534}, {390, 538}, {408, 563}};
  double worst = 0;
  for (auto [words, tokens] : table) {
    double err = std::abs(double(metrics::estimate_tokens(words)) - double(tokens)) / double(tokens);
    worst = std::max(worst, err);
  }
  std::string d = "worst relative error " + text::format_fixed(worst * 100, 2) + "%";
  return worst <= 0.05 ? pass(d) : fail(d);
}

Outcome prompt_goldens() {
  auto t0 = Clock::now();
  prompt::TemplateCatalog catalog(testsupport::source_dir() / "templates");
  auto cases = testsupport::golden_cases(catalog);
  auto bad = testsupport::golden_mismatches(cases, false);
  std::size_t survivors = 0;
  for (const auto& c : cases) survivors += prompt::has_surviving_placeholder(c.rendered);
  bool retry_ok = text::contains(catalog.render_retry("x", {"e"}, 2, 3), "RETRY ATTEMPT 2/3");
  double s = seconds_since(t0);
  std::string d = std::to_string(cases.size()) + " renders, " + std::to_string(bad.size()) + " mismatched, " +
                  std::to_string(survivors) + " with placeholders, " + secs(s);
  if (!bad.empty()) d += " (first: " + bad.front() + ")";
  if (!retry_ok) d += ", retry header missing";
  return bad.empty() && survivors == 0 && retry_ok && s < 10 ? pass(d) : fail(d);
}

Outcome classifier_fidelity() {
  std::size_t total = 0, matched = 0;
  std::set<std::string> seen;
  std::string first_miss;
  for (const auto& line : text::split_lines(testsupport::read(testsupport::fixtures() / "lean" / "labeled_transcripts.jsonl"))) {
    if (text::trim(line).empty()) continue;
    auto j = nlohmann::json::parse(line);
    auto want = j["labels"].get<std::set<std::string>>();
    std::set<std::string> got;
    for (auto c : lean::classify(lean::parse_diagnostics(j["output"].get<std::string>()), j["source"].get<std::string>()))
      got.insert(std::string(lean::to_string(c)));
    ++total;
    if (got == want) ++matched;
    else if (first_miss.empty()) first_miss = j["name"].get<std::string>();
    seen.insert(want.begin(), want.end());
  }
  bool spans = true;
  for (const char* c : {"Syntax", "Type", "Termination", "UnknownIdentifier", "SorryPresent"}) spans &= seen.count(c) > 0;
  std::string d = std::to_string(matched) + "/" + std::to_string(total) + " transcripts";
  if (!first_miss.empty()) d += ", first miss " + first_miss;
  if (!spans) d += ", corpus lacks a required class";
  return matched == total && total >= 20 && spans ? pass(d) : fail(d);
}

Outcome retry_semantics() {
  std::vector<std::string> problems;
  for (int m : {0, 1, 3}) {
    auto scripted = testsupport::retry_harness(m, 2).build().run_grid({0.7, 1}).chains.at(0);
    std::size_t want = std::min(3, 1 + m);
    bool want_success = m >= 2;
    if (scripted.rounds.size() != want || (scripted.final_status == FinalStatus::Success) != want_success)
      problems.push_back("fail,fail,pass with max_retries=" + std::to_string(m) + " gave " +
                         std::to_string(scripted.rounds.size()) + " rounds " + std::string(to_string(scripted.final_status)));
    auto failing = testsupport::retry_harness(m, -1).build().run_grid({0.7, 1}).chains.at(0);
    if (failing.rounds.size() != std::size_t(1 + m) || failing.final_status != FinalStatus::Failure)
      problems.push_back("always-fail with max_retries=" + std::to_string(m) + " gave " +
                         std::to_string(failing.rounds.size()) + " rounds");
    auto parallel = testsupport::retry_harness(m, -1, pipeline::SamplingMode::ParallelOnly, 5).build().run_grid({0.7, 1});
    bool single = parallel.chains.size() == 5;
    for (const auto& c : parallel.chains) single &= c.rounds.size() == 1;
    if (!single) problems.push_back("ParallelOnly with max_retries=" + std::to_string(m) + " retried");
  }
  if (!problems.empty()) return fail(problems.front());
  return pass("max_retries in {0, 1, 3}");
}

struct E2eRun {
  std::string chains;
  std::map<std::string, std::string> report;
  std::size_t chain_count = 0;
};

E2eRun run_fixture_config(const std::filesystem::path& config_path, const std::vector<std::string>& overrides = {}) {
  auto config = pipeline::load_config(config_path, overrides);
  auto problems = corpus::load_manifest(config.corpus);
  if (!config.problems.empty()) problems = corpus::filter_by_ids(problems, config.problems);
  pipeline::Pipeline p(config, problems, pipeline::make_services(config));
  auto records = p.run();
  E2eRun out;
  out.chains = pipeline::chains_text(records);
  std::vector<metrics::ChainSummary> summaries;
  for (const auto& r : records)
    for (const auto& c : r.chains) summaries.push_back(pipeline::summarize(c));
  out.chain_count = summaries.size();
  auto dir = testsupport::temp_dir("bridge-accept-");
  metrics::emit_report(summaries, dir.path(), config.ladder);
  for (const auto& e : std::filesystem::directory_iterator(dir.path()))
    out.report[e.path().filename().string()] = testsupport::read(e.path());
  return out;
}

Outcome replay_determinism() {
  auto t0 = Clock::now();
  auto cfg = testsupport::fixtures() / "e2e" / "config.json";
  auto a = run_fixture_config(cfg);
  auto b = run_fixture_config(cfg);
  double s = seconds_since(t0);
  std::string d = std::to_string(a.chain_count) + " chains per run, two runs in " + secs(s);
  if (a.chain_count != 12 * 2 * 4 * 5) return fail(d + ", unexpected chain count");
  if (a.chains != b.chains) return fail(d + ", chains differ");
  if (a.report != b.report || a.report.empty()) return fail(d + ", reports differ");
  if (s >= 60) return fail(d);
  return pass(d);
}

Outcome vacuity_oracle() {
  python::Runner runner;
  if (!runner.available()) return fail("no Python interpreter; the vacuity oracle needs one");
  auto problems = corpus::load_manifest(testsupport::fixtures() / "contracts" / "problems.jsonl");
  const auto* p = problems.find("abs-sorted");
  auto read = [](const char* f) { return testsupport::read(testsupport::fixtures() / "contracts" / f); };
  auto free = runner.vacuity_check(read("contract_free.py"), *p);
  auto dafny = runner.vacuity_check(read("dafny_sorted.py"), *p);
  auto self = runner.vacuity_check(read("self_violating.py"), *p);
  std::string d = "contract-free " + std::string(python::to_string(free.verdict)) + ", sortedness contract " +
                  std::string(python::to_string(dafny.verdict)) + " (" + std::to_string(dafny.mutants_rejected) + "/" +
                  std::to_string(dafny.mutants_total) + " mutants rejected), self-violating " +
                  std::string(python::to_string(self.verdict));
  bool ok = free.verdict == python::Vacuity::Vacuous && dafny.verdict == python::Vacuity::NonVacuous &&
            dafny.mutants_total == 6 && dafny.mutants_rejected >= 1 &&
            self.verdict == python::Vacuity::InconsistentSpec;
  return ok ? pass(d) : fail(d);
}

Outcome intersection_correctness() {
  auto groups = testsupport::intersection_groups();
  auto expected = testsupport::intersection_expected();
  for (const auto& [t, want] : expected["thresholds"].items()) {
    auto r = proof::intersect("arrays-001", groups, std::stoul(t));
    if (testsupport::category_names(r.common_concepts) != want["common_concepts"].get<std::vector<std::string>>())
      return fail("common concepts differ at threshold " + t);
    if (r.robust_theorems != want["robust_theorems"].get<std::vector<std::string>>())
      return fail("robust theorems differ at threshold " + t);
  }
  auto report = proof::intersect("arrays-001", groups, 3);
  auto doc = proof::emit_meta_analysis(report, testsupport::good_lean("arrays-001"));
  auto back = proof::parse_meta_analysis(doc);
  for (std::size_t i = 0; i < report.pathways.size(); ++i) {
    const auto& x = report.pathways[i].candidates;
    const auto& y = back.pathways.at(i).candidates;
    if (x.size() != y.size()) return fail("round trip lost theorems");
    for (std::size_t k = 0; k < x.size(); ++k)
      if (x[k].name != y[k].name || x[k].statement != y[k].statement) return fail("round trip changed " + x[k].name);
  }
  auto j = nlohmann::json::parse(doc);
  for (const char* key : {"intersection_analysis", "final_theorem_selection", "complete_Lean_file"})
    if (!j.contains(key)) return fail(std::string("missing field ") + key);
  for (const char* key : {"common_concepts", "shared_properties", "robust_theorems", "pathway_specific_insights"})
    if (!j["intersection_analysis"].contains(key)) return fail(std::string("missing field ") + key);
  return pass("thresholds 1, 3, 5; round trip; field names");
}

Outcome toolchains() {
  std::vector<std::string> notes;
  bool failed = false;

  lean::ToolchainBackend lean_backend;
  if (!lean_backend.available()) {
    notes.push_back("Lean SKIP (no toolchain)");
  } else {
    int ok = 0;
    for (const auto& e : std::filesystem::directory_iterator(testsupport::fixtures() / "lean" / "good")) {
      auto id = e.path().stem().string();
      auto o = lean_backend.check(lean::scaffold(testsupport::read(e.path()), testsupport::problem(id)), lean::kDefaultTimeout);
      ok += o.status == lean::Status::Verified;
    }
    auto expected = nlohmann::json::parse(testsupport::read(testsupport::fixtures() / "lean" / "bad" / "expected.json"));
    int bad_ok = 0;
    for (const auto& [file, classes] : expected.items()) {
      auto id = std::filesystem::path(file).stem().string();
      auto o = lean_backend.check(lean::scaffold(testsupport::read(testsupport::fixtures() / "lean" / "bad" / file),
                                                 testsupport::problem(id)),
                                  lean::kDefaultTimeout);
      bool all = o.status == lean::Status::CompileFailed;
      for (const auto& c : classes) all &= o.error_classes.count(lean::parse_error_class(c.get<std::string>())) > 0;
      bad_ok += all;
    }
    failed |= ok != 3 || bad_ok != 3;
    notes.push_back("Lean good " + std::to_string(ok) + "/3 verified, bad " + std::to_string(bad_ok) + "/3 classified");
  }

  python::Runner runner;
  if (!runner.available()) {
    notes.push_back("Python SKIP (no interpreter)");
  } else {
    const auto& p = testsupport::problem("arrays-001");
    auto good = runner.run_tests(testsupport::read(testsupport::fixtures() / "python" / "arrays-001.py"), p);
    auto wrong = runner.run_tests(testsupport::read(testsupport::fixtures() / "python_bad" / "wrong_constant.py"), p);
    auto t0 = Clock::now();
    auto loop = runner.run_tests(testsupport::read(testsupport::fixtures() / "python_bad" / "infinite_loop.py"), p);
    double s = seconds_since(t0);
    bool ok = good.passed == 4 && good.total == 4 && wrong.passed < 4 && loop.fault == python::Fault::Timeout && s < 6;
    failed |= !ok;
    notes.push_back("Python reference " + std::to_string(good.passed) + "/4, wrong constant " +
                    std::to_string(wrong.passed) + "/4, infinite loop " +
                    (loop.fault ? std::string(python::to_string(*loop.fault)) : std::string("no fault")) + " after " + secs(s));
  }
  std::string d = text::join(notes, "; ");
  if (failed) return fail(d);
  bool none_ran = text::contains(notes[0], "SKIP") && text::contains(notes[1], "SKIP");
  return {none_ran ? Verdict::Skip : Verdict::Pass, d};
}

Outcome metrics_replay() {
  auto dir = testsupport::fixtures() / "minirun";
  auto run = run_fixture_config(dir / "config.json");
  auto rows = run.report["rows.tsv"];
  auto curves = run.report["curves.jsonl"];
  std::string d = std::to_string(run.chain_count) + " chains replayed";
  if (rows != testsupport::read(dir / "expected_rows.tsv")) return fail(d + ", rows differ from the committed file");
  if (curves != testsupport::read(dir / "expected_curves.jsonl")) return fail(d + ", curves differ from the committed file");
  return pass(d + ", rows and curves at k in {1, 5} identical");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"pass@k oracle equivalence", pass_at_k_oracle},
      {"token calibration", token_calibration},
      {"prompt golden suite", prompt_goldens},
      {"error classifier fidelity", classifier_fidelity},
      {"retry-loop semantics", retry_semantics},
      {"end-to-end replay determinism", replay_determinism},
      {"vacuity oracle", vacuity_oracle},
      {"intersection correctness", intersection_correctness},
      {"toolchain-gated verification", toolchains},
      {"metrics-path replay", metrics_replay},
  };
  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    Outcome o;
    try {
      o = checks[i].second();
    } catch (const std::exception& e) {
      o = fail(std::string("threw: ") + e.what());
    }
    const char* v = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Skip ? "SKIP" : "FAIL";
    failures += o.verdict == Verdict::Fail;
    std::printf("%-4s %2zu %s: %s\n", v, i + 1, checks[i].first.c_str(), text::replace_all(o.detail, "\n", " ").c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
