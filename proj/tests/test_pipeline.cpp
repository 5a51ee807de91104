#include "pipeline_harness.hpp"
#include "proof_fixtures.hpp"

#include "bridge/pipeline/run_store.hpp"
#include "bridge/util/error.hpp"
#include "bridge/util/text.hpp"

#include <doctest.h>
#include <json.hpp>

using namespace bridge;
using namespace bridge::pipeline;
using testsupport::fenced;

namespace {

std::string write_config(const std::filesystem::path& dir, const std::string& body) {
  auto path = dir / "config.json";
  fs::write_file_atomic(path, body);
  return path.string();
}

std::string minimal_config() {
  return R"({"corpus": ")" + (testsupport::fixtures() / "corpus.jsonl").string() +
         R"(", "models": ["m"], "strategies": ["Code/*"], "gateway": {"mode": "mock", "mock_script": "s.jsonl"}})";
}

}  // namespace

TEST_CASE("config defaults, wildcards and relative paths") {
  auto cfg = config_from_json(minimal_config(), "/base");
  CHECK(cfg.strategies.size() == 9);
  CHECK(cfg.max_retries == 3);
  CHECK(cfg.mode == SamplingMode::ParallelPlusRetry);
  CHECK(cfg.gateway.mock_script == std::filesystem::path("/base/s.jsonl"));
  CHECK(cfg.temperatures() == std::vector<double>{0.7});
  CHECK(cfg.samples() == 1);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config rejects unknown keys and bad values") {
  auto expect_config_error = [](const std::string& doc, const char* needle) {
    try {
      config_from_json(doc, "/");
      FAIL("expected an error for " << doc);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Config);
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
    }
  };
  auto base = minimal_config();
  base.pop_back();
  expect_config_error(base + R"(, "colour": 1})", "colour");
  expect_config_error(base + R"(, "max_retries": -1})", "max_retries");
  expect_config_error(base + R"(, "mode": "Sideways"})", "mode");
  expect_config_error(base + R"(, "lean": {"timeout": 5}})", "timeout");
  expect_config_error("[1, 2]", "object");
}

TEST_CASE("retry only forces one sample per cell") {
  auto base = minimal_config();
  base.pop_back();
  auto cfg = config_from_json(base + R"(, "mode": "RetryOnly", "decoding": {"n_samples": 8}})", "/");
  CHECK(cfg.samples() == 1);
}

TEST_CASE("config overrides and resolved round trip") {
  auto dir = testsupport::temp_dir();
  auto path = write_config(dir.path(), minimal_config());
  auto cfg = load_config(path, {"max_retries=1", "decoding.n_samples=4", "lean.command=my lean"});
  CHECK(cfg.max_retries == 1);
  CHECK(cfg.decoding.n_samples == 4);
  CHECK(cfg.lean.command == "my lean");
  auto text = config_to_json(cfg);
  auto again = config_from_json(text, "/elsewhere");
  CHECK(config_to_json(again) == text);
  CHECK_THROWS_AS(load_config(dir.path() / "missing.json"), Error);
  CHECK_THROWS_AS(load_config(path, {"no-equals-sign"}), Error);
}

TEST_CASE("retry semantics for each retry budget") {
  for (int m : {0, 1, 3}) {
    CAPTURE(m);
    auto scripted = testsupport::retry_harness(m, 2).build().run_grid({0.7, 1});
    REQUIRE(scripted.chains.size() == 1);
    const auto& c = scripted.chains[0];
    CHECK(c.rounds.size() == static_cast<std::size_t>(std::min(3, 1 + m)));
    CHECK((c.final_status == FinalStatus::Success) == (m >= 2));
    for (std::size_t i = 0; i < c.rounds.size(); ++i) CHECK(c.rounds[i].index == static_cast<int>(i) + 1);

    auto failing = testsupport::retry_harness(m, -1).build().run_grid({0.7, 1});
    CHECK(failing.chains[0].rounds.size() == static_cast<std::size_t>(1 + m));
    CHECK(failing.chains[0].final_status == FinalStatus::Failure);

    auto parallel = testsupport::retry_harness(m, -1, SamplingMode::ParallelOnly, 5).build().run_grid({0.7, 1});
    CHECK(parallel.chains.size() == 5);
    for (const auto& ch : parallel.chains) CHECK(ch.rounds.size() == 1);
  }
}

TEST_CASE("retry prompts carry the task and the previous diagnostics") {
  auto h = testsupport::retry_harness(3, 2);
  auto p = h.build();
  auto record = p.run_grid({0.7, 1});
  REQUIRE(h.provider->prompts.size() == 3);
  const auto& first = h.provider->prompts[0].prompt;
  const auto& second = h.provider->prompts[1].prompt;
  CHECK(h.provider->prompts[1].context.round == 2);
  CHECK(text::starts_with(second, first));
  CHECK(text::contains(second, "RETRY ATTEMPT 1/3"));
  CHECK(text::contains(second, "did not evaluate"));
  CHECK(text::contains(h.provider->prompts[2].prompt, "RETRY ATTEMPT 2/3"));
  CHECK(record.chains[0].rounds[0].lean->status == lean::Status::CompileFailed);
  CHECK(record.chains[0].rounds[2].lean->status == lean::Status::Verified);
}

TEST_CASE("a completion without an artifact consumes a round") {
  testsupport::Harness h;
  h.config.max_retries = 1;
  h.say("arrays-001", "Code/Direct", 0, "I cannot help with that.");
  auto r = h.build().run_grid({0.7, 1});
  const auto& c = r.chains[0];
  CHECK(c.rounds.size() == 2);
  CHECK_FALSE(c.rounds[0].artifact);
  CHECK(c.final_status == FinalStatus::ExtractedNoArtifact);
}

TEST_CASE("missing transcripts mark Lean as unavailable rather than failing silently") {
  testsupport::Harness h;
  h.config.max_retries = 0;
  h.say("arrays-001", "Code/Direct", 0, fenced("lean", "def runningSum (xs : List Int) : List Int := []"));
  auto r = h.build().run_grid({0.7, 1});
  CHECK(r.chains[0].rounds[0].lean->status == lean::Status::ToolMissing);
  CHECK(r.chains[0].final_status == FinalStatus::Failure);
  CHECK(pipeline::summarize(r.chains[0]).final_error_classes.count("ToolMissing"));
}

TEST_CASE("proof cells never succeed with sorry") {
  testsupport::Harness h;
  h.config.max_retries = 0;
  h.config.strategies = {prompt::StrategyId::parse("Proof/TypeGuided")};
  std::string body = testsupport::good_lean("arrays-001") +
                     "\ntheorem rs_length (xs : List Int) : (runningSum xs).length = xs.length := by\n  sorry\n";
  h.say("arrays-001", "Proof/TypeGuided", 0, fenced("lean", body));
  h.compiler_for(fenced("lean", body), "arrays-001", 0, "Candidate.lean:4:0: warning: declaration uses 'sorry'\n");
  auto r = h.build().run_grid({0.7, 1});
  const auto& round = r.chains[0].rounds[0];
  CHECK(round.lean->sorry_count == 1);
  CHECK(round.lean->status == lean::Status::CompileFailed);
  REQUIRE(round.theorems.size() == 1);
  CHECK(round.theorems[0].name == "rs_length");
  CHECK(round.theorems[0].has_sorry);
  CHECK(r.chains[0].final_status == FinalStatus::Failure);
}

TEST_CASE("proof pathways produce one intersection document per problem") {
  testsupport::Harness h;
  h.config.max_retries = 0;
  h.config.strategies = prompt::list_strategies(prompt::Domain::Proof);
  h.config.intersection_threshold = 3;
  for (const auto& g : testsupport::intersection_groups_text()) h.say("arrays-001", g.first, 0, fenced("lean", g.second));
  auto r = h.build().run_grid({0.7, 1});
  CHECK(r.chains.size() == 5);
  REQUIRE(r.intersections.size() == 1);
  auto doc = nlohmann::json::parse(r.intersections[0].document);
  CHECK(doc["intersection_analysis"]["robust_theorems"] ==
        nlohmann::json::array({"ca_last_bounds", "ca_fold_correct"}));
}

TEST_CASE("spec cells run the unit tests") {
  if (!testsupport::python_available()) return;
  testsupport::Harness h;
  h.config.max_retries = 1;
  h.config.strategies = {prompt::StrategyId::parse("Spec/Direct")};
  h.say("arrays-001", "Spec/Direct", 1, "<python>\ndef runningSum(xs):\n    return []\n</python>");
  h.say("arrays-001", "Spec/Direct", 0,
        "<python>\n" + testsupport::read(testsupport::fixtures() / "python" / "arrays-001.py") + "</python>");
  auto r = h.build().run_grid({0.7, 1});
  const auto& c = r.chains[0];
  REQUIRE(c.rounds.size() == 2);
  CHECK(c.rounds[0].python->passed < c.rounds[0].python->total);
  CHECK(text::contains(h.provider->prompts[1].prompt, "expected"));
  CHECK(c.rounds[1].python->all_passed());
  CHECK(c.final_status == FinalStatus::Success);
}

TEST_CASE("cross feedback adds a Lean stage whose errors drive the retry") {
  if (!testsupport::python_available()) return;
  testsupport::Harness h;
  h.config.max_retries = 1;
  h.config.cross_feedback = true;
  h.config.strategies = {prompt::StrategyId::parse("Spec/Direct")};
  std::string py = "<python>\n" + testsupport::read(testsupport::fixtures() / "python" / "arrays-001.py") + "</python>";
  h.say("arrays-001", "Spec/Direct", 0, py);
  h.say("arrays-001", "Spec/Direct:lean", 1, fenced("lean", testsupport::kBadRunningSum));
  h.say("arrays-001", "Spec/Direct:lean", 0, fenced("lean", testsupport::good_lean("arrays-001")));
  h.compiler_for(fenced("lean", testsupport::kBadRunningSum), "arrays-001", 1,
                 "Candidate.lean:2:2: error: type mismatch\n  xs\n");
  h.compiler_for(fenced("lean", testsupport::good_lean("arrays-001")), "arrays-001", 0, "");
  auto r = h.build().run_grid({0.7, 1});
  const auto& c = r.chains[0];
  REQUIRE(c.rounds.size() == 2);
  REQUIRE(c.rounds[0].translation);
  CHECK(c.rounds[0].translation->lean->status == lean::Status::CompileFailed);
  CHECK_FALSE(c.rounds[0].success);
  CHECK(c.rounds[1].translation->lean->status == lean::Status::Verified);
  CHECK(c.final_status == FinalStatus::Success);
  bool fed_back = false;
  for (const auto& req : h.provider->prompts)
    if (req.context.strategy == "Spec/Direct" && req.context.round == 2) fed_back = text::contains(req.prompt, "type mismatch");
  CHECK(fed_back);
}

TEST_CASE("cross feedback without Lean keeps the Python verdict and notes it") {
  if (!testsupport::python_available()) return;
  testsupport::Harness h;
  h.config.max_retries = 0;
  h.config.cross_feedback = true;
  h.config.strategies = {prompt::StrategyId::parse("Spec/Direct")};
  h.say("arrays-001", "Spec/Direct", 0,
        "<python>\n" + testsupport::read(testsupport::fixtures() / "python" / "arrays-001.py") + "</python>");
  auto p = h.build();
  h.services.lean = nullptr;
  auto r = Pipeline(h.config, corpus::filter_by_ids(testsupport::corpus(), {"arrays-001"}), h.services).run_grid({0.7, 1});
  const auto& c = r.chains[0];
  CHECK(c.final_status == FinalStatus::Success);
  CHECK(std::find(c.notes.begin(), c.notes.end(), "lean_unavailable") != c.notes.end());
}

TEST_CASE("code cells need a Lean backend") {
  auto h = testsupport::retry_harness(0, 0);
  h.build();
  h.services.lean = nullptr;
  Pipeline p(h.config, corpus::filter_by_ids(testsupport::corpus(), {"arrays-001"}), h.services);
  try {
    p.run_grid({0.7, 1});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BackendMissing);
  }
}

TEST_CASE("chains round trip through json") {
  auto r = testsupport::retry_harness(3, 2).build().run_grid({0.7, 1});
  for (const auto& c : r.chains) {
    auto line = chain_to_json(c);
    CHECK(line.find('\n') == std::string::npos);
    CHECK(chain_to_json(chain_from_json(line)) == line);
  }
  CHECK_THROWS_AS(chain_from_json("{\"model\": 1}"), Error);
  auto s = summarize(r.chains[0]);
  CHECK(s.rounds == 3);
  CHECK(s.status == FinalStatus::Success);
  CHECK(s.words > 0);
}

TEST_CASE("temperature sweep seeds each pass") {
  auto h = testsupport::retry_harness(0, 0);
  h.config.temperature_grid = {0.2, 0.9};
  h.config.seed = 5;
  auto records = h.build().run_sweep();
  REQUIRE(records.size() == 2);
  CHECK(records[0].params.temperature == 0.2);
  CHECK(records[1].params.temperature == 0.9);
  CHECK(records[0].params.seed == 5);
  CHECK(records[1].params.seed == (5 ^ 1));
  CHECK(records[1].chains[0].temperature == 0.9);

  auto empty = testsupport::retry_harness(0, 0);
  CHECK_THROWS_AS(empty.build().run_sweep(), Error);
}

TEST_CASE("runs are written whole and read back") {
  auto h = testsupport::retry_harness(3, 2, SamplingMode::ParallelPlusRetry, 2);
  auto dir = testsupport::temp_dir();
  h.config.runs_dir = dir.path();
  auto p = h.build();
  auto records = p.run();
  auto id = new_run_id(h.config);
  auto run_dir = write_run(h.config, h.services, records, {std::chrono::milliseconds(1)}, id);
  CHECK(run_dir == dir.path() / id);
  for (const char* f : {"manifest.json", "chains.jsonl", "timings.jsonl", "report/rows.tsv", "report/curves.jsonl"})
    CHECK(std::filesystem::exists(run_dir / f));
  CHECK(testsupport::read(run_dir / "chains.jsonl") == chains_text(records));
  CHECK(load_chains(run_dir).size() == 2);
  CHECK(config_to_json(load_run_config(run_dir)) == config_to_json(h.config));
  CHECK_THROWS_AS(write_run(h.config, h.services, records, {std::chrono::milliseconds(1)}, id), Error);
  for (const auto& e : std::filesystem::directory_iterator(dir.path())) CHECK(e.path().filename() == id);
}

TEST_CASE("grid order is canonical regardless of workers") {
  auto h = testsupport::retry_harness(1, 1, SamplingMode::ParallelPlusRetry, 3);
  h.config.models = {"m", "n"};
  h.config.parallelism = 4;
  auto a = h.build().run_grid({0.7, 3});
  h.config.parallelism = 1;
  auto b = h.build().run_grid({0.7, 3});
  REQUIRE(a.chains.size() == 6);
  std::string ta, tb;
  for (const auto& c : a.chains) ta += chain_to_json(c) + "\n";
  for (const auto& c : b.chains) tb += chain_to_json(c) + "\n";
  CHECK(ta == tb);
  CHECK(a.chains[0].model == "m");
  CHECK(a.chains[3].model == "n");
  CHECK(a.chains[1].sample_index == 1);
}
