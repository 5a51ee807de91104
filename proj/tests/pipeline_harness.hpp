#pragma once

#include "support.hpp"

#include "bridge/lean/scaffold.hpp"
#include "bridge/pipeline/pipeline.hpp"
#include "bridge/prompt/extract.hpp"

#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace testsupport {

inline const std::string kBadRunningSum = "def runningSum (xs : List Int) : List Int := xs.reverse\n";

inline std::string good_lean(std::string_view id) { return read(fixtures() / "lean_solutions" / (std::string(id) + ".lean")); }

inline std::string fenced(std::string_view lang, std::string_view body) {
  return "Here is the solution.\n```" + std::string(lang) + "\n" + std::string(body) + "\n```\n";
}

/// Mock provider that remembers every prompt it served.
class CapturingProvider : public bridge::gateway::Provider {
 public:
  explicit CapturingProvider(bridge::gateway::MockProvider inner) : inner_(std::move(inner)) {}
  bridge::gateway::CompletionRecord complete(const bridge::gateway::Request& r) override {
    {
      std::lock_guard lock(mu_);
      prompts.push_back(r);
    }
    return inner_.complete(r);
  }
  std::vector<bridge::gateway::Request> prompts;

 private:
  bridge::gateway::MockProvider inner_;
  std::mutex mu_;
};

/// A pipeline over the fixture corpus with scripted completions and in-memory Lean transcripts.
struct Harness {
  bridge::pipeline::RunConfig config;
  std::shared_ptr<CapturingProvider> provider;
  std::shared_ptr<bridge::lean::TranscriptBackend> lean = std::make_shared<bridge::lean::TranscriptBackend>();
  bridge::gateway::MockProvider script;
  bridge::pipeline::Services services;

  Harness() {
    config.corpus = fixtures() / "corpus.jsonl";
    config.models = {"m"};
    config.strategies = {bridge::prompt::StrategyId::parse("Code/Direct")};
    config.problems = {"arrays-001"};
    config.decoding.n_samples = 1;
    config.decoding.temperature = 0.7;
    config.parallelism = 1;
    config.lean.backend = bridge::pipeline::LeanBackendKind::Transcript;
    // unused by the harness services; they keep the config valid for reloading
    config.lean.transcripts = fixtures() / "e2e" / "lean_transcripts.jsonl";
    config.gateway.mock_script = fixtures() / "mock" / "e2e.jsonl";
  }

  /// Completion for `problem`/`strategy` at `round` (0 means any round).
  void say(std::string problem, std::string strategy, int round, std::string text) {
    bridge::gateway::MockProvider::Entry e;
    e.key = std::move(problem);
    e.strategy = std::move(strategy);
    if (round > 0) e.round = round;
    e.texts = {std::move(text)};
    script.add(std::move(e));
  }

  /// Records what the compiler says about the artifact inside `completion`, scaffolded for `problem`.
  void compiler_for(std::string_view completion, std::string_view problem_id, int exit_code, std::string output) {
    auto arts = bridge::prompt::extract_artifacts(completion, bridge::prompt::Domain::Code);
    compiler(bridge::prompt::primary_artifact(arts, bridge::prompt::Domain::Code)->body, problem_id, exit_code,
             std::move(output));
  }

  /// Records what the compiler says about `artifact` scaffolded for `problem`.
  void compiler(std::string_view artifact, std::string_view problem_id, int exit_code, std::string output) {
    bridge::lean::ScaffoldOptions opts;
    opts.include_tests = config.lean.include_tests;
    opts.mathlib = config.lean.mathlib;
    auto s = bridge::lean::scaffold_source(artifact, problem(problem_id), opts);
    lean->add_for_source(s.source, exit_code, std::move(output));
  }

  bridge::pipeline::Pipeline build() {
    provider = std::make_shared<CapturingProvider>(script);
    services.gateway = std::make_shared<bridge::gateway::Gateway>(bridge::gateway::Mode::Mock, provider, nullptr);
    services.lean = lean;
    services.python = std::make_shared<bridge::python::Runner>();
    services.templates = std::make_shared<bridge::prompt::TemplateCatalog>(source_dir() / "templates");
    services.recorded_transcripts = std::make_shared<std::map<std::string, bridge::lean::Transcript>>();
    services.recorded_mutex = std::make_shared<std::mutex>();
    auto problems = bridge::corpus::filter_by_ids(corpus(), config.problems);
    return bridge::pipeline::Pipeline(config, problems, services);
  }
};

/// Code/Direct on arrays-001 where the first `failures` rounds produce a wrong artifact and the
/// rest the reference one (failures < 0: always wrong).
inline Harness retry_harness(int max_retries, int failures,
                             bridge::pipeline::SamplingMode mode = bridge::pipeline::SamplingMode::ParallelPlusRetry,
                             int samples = 1) {
  Harness h;
  h.config.max_retries = max_retries;
  h.config.mode = mode;
  h.config.decoding.n_samples = samples;
  const std::string good = good_lean("arrays-001");
  if (failures < 0) {
    h.say("arrays-001", "Code/Direct", 0, fenced("lean", kBadRunningSum));
  } else {
    for (int r = 1; r <= failures; ++r) h.say("arrays-001", "Code/Direct", r, fenced("lean", kBadRunningSum));
    h.say("arrays-001", "Code/Direct", 0, fenced("lean", good));
  }
  h.compiler_for(fenced("lean", kBadRunningSum), "arrays-001", 1,
             "Candidate.lean:6:0: error: Expression\n  runningSum [1, 2, 3] == [1, 3, 6]\ndid not evaluate to `true`\n");
  h.compiler_for(fenced("lean", good), "arrays-001", 0, "");
  return h;
}

}  // namespace testsupport
