#include "bridge/pipeline/pipeline.hpp"
#include "bridge/gateway/providers.hpp"
#include "bridge/lean/scaffold.hpp"
#include "bridge/prompt/extract.hpp"
#include "bridge/proof/intersection.hpp"
#include "bridge/proof/theorems.hpp"
#include "bridge/util/digest.hpp"
#include "bridge/util/error.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

namespace bridge::pipeline {

using prompt::Domain;
using prompt::StrategyId;

namespace {

constexpr std::string_view kMissingPython =
    "No Python code was found. Put the complete solution between <python> and </python> tags.";
constexpr std::string_view kMissingLean =
    "No Lean code was found. Put the complete solution in a single ```lean fenced block.";

std::uint64_t chain_seed(std::int64_t seed, const std::string& model, const std::string& problem,
                         const std::string& strategy, int sample) {
  std::string h = sha256_hex(std::to_string(seed) + "|" + model + "|" + problem + "|" + strategy + "|" +
                             std::to_string(sample));
  return std::stoull(h.substr(0, 15), nullptr, 16);
}

bool lean_success(const lean::VerificationOutcome& o, LeanSuccess predicate) {
  if (predicate == LeanSuccess::CompileOnly) return o.compiled;
  return o.status == lean::Status::Verified;
}

std::vector<std::string> lean_feedback(const LeanResult& r) {
  std::vector<std::string> out = r.diagnostics;
  if (out.empty() && r.sorry_count > 0) out.push_back("The solution still contains `sorry`; replace it with a proof.");
  if (out.empty() && !r.note.empty()) out.push_back(r.note);
  if (out.empty()) out.push_back("Lean reported a failure without diagnostics (status " +
                                 std::string(lean::to_string(r.status)) + ").");
  return out;
}

std::vector<std::string> python_feedback(const PythonResult& r) {
  std::vector<std::string> out = r.failures;
  if (r.fault) out.push_back(*r.fault + ": " + r.fault_detail);
  if (out.empty()) out.push_back("The solution did not pass the unit tests.");
  return out;
}

template <typename Task>
void run_pool(std::size_t count, std::size_t workers, Task&& task) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first;
  std::mutex mu;
  auto worker = [&] {
    while (!failed) {
      std::size_t i = next++;
      if (i >= count) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!first) first = std::current_exception();
        failed = true;
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace

Services make_services(const RunConfig& config) {
  Services s;
  s.templates = std::make_shared<const prompt::TemplateCatalog>(
      config.templates.empty() ? prompt::TemplateCatalog::load_default() : prompt::TemplateCatalog(config.templates));

  const auto& gw = config.gateway;
  std::shared_ptr<gateway::Provider> inner;
  auto live_router = [&] {
    auto router = std::make_shared<gateway::ProviderRouter>();
    for (const auto& pc : gw.providers) router->add(pc.models, std::make_shared<gateway::HttpProvider>(pc));
    return router;
  };
  switch (gw.mode) {
    case gateway::Mode::Mock:
      inner = std::make_shared<gateway::MockProvider>(gateway::MockProvider::load(gw.mock_script));
      break;
    case gateway::Mode::Live:
      inner = live_router();
      break;
    case gateway::Mode::Record:
      if (!gw.mock_script.empty())
        inner = std::make_shared<gateway::MockProvider>(gateway::MockProvider::load(gw.mock_script));
      else
        inner = live_router();
      break;
    case gateway::Mode::Replay:
      break;
  }
  std::shared_ptr<gateway::ReplayArchive> archive;
  if (!gw.archive.empty()) archive = std::make_shared<gateway::ReplayArchive>(gw.archive);
  std::shared_ptr<gateway::RateLimiter> limiter;
  if (gw.rate_limit > 0) limiter = std::make_shared<gateway::RateLimiter>(gw.rate_limit, gw.rate_interval);
  s.gateway = std::make_shared<gateway::Gateway>(gw.mode, inner, archive, limiter);

  if (config.lean.backend == LeanBackendKind::Transcript) {
    s.lean = std::make_shared<const lean::TranscriptBackend>(config.lean.transcripts);
  } else {
    auto tc = std::make_shared<lean::ToolchainBackend>(config.lean.command);
    if (tc->available()) {
      if (!config.lean.record_transcripts.empty()) {
        s.recorded_transcripts = std::make_shared<std::map<std::string, lean::Transcript>>();
        s.recorded_mutex = std::make_shared<std::mutex>();
        tc->set_recorder([map = s.recorded_transcripts, mu = s.recorded_mutex](const lean::Transcript& t) {
          std::lock_guard lock(*mu);
          map->emplace(t.source_digest, t);
        });
      }
      s.lean = tc;
    }
  }

  python::RunnerOptions opts;
  opts.interpreter = config.python.interpreter;
  opts.timeout = config.python.timeout;
  s.python = std::make_shared<const python::Runner>(opts);
  return s;
}

Pipeline::Pipeline(RunConfig config, corpus::ProblemSet problems, Services services)
    : config_(std::move(config)), problems_(std::move(problems)), services_(std::move(services)) {
  if (!services_.gateway || !services_.templates || !services_.python)
    throw Error(ErrorKind::Config, "pipeline needs a gateway, a template catalog and a Python runner");
}

lean::VerificationOutcome Pipeline::verify_lean(const std::string& artifact, const corpus::Problem& problem) const {
  std::string key = problem.id + "|" + sha256_hex(artifact);
  {
    std::lock_guard lock(cache_mu_);
    if (auto it = lean_cache_.find(key); it != lean_cache_.end()) return *it->second;
  }
  lean::ScaffoldOptions opts;
  opts.include_tests = config_.lean.include_tests;
  opts.mathlib = config_.lean.mathlib;
  lean::VerificationOutcome outcome;
  try {
    auto project = lean::scaffold(artifact, problem, opts);
    outcome = services_.lean->check(project, config_.lean.timeout);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Usage) throw;
    outcome.status = lean::Status::CompileFailed;
    outcome.error_classes.insert(lean::ErrorClass::Other);
    outcome.note = e.what();
  }
  std::lock_guard lock(cache_mu_);
  auto [it, inserted] = lean_cache_.emplace(key, std::make_shared<lean::VerificationOutcome>(std::move(outcome)));
  return *it->second;
}

python::TestOutcome Pipeline::test_python(const std::string& artifact, const corpus::Problem& problem) const {
  std::string key = problem.id + "|" + sha256_hex(artifact);
  {
    std::lock_guard lock(cache_mu_);
    if (auto it = python_cache_.find(key); it != python_cache_.end()) return *it->second;
  }
  python::TestOutcome outcome = services_.python->run_tests(artifact, problem);
  std::lock_guard lock(cache_mu_);
  auto [it, inserted] = python_cache_.emplace(key, std::make_shared<python::TestOutcome>(std::move(outcome)));
  return *it->second;
}

AttemptChain Pipeline::run_chain(Flow flow, const corpus::Problem& problem, StrategyId strategy,
                                 const std::string& model, const CellParams& params, int sample) const {
  const auto& templates = *services_.templates;
  const bool python_flow = flow == Flow::Spec || flow == Flow::Cross;
  const Domain domain = strategy.domain();
  const auto language = python_flow ? prompt::ArtifactLanguage::Python : prompt::ArtifactLanguage::Lean;
  const int retries = config_.mode == SamplingMode::ParallelOnly ? 0 : config_.max_retries;
  const std::uint64_t seed = chain_seed(params.seed, model, problem.id, strategy.qualified(), sample);

  gateway::DecodingParams decoding = config_.decoding;
  decoding.temperature = params.temperature;
  decoding.n_samples = 1;
  if (decoding.seed) decoding.seed = *decoding.seed ^ (params.seed ^ config_.seed);

  AttemptChain chain;
  chain.model = model;
  chain.problem_id = problem.id;
  chain.strategy = strategy.qualified();
  chain.temperature = params.temperature;
  chain.sample_index = sample;

  auto note = [&](const std::string& n) {
    if (std::find(chain.notes.begin(), chain.notes.end(), n) == chain.notes.end()) chain.notes.push_back(n);
  };

  prompt::RenderOptions render;
  render.tool_context = config_.tool_context;
  const std::string task_prompt = templates.render(strategy, problem, render);
  std::string prompt_text = task_prompt;

  for (int r = 1; r <= 1 + retries; ++r) {
    Round round;
    round.index = r;
    round.prompt_digest = gateway::prompt_digest(model, prompt_text, decoding);
    round.completion = services_.gateway->complete_one(model, prompt_text, decoding, sample,
                                                       {problem.id, strategy.qualified(), r});
    auto counted = gateway::count_tokens(round.completion);
    round.words = counted.words;
    round.tokens = counted.tokens;

    auto artifacts = prompt::try_extract(round.completion.text, domain);
    const auto* primary = prompt::primary_artifact(artifacts, domain);
    std::string previous = round.completion.text;
    std::vector<std::string> feedback;

    if (!primary) {
      feedback.emplace_back(python_flow ? kMissingPython : kMissingLean);
    } else {
      round.artifact = primary->body;
      previous = primary->body;
      if (python_flow) {
        round.python = PythonResult::from(test_python(primary->body, problem));
        if (round.python->all_passed()) {
          if (config_.python.contract_trials > 0)
            round.contracts = services_.python->check_contracts(primary->body, problem,
                                                                config_.python.contract_trials, seed);
          if (config_.python.vacuity) {
            try {
              round.vacuity = services_.python->vacuity_check(primary->body, problem, config_.python.mutants, seed);
            } catch (const Error& e) {
              if (e.kind() != ErrorKind::Usage) throw;
              note(std::string("vacuity_unavailable: ") + e.what());
            }
          }
          round.success = true;
        } else {
          feedback = python_feedback(*round.python);
        }
        if (round.success && flow == Flow::Cross && !services_.lean) {
          note("lean_unavailable");
        } else if (round.success && flow == Flow::Cross) {
          TranslationStage stage;
          std::string translation_prompt = templates.render_lean_translation(problem, primary->body);
          stage.prompt_digest = gateway::prompt_digest(model, translation_prompt, decoding);
          stage.completion = services_.gateway->complete_one(model, translation_prompt, decoding, sample,
                                                             {problem.id, strategy.qualified() + ":lean", r});
          auto lean_artifacts = prompt::try_extract(stage.completion.text, Domain::Code);
          if (const auto* la = prompt::primary_artifact(lean_artifacts, Domain::Code)) {
            stage.artifact = la->body;
            auto outcome = verify_lean(la->body, problem);
            stage.lean = LeanResult::from(outcome);
            if (outcome.status == lean::Status::ToolMissing) {
              note("lean_unavailable");
            } else if (!lean_success(outcome, config_.lean.success)) {
              round.success = false;
              feedback = lean_feedback(*stage.lean);
            }
          } else {
            round.success = false;
            feedback.emplace_back("The Lean translation contained no Lean code block.");
          }
          round.tokens += gateway::count_tokens(stage.completion).tokens;
          round.words += gateway::count_tokens(stage.completion).words;
          round.translation = std::move(stage);
        }
      } else {
        auto outcome = verify_lean(primary->body, problem);
        round.lean = LeanResult::from(outcome);
        if (outcome.status == lean::Status::ToolMissing) note("lean_unavailable");
        if (flow == Flow::Proof) {
          for (const auto& t : proof::extract_theorems(primary->body, strategy)) {
            TheoremRecord rec{t.name, t.statement, {}, t.has_sorry};
            for (auto c : t.categories) rec.categories.emplace_back(proof::snake_name(c));
            round.theorems.push_back(std::move(rec));
          }
        }
        round.success = lean_success(outcome, config_.lean.success);
        if (!round.success) feedback = lean_feedback(*round.lean);
      }
    }

    bool success = round.success;
    bool has_artifact = round.artifact.has_value();
    chain.rounds.push_back(std::move(round));
    if (success) {
      chain.final_status = FinalStatus::Success;
      return chain;
    }
    chain.final_status = has_artifact ? FinalStatus::Failure : FinalStatus::ExtractedNoArtifact;
    // The retry block follows the original task, as it would in a conversation.
    if (r <= retries)
      prompt_text = task_prompt + "\n\n" + templates.render_retry(previous, feedback, r, retries, language);
  }
  return chain;
}

std::vector<AttemptChain> Pipeline::run_flow(Flow flow, const corpus::Problem& problem, StrategyId strategy,
                                             const std::string& model, const CellParams& params) const {
  std::vector<AttemptChain> out;
  for (int i = 0; i < config_.samples(); ++i) out.push_back(run_chain(flow, problem, strategy, model, params, i));
  return out;
}

namespace {

void require(bool ok, std::string_view what) {
  if (!ok) throw Error(ErrorKind::Usage, std::string(what));
}

}  // namespace

std::vector<AttemptChain> Pipeline::run_code_cell(const corpus::Problem& problem, StrategyId strategy,
                                                  const std::string& model, const CellParams& params) const {
  require(strategy.domain() == Domain::Code, "run_code_cell needs a Code strategy");
  if (!services_.lean) throw Error(ErrorKind::BackendMissing, "Lean toolchain not found (set BRIDGE_LEAN_CMD)");
  return run_flow(Flow::Code, problem, strategy, model, params);
}

std::vector<AttemptChain> Pipeline::run_spec_cell(const corpus::Problem& problem, StrategyId strategy,
                                                  const std::string& model, const CellParams& params) const {
  require(strategy.domain() == Domain::Spec, "run_spec_cell needs a Spec strategy");
  if (!services_.python->available())
    throw Error(ErrorKind::BackendMissing, "Python interpreter not found (set BRIDGE_PYTHON_CMD)");
  return run_flow(Flow::Spec, problem, strategy, model, params);
}

std::vector<AttemptChain> Pipeline::run_proof_cell(const corpus::Problem& problem, StrategyId pathway,
                                                   const std::string& model, const CellParams& params) const {
  require(pathway.domain() == Domain::Proof, "run_proof_cell needs a Proof pathway");
  if (!services_.lean) throw Error(ErrorKind::BackendMissing, "Lean toolchain not found (set BRIDGE_LEAN_CMD)");
  return run_flow(Flow::Proof, problem, pathway, model, params);
}

std::vector<AttemptChain> Pipeline::run_cross_feedback(const corpus::Problem& problem, StrategyId strategy,
                                                       const std::string& model, const CellParams& params) const {
  require(strategy.domain() == Domain::Spec, "cross-domain feedback needs a Spec strategy");
  if (!services_.python->available())
    throw Error(ErrorKind::BackendMissing, "Python interpreter not found (set BRIDGE_PYTHON_CMD)");
  return run_flow(Flow::Cross, problem, strategy, model, params);
}

std::vector<AttemptChain> Pipeline::run_cell(const corpus::Problem& problem, StrategyId strategy,
                                             const std::string& model, const CellParams& params) const {
  switch (strategy.domain()) {
    case Domain::Code: return run_code_cell(problem, strategy, model, params);
    case Domain::Proof: return run_proof_cell(problem, strategy, model, params);
    case Domain::Spec:
      return config_.cross_feedback ? run_cross_feedback(problem, strategy, model, params)
                                    : run_spec_cell(problem, strategy, model, params);
  }
  return {};
}

RunRecord Pipeline::run_grid(const CellParams& params) const {
  bool needs_lean = false, needs_python = false;
  for (auto s : config_.strategies) {
    if (s.domain() == Domain::Spec) needs_python = true;
    else needs_lean = true;
  }
  if (needs_lean && !services_.lean)
    throw Error(ErrorKind::BackendMissing, "Lean toolchain not found (set BRIDGE_LEAN_CMD)");
  if (needs_python && !services_.python->available())
    throw Error(ErrorKind::BackendMissing, "Python interpreter not found (set BRIDGE_PYTHON_CMD)");

  struct Unit {
    const std::string* model;
    const corpus::Problem* problem;
    StrategyId strategy;
    int sample;
  };
  std::vector<Unit> units;
  for (const auto& m : config_.models)
    for (const auto& p : problems_)
      for (auto s : config_.strategies)
        for (int i = 0; i < config_.samples(); ++i) units.push_back({&m, &p, s, i});

  RunRecord record;
  record.params = params;
  record.chains.resize(units.size());
  run_pool(units.size(), config_.parallelism, [&](std::size_t i) {
    const Unit& u = units[i];
    Flow flow = u.strategy.domain() == Domain::Code    ? Flow::Code
                : u.strategy.domain() == Domain::Proof ? Flow::Proof
                : config_.cross_feedback               ? Flow::Cross
                                                       : Flow::Spec;
    record.chains[i] = run_chain(flow, *u.problem, u.strategy, *u.model, params, u.sample);
  });
  record.intersections = intersections(record.chains);
  return record;
}

std::vector<IntersectionRecord> Pipeline::intersections(const std::vector<AttemptChain>& chains) const {
  std::vector<StrategyId> pathways;
  for (auto s : config_.strategies)
    if (s.domain() == Domain::Proof) pathways.push_back(s);
  std::vector<IntersectionRecord> out;
  if (pathways.empty()) return out;

  for (const auto& model : config_.models) {
    for (const auto& problem : problems_) {
      std::vector<proof::PathwayGroup> groups;
      std::string implementation;
      for (auto pathway : pathways) {
        proof::PathwayGroup g{pathway, {}};
        for (const auto& c : chains) {
          if (c.model != model || c.problem_id != problem.id || c.strategy != pathway.qualified()) continue;
          if (c.rounds.empty() || !c.rounds.back().artifact) continue;
          const std::string& source = *c.rounds.back().artifact;
          if (implementation.empty()) implementation = source;
          for (auto& t : proof::extract_theorems(source, pathway)) {
            bool dup = std::any_of(g.candidates.begin(), g.candidates.end(),
                                   [&](const proof::TheoremCandidate& x) { return x.name == t.name; });
            if (!dup) g.candidates.push_back(std::move(t));
          }
        }
        groups.push_back(std::move(g));
      }
      auto report = proof::intersect(problem.id, groups, config_.intersection_threshold);
      out.push_back({model, problem.id, proof::emit_meta_analysis(report, implementation)});
    }
  }
  return out;
}

std::vector<RunRecord> Pipeline::run_sweep() const {
  if (config_.temperature_grid.empty()) throw Error(ErrorKind::Usage, "temperature sweep needs a non-empty grid");
  std::vector<RunRecord> out;
  for (std::size_t i = 0; i < config_.temperature_grid.size(); ++i)
    out.push_back(run_grid({config_.temperature_grid[i], config_.seed ^ static_cast<std::int64_t>(i)}));
  return out;
}

std::vector<RunRecord> Pipeline::run() const {
  if (!config_.temperature_grid.empty()) return run_sweep();
  return {run_grid({config_.decoding.temperature, config_.seed})};
}

}  // namespace bridge::pipeline
