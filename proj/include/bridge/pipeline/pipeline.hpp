#pragma once

#include "bridge/corpus/corpus.hpp"
#include "bridge/gateway/gateway.hpp"
#include "bridge/lean/backend.hpp"
#include "bridge/pipeline/chain.hpp"
#include "bridge/pipeline/config.hpp"
#include "bridge/prompt/template.hpp"
#include "bridge/python/runner.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace bridge::pipeline {

/// Shared, concurrency-safe services a run draws on.
struct Services {
  std::shared_ptr<gateway::Gateway> gateway;
  /// Null when no Lean checker is available; Code and Proof cells then fail with
  /// Error(BackendMissing) and cross-domain feedback skips its Lean stage.
  std::shared_ptr<const lean::LeanBackend> lean;
  std::shared_ptr<const python::Runner> python;
  std::shared_ptr<const prompt::TemplateCatalog> templates;
  /// Lean transcripts captured from the toolchain while recording, keyed by source digest.
  std::shared_ptr<std::map<std::string, lean::Transcript>> recorded_transcripts;
  std::shared_ptr<std::mutex> recorded_mutex;
};

/// Builds services from the config. Throws Error(Config) for unusable settings.
Services make_services(const RunConfig& config);

/// Parameters fixed for one pass over the grid.
struct CellParams {
  double temperature = 0.7;
  std::int64_t seed = 0;
};

/// Cross-pathway theorem analysis for one (model, problem) at one temperature.
struct IntersectionRecord {
  std::string model;
  std::string problem_id;
  std::string document;
};

/// All chains from one pass over the grid, in canonical order
/// (model, problem, strategy, sample, each in configured order).
struct RunRecord {
  CellParams params;
  std::vector<AttemptChain> chains;
  std::vector<IntersectionRecord> intersections;
};

class Pipeline {
 public:
  Pipeline(RunConfig config, corpus::ProblemSet problems, Services services);

  const RunConfig& config() const { return config_; }
  const corpus::ProblemSet& problems() const { return problems_; }

  /// Lean artifacts checked by verify-lean; success is Verified (or compiled, when configured).
  std::vector<AttemptChain> run_code_cell(const corpus::Problem& problem, prompt::StrategyId strategy,
                                          const std::string& model, const CellParams& params) const;
  /// Python artifacts run against the unit tests; contract and vacuity reports when enabled.
  std::vector<AttemptChain> run_spec_cell(const corpus::Problem& problem, prompt::StrategyId strategy,
                                          const std::string& model, const CellParams& params) const;
  /// Lean implementation plus theorems; sorry-bearing files never succeed.
  std::vector<AttemptChain> run_proof_cell(const corpus::Problem& problem, prompt::StrategyId pathway,
                                           const std::string& model, const CellParams& params) const;
  /// Python stage, Lean translation stage, Lean diagnostics fed back into the Python retry.
  std::vector<AttemptChain> run_cross_feedback(const corpus::Problem& problem, prompt::StrategyId strategy,
                                               const std::string& model, const CellParams& params) const;

  /// Dispatches by domain (and cross_feedback for Spec).
  std::vector<AttemptChain> run_cell(const corpus::Problem& problem, prompt::StrategyId strategy,
                                     const std::string& model, const CellParams& params) const;

  /// The whole grid at one temperature, on the worker pool.
  RunRecord run_grid(const CellParams& params) const;

  /// One record per grid temperature; seeds are seed XOR grid index.
  /// Throws Error(Usage) when the grid is empty.
  std::vector<RunRecord> run_sweep() const;

  /// run_sweep when a grid is configured, else one grid pass at the decoding temperature.
  std::vector<RunRecord> run() const;

 private:
  enum class Flow { Code, Spec, Proof, Cross };
  AttemptChain run_chain(Flow flow, const corpus::Problem& problem, prompt::StrategyId strategy,
                         const std::string& model, const CellParams& params, int sample) const;
  std::vector<AttemptChain> run_flow(Flow flow, const corpus::Problem& problem, prompt::StrategyId strategy,
                                     const std::string& model, const CellParams& params) const;
  lean::VerificationOutcome verify_lean(const std::string& artifact, const corpus::Problem& problem) const;
  python::TestOutcome test_python(const std::string& artifact, const corpus::Problem& problem) const;
  std::vector<IntersectionRecord> intersections(const std::vector<AttemptChain>& chains) const;

  RunConfig config_;
  corpus::ProblemSet problems_;
  Services services_;

  // Identical artifacts for the same problem are checked once per pipeline.
  mutable std::mutex cache_mu_;
  mutable std::map<std::string, std::shared_ptr<lean::VerificationOutcome>> lean_cache_;
  mutable std::map<std::string, std::shared_ptr<python::TestOutcome>> python_cache_;
};

}  // namespace bridge::pipeline
