#pragma once

#include "bridge/gateway/gateway.hpp"
#include "bridge/lean/backend.hpp"
#include "bridge/metrics/stats.hpp"
#include "bridge/pipeline/status.hpp"
#include "bridge/python/runner.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bridge::pipeline {

/// Lean verification result as stored in a run record (no timings).
struct LeanResult {
  lean::Status status = lean::Status::ToolMissing;
  bool compiled = false;
  std::vector<std::string> error_classes;
  std::vector<std::string> diagnostics;  // formatted errors only
  int sorry_count = 0;
  int guard_failures = 0;
  std::string note;

  static LeanResult from(const lean::VerificationOutcome& o);
  friend bool operator==(const LeanResult&, const LeanResult&) = default;
};

struct PythonResult {
  std::size_t total = 0;
  std::size_t passed = 0;
  std::optional<std::string> fault;
  std::string fault_detail;
  std::vector<std::string> failures;  // "test <i>: expected <e>, got <o>"

  static PythonResult from(const python::TestOutcome& o);
  bool all_passed() const { return !fault && total > 0 && passed == total; }
  friend bool operator==(const PythonResult&, const PythonResult&) = default;
};

struct TheoremRecord {
  std::string name;
  std::string statement;
  std::vector<std::string> categories;
  bool has_sorry = false;
  friend bool operator==(const TheoremRecord&, const TheoremRecord&) = default;
};

/// The Lean stage of a cross-domain round: the translation request and its check.
struct TranslationStage {
  std::string prompt_digest;
  gateway::CompletionRecord completion;
  std::optional<std::string> artifact;
  std::optional<LeanResult> lean;
};

struct Round {
  int index = 1;  // 1-based
  std::string prompt_digest;
  gateway::CompletionRecord completion;
  std::optional<std::string> artifact;  // absent when extraction failed
  std::optional<LeanResult> lean;
  std::optional<PythonResult> python;
  std::optional<python::ContractReport> contracts;
  std::optional<python::VacuityVerdict> vacuity;
  std::vector<TheoremRecord> theorems;
  std::optional<TranslationStage> translation;
  bool success = false;
  std::size_t words = 0;
  std::size_t tokens = 0;
};

/// Samples and retry rounds for one (model, problem, strategy, sample) at one temperature.
struct AttemptChain {
  std::string model;
  std::string problem_id;
  std::string strategy;  // qualified StrategyId
  double temperature = 0.7;
  int sample_index = 0;
  std::vector<Round> rounds;
  FinalStatus final_status = FinalStatus::Failure;
  std::vector<std::string> notes;  // fault annotations such as "lean_unavailable"
};

/// One canonical JSON line (no trailing newline). Latency and elapsed times are left out.
std::string chain_to_json(const AttemptChain& chain);
AttemptChain chain_from_json(std::string_view line);  // throws Error(Io) when malformed

/// Per-chain summary consumed by the metrics module.
metrics::ChainSummary summarize(const AttemptChain& chain);

}  // namespace bridge::pipeline
