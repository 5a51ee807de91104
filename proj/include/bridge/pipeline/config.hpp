#pragma once

#include "bridge/gateway/gateway.hpp"
#include "bridge/gateway/providers.hpp"
#include "bridge/prompt/strategy.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bridge::pipeline {

enum class SamplingMode { ParallelOnly, RetryOnly, ParallelPlusRetry };
std::string_view to_string(SamplingMode m);
SamplingMode parse_sampling_mode(std::string_view s);  // throws Error(Config)

/// What counts as success for a Lean artifact.
enum class LeanSuccess { CompileOnly, CompileAndGuards };
std::string_view to_string(LeanSuccess s);
LeanSuccess parse_lean_success(std::string_view s);

enum class LeanBackendKind { Toolchain, Transcript };

struct LeanConfig {
  LeanBackendKind backend = LeanBackendKind::Toolchain;
  std::string command;                       // empty: $BRIDGE_LEAN_CMD, else "lean"
  std::filesystem::path transcripts;         // Transcript backend input
  std::filesystem::path record_transcripts;  // append toolchain runs here when set
  std::chrono::milliseconds timeout{std::chrono::seconds(120)};
  bool mathlib = false;
  bool include_tests = true;
  LeanSuccess success = LeanSuccess::CompileAndGuards;
};

struct PythonConfig {
  std::string interpreter;  // empty: $BRIDGE_PYTHON_CMD, else "python3"
  std::chrono::milliseconds timeout{std::chrono::seconds(5)};
  std::size_t contract_trials = 0;
  bool vacuity = false;
  std::size_t mutants = 6;
};

struct GatewayConfig {
  gateway::Mode mode = gateway::Mode::Mock;
  std::filesystem::path mock_script;
  std::filesystem::path archive;
  std::vector<gateway::ProviderConfig> providers;
  std::size_t rate_limit = 0;  // requests per interval; 0 disables
  std::chrono::milliseconds rate_interval{std::chrono::seconds(60)};
};

/// Every effective run parameter. Paths are absolute after loading.
struct RunConfig {
  std::filesystem::path corpus;
  std::vector<std::string> problems;  // id filter; empty means all
  std::vector<std::string> models;
  std::vector<prompt::StrategyId> strategies;
  gateway::DecodingParams decoding;
  int max_retries = 3;
  SamplingMode mode = SamplingMode::ParallelPlusRetry;
  std::vector<double> temperature_grid;  // empty: decoding.temperature only
  std::size_t parallelism = 0;           // 0: logical cores
  std::int64_t seed = 0;
  /// Spec strategies go through Lean translation and Lean-informed refinement.
  bool cross_feedback = false;
  bool tool_context = false;
  std::filesystem::path templates;  // empty: default catalog
  std::filesystem::path runs_dir = "runs";
  std::vector<std::size_t> ladder = {1, 5, 16, 64, 128};
  std::size_t intersection_threshold = 3;
  LeanConfig lean;
  PythonConfig python;
  GatewayConfig gateway;

  /// Throws Error(Config) naming the first invalid field.
  void validate() const;
  /// Effective temperatures, one run record each.
  std::vector<double> temperatures() const;
  /// Samples drawn per cell; RetryOnly forces one.
  int samples() const;
};

/// Builds a config from a JSON document. Relative paths resolve against `base`.
/// Unknown keys are errors.
RunConfig config_from_json(std::string_view document, const std::filesystem::path& base);

/// Reads `path`, applies "dotted.key=value" overrides, then parses. Values that parse as
/// JSON are used as such, anything else as a string.
RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Fully resolved config, every field present, stable key order.
std::string config_to_json(const RunConfig& config, int indent = 2);

}  // namespace bridge::pipeline
