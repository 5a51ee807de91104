#pragma once

#include "bridge/pipeline/status.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace bridge::metrics {

/// What the metrics need from one attempt chain.
struct ChainSummary {
  std::string model;
  std::string strategy;     // qualified StrategyId
  double temperature = 0.7;
  std::string problem_id;
  FinalStatus status = FinalStatus::Failure;
  /// Lean artifacts: the final round compiled (no errors outside guards, no sorry).
  /// Equals status == Success for Python chains.
  bool compile_only_success = false;
  std::size_t rounds = 1;
  std::size_t words = 0;   // summed over rounds
  std::size_t tokens = 0;
  std::set<std::string> final_error_classes;
};

struct WordsTokens {
  double words = 0;
  double tokens = 0;
};

struct LengthStats {
  std::optional<WordsTokens> average;
  std::optional<WordsTokens> success_avg;
  std::optional<WordsTokens> failure_avg;  // Failure and ExtractedNoArtifact chains
  std::size_t success_count = 0;
  std::size_t failure_count = 0;
};

LengthStats length_stats(const std::vector<ChainSummary>& chains);

/// Fraction of failed chains whose final round carries each class. Empty when nothing failed.
std::map<std::string, double> error_distribution(const std::vector<ChainSummary>& chains);

}  // namespace bridge::metrics
