#pragma once

#include "bridge/metrics/stats.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace bridge::metrics {

inline const std::vector<std::size_t> kDefaultLadder = {1, 5, 16, 64, 128};

/// Aggregates for one (model, strategy, temperature) cell.
struct MetricRow {
  std::string model;
  std::string strategy;
  double temperature = 0;
  std::size_t chains = 0;
  std::size_t problems = 0;
  std::size_t samples = 0;  // smallest per-problem sample count; caps the ladder
  double mean_rounds = 0;
  /// pass@k averaged over problems, for each ladder k <= samples.
  std::vector<std::pair<std::size_t, double>> pass_at_k;
  std::vector<std::pair<std::size_t, double>> pass_at_k_compile_only;
  LengthStats lengths;
  std::map<std::string, double> errors;
};

/// Rows in order of first appearance of each cell in `chains`.
std::vector<MetricRow> compute_rows(const std::vector<ChainSummary>& chains,
                                    const std::vector<std::size_t>& ladder = kDefaultLadder);

/// Tab-separated table, one line per row, rates to 4 decimals.
std::string render_rows(const std::vector<MetricRow>& rows, const std::vector<std::size_t>& ladder = kDefaultLadder);

/// One JSON record per (cell, k): pass@k plus both sampling budgets
/// (initial samples = k, total completions = k * mean rounds).
std::string render_curves(const std::vector<MetricRow>& rows);

/// Plot-ready series: cell, k, pass@k, budget columns.
std::string render_plot_data(const std::vector<MetricRow>& rows);

/// Writes rows.tsv, curves.jsonl and plot_data.tsv into `dir`. Throws Error(Io).
void emit_report(const std::vector<ChainSummary>& chains, const std::filesystem::path& dir,
                 const std::vector<std::size_t>& ladder = kDefaultLadder);

}  // namespace bridge::metrics
