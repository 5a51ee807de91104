#pragma once

#include "bridge/pipeline/chain.hpp"
#include "bridge/pipeline/config.hpp"
#include "bridge/pipeline/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

namespace bridge::pipeline {

/// "<yyyymmdd-hhmmss>-<first 8 hex of the resolved config digest>" (UTC).
std::string new_run_id(const RunConfig& config);

/// Writes runs/<id>/{manifest.json, chains.jsonl, timings.jsonl, report/, intersections/}.
/// The directory is assembled under a temporary name and renamed into place, so a run
/// directory is either complete or absent. Throws Error(Io) when `id` already exists.
std::filesystem::path write_run(const RunConfig& config, const Services& services, const std::vector<RunRecord>& records,
                                const std::vector<std::chrono::milliseconds>& elapsed, const std::string& id);

/// Chains of a completed run, in file order. Throws Error(Io).
std::vector<AttemptChain> load_chains(const std::filesystem::path& run_dir);

/// The resolved config stored in a run manifest.
RunConfig load_run_config(const std::filesystem::path& run_dir);

/// chains.jsonl text for a set of records (one line per chain, in order).
std::string chains_text(const std::vector<RunRecord>& records);

}  // namespace bridge::pipeline
