#pragma once

#include "bridge/corpus/corpus.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace bridge::lean {

/// Produces a fresh directory per call. Injectable so tests can observe isolation.
using DirectoryFactory = std::function<std::filesystem::path()>;

/// Unique directories under the system temp dir, removed when the project is destroyed.
DirectoryFactory temp_directory_factory();

struct ScaffoldOptions {
  bool include_tests = true;
  bool mathlib = false;
  DirectoryFactory directories;  // empty means temp_directory_factory()
};

inline constexpr std::string_view kSourceFileName = "Candidate.lean";

/// One isolated, checkable source file.
struct LeanProject {
  std::filesystem::path dir;
  std::filesystem::path file;
  std::string source;
  std::vector<int> guard_lines;  // 1-based
  std::shared_ptr<void> owner;   // keeps a temporary directory alive
};

struct ScaffoldText {
  std::string source;
  std::vector<int> guard_lines;
};

/// File text: header imports, the artifact body with its own imports hoisted, then one
/// `#guard` per test when requested. Throws Error(Usage) on an empty artifact or a test
/// literal that cannot be encoded (the message names the test).
ScaffoldText scaffold_source(std::string_view artifact, const corpus::Problem& problem, const ScaffoldOptions& options);

/// scaffold_source written to a fresh directory from the factory.
LeanProject scaffold(std::string_view artifact, const corpus::Problem& problem, const ScaffoldOptions& options = {});

}  // namespace bridge::lean
