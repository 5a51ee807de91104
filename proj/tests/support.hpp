#pragma once

#include "bridge/corpus/corpus.hpp"
#include "bridge/util/fs.hpp"

#include <cstdlib>
#include <filesystem>
#include <string>

namespace testsupport {

inline std::filesystem::path source_dir() { return BRIDGE_TEST_SOURCE_DIR; }
inline std::filesystem::path fixtures() { return source_dir() / "fixtures"; }

inline const bridge::corpus::ProblemSet& corpus() {
  static const auto set = bridge::corpus::load_manifest(fixtures() / "corpus.jsonl");
  return set;
}

inline const bridge::corpus::Problem& problem(std::string_view id) {
  const auto* p = corpus().find(id);
  if (!p) throw std::runtime_error("fixture problem missing: " + std::string(id));
  return *p;
}

inline std::string read(const std::filesystem::path& p) { return bridge::fs::read_file(p); }

/// Fresh directory removed at scope exit.
inline bridge::fs::ScopedDir temp_dir(std::string_view prefix = "bridge-test-") {
  return bridge::fs::ScopedDir(bridge::fs::make_unique_dir(std::filesystem::temp_directory_path(), prefix));
}

inline bool python_available() {
  const char* env = std::getenv("BRIDGE_PYTHON_CMD");
  std::string cmd = env && *env ? env : "python3";
  return std::system(("command -v " + cmd + " >/dev/null 2>&1").c_str()) == 0;
}

}  // namespace testsupport
