#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bridge {

struct ProcessSpec {
  std::vector<std::string> argv;
  std::filesystem::path cwd;
  /// Full environment as KEY=VALUE entries; nullopt inherits the parent environment.
  std::optional<std::vector<std::string>> env;
  std::chrono::milliseconds timeout{std::chrono::seconds(120)};
  /// When set, the deadline restarts every time a complete stdout line arrives.
  bool timeout_resets_on_line = false;
};

struct ProcessResult {
  int exit_code = -1;   // valid when !signaled
  bool signaled = false;
  int term_signal = 0;
  bool timed_out = false;
  bool spawn_failed = false;
  std::string out;
  std::string err;
  std::chrono::milliseconds elapsed{0};

  bool ok() const { return !spawn_failed && !timed_out && !signaled && exit_code == 0; }
};

/// Runs a child in its own process group; on timeout the whole group gets SIGKILL.
/// `on_line` sees each stdout line (without the newline) as it arrives.
ProcessResult run_process(const ProcessSpec& spec,
                          const std::function<void(std::string_view)>& on_line = {});

/// Resolves `name` against PATH; empty when not found. Paths containing '/' are checked directly.
std::string find_executable(std::string_view name);

}  // namespace bridge
