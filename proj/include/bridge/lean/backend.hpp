#pragma once

#include "bridge/lean/diagnostics.hpp"
#include "bridge/lean/scaffold.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

namespace bridge::lean {

enum class Status { Verified, CompileFailed, Timeout, ToolMissing };

std::string_view to_string(Status s);

inline constexpr std::chrono::milliseconds kDefaultTimeout{std::chrono::seconds(120)};

/// Prefix given to diagnostics produced by failing `#guard` lines.
inline constexpr std::string_view kGuardFailurePrefix = "guard failed: ";

struct VerificationOutcome {
  Status status = Status::ToolMissing;
  std::vector<Diagnostic> diagnostics;
  std::set<ErrorClass> error_classes;
  int sorry_count = 0;
  int guard_failures = 0;
  /// Everything except the guards elaborated: no other errors and no sorry.
  bool compiled = false;
  std::chrono::milliseconds elapsed{0};
  std::string note;  // why the tool was missing, etc.
};

/// Builds an outcome from raw compiler output. Errors reported on guard lines whose text
/// shows the guard evaluated to false count as guard failures (class Other, prefixed message).
VerificationOutcome interpret(const LeanProject& project, std::string_view output, int exit_code, bool timed_out,
                              std::chrono::milliseconds elapsed, std::chrono::milliseconds timeout);

class LeanBackend {
 public:
  virtual ~LeanBackend() = default;
  virtual std::string name() const = 0;
  /// Safe to call concurrently on distinct projects.
  virtual VerificationOutcome check(const LeanProject& project, std::chrono::milliseconds timeout) const = 0;
};

/// Captured compiler runs keyed by the digest of the checked source.
struct Transcript {
  std::string source_digest;
  int exit_code = 0;
  std::string output;
  std::chrono::milliseconds elapsed{0};
};

/// Runs the real compiler: `$BRIDGE_LEAN_CMD <file>` (default `lean`) in the project directory.
class ToolchainBackend : public LeanBackend {
 public:
  explicit ToolchainBackend(std::string command = {});
  std::string name() const override { return "toolchain"; }
  VerificationOutcome check(const LeanProject& project, std::chrono::milliseconds timeout) const override;
  /// True when the command's executable resolves on PATH.
  bool available() const;
  const std::vector<std::string>& command() const { return argv_; }
  /// Called with the raw output of every completed (not timed out) run.
  void set_recorder(std::function<void(const Transcript&)> recorder) { recorder_ = std::move(recorder); }

 private:
  std::vector<std::string> argv_;
  std::function<void(const Transcript&)> recorder_;
};

/// Replays recorded compiler output. A source without a transcript yields ToolMissing.
class TranscriptBackend : public LeanBackend {
 public:
  TranscriptBackend() = default;
  /// Loads JSONL records {"source_digest"|"source", "exit_code", "output", "elapsed_ms"}.
  /// Throws Error(Config) on unreadable or malformed files.
  explicit TranscriptBackend(const std::filesystem::path& jsonl);

  void add(Transcript t);
  void add_for_source(std::string_view source, int exit_code, std::string output,
                      std::chrono::milliseconds elapsed = std::chrono::milliseconds(100));
  std::size_t size() const;

  std::string name() const override { return "transcript"; }
  VerificationOutcome check(const LeanProject& project, std::chrono::milliseconds timeout) const override;

 private:
  mutable std::mutex mu_;
  std::map<std::string, Transcript> by_digest_;
};

/// Transcript record text for one run; used by the fixture recorder.
std::string transcript_to_json(const Transcript& t);

}  // namespace bridge::lean
