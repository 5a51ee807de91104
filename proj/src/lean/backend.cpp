#include "bridge/lean/backend.hpp"
#include "bridge/util/digest.hpp"
#include "bridge/util/error.hpp"
#include "bridge/util/fs.hpp"
#include "bridge/util/subprocess.hpp"
#include "bridge/util/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>

namespace bridge::lean {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Verified: return "Verified";
    case Status::CompileFailed: return "CompileFailed";
    case Status::Timeout: return "Timeout";
    case Status::ToolMissing: return "ToolMissing";
  }
  return "?";
}

VerificationOutcome interpret(const LeanProject& project, std::string_view output, int exit_code, bool timed_out,
                              std::chrono::milliseconds elapsed, std::chrono::milliseconds timeout) {
  VerificationOutcome o;
  o.elapsed = elapsed;
  o.diagnostics = parse_diagnostics(output);
  o.sorry_count = sorry_count(project.source);
  bool other_errors = false;
  for (auto& d : o.diagnostics) {
    if (d.severity != Severity::Error) continue;
    bool on_guard = std::find(project.guard_lines.begin(), project.guard_lines.end(), d.line) != project.guard_lines.end();
    if (on_guard && text::contains(d.message, "did not evaluate to")) {
      ++o.guard_failures;
      d.message = std::string(kGuardFailurePrefix) + d.message;
    } else {
      other_errors = true;
    }
  }
  o.error_classes = classify(o.diagnostics, project.source);
  if (timed_out || elapsed >= timeout) {
    o.status = Status::Timeout;
    o.elapsed = std::max(elapsed, timeout);
    o.error_classes.insert(ErrorClass::Timeout);
    return o;
  }
  bool any_error = other_errors || o.guard_failures > 0;
  o.compiled = !other_errors && o.sorry_count == 0;
  if (exit_code != 0 && !any_error) {
    // nonzero exit without a parseable error still fails
    o.diagnostics.push_back({std::string(kSourceFileName), 1, 0, Severity::Error,
                             "compiler exited with status " + std::to_string(exit_code)});
    o.error_classes.insert(ErrorClass::Other);
    o.compiled = false;
    any_error = true;
  }
  o.status = exit_code == 0 && !any_error && o.sorry_count == 0 ? Status::Verified : Status::CompileFailed;
  return o;
}

ToolchainBackend::ToolchainBackend(std::string command) {
  if (command.empty()) {
    const char* env = std::getenv("BRIDGE_LEAN_CMD");
    command = env && *env ? env : "lean";
  }
  argv_ = text::split_whitespace(command);
}

bool ToolchainBackend::available() const { return !argv_.empty() && !find_executable(argv_.front()).empty(); }

VerificationOutcome ToolchainBackend::check(const LeanProject& project, std::chrono::milliseconds timeout) const {
  if (!available()) {
    VerificationOutcome o;
    o.status = Status::ToolMissing;
    o.note = "Lean command not found: " + (argv_.empty() ? std::string("(empty)") : argv_.front());
    return o;
  }
  ProcessSpec spec;
  spec.argv = argv_;
  spec.argv.push_back(project.file.filename().string());
  spec.cwd = project.dir;
  spec.timeout = timeout;
  ProcessResult r = run_process(spec);
  if (r.spawn_failed) {
    VerificationOutcome o;
    o.status = Status::ToolMissing;
    o.note = "failed to start Lean: " + r.err;
    return o;
  }
  int code = r.signaled ? 128 + r.term_signal : r.exit_code;
  std::string output = r.out + (r.out.empty() || r.out.back() == '\n' ? "" : "\n") + r.err;
  if (recorder_ && !r.timed_out) recorder_({sha256_hex(project.source), code, output, r.elapsed});
  return interpret(project, output, code, r.timed_out, r.elapsed, timeout);
}

TranscriptBackend::TranscriptBackend(const std::filesystem::path& jsonl) {
  std::string contents;
  try {
    contents = fs::read_file(jsonl);
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, std::string("transcripts: ") + e.what());
  }
  auto lines = text::split_lines(contents);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    std::string where = jsonl.string() + ":" + std::to_string(i + 1);
    try {
      auto j = nlohmann::json::parse(lines[i]);
      Transcript t;
      if (j.contains("source_digest")) t.source_digest = j.at("source_digest").get<std::string>();
      else t.source_digest = sha256_hex(j.at("source").get<std::string>());
      t.exit_code = j.at("exit_code").get<int>();
      t.output = j.at("output").get<std::string>();
      t.elapsed = std::chrono::milliseconds(j.value("elapsed_ms", 0));
      add(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Config, where + ": malformed transcript: " + e.what());
    }
  }
}

void TranscriptBackend::add(Transcript t) {
  std::lock_guard lock(mu_);
  auto key = t.source_digest;
  by_digest_[key] = std::move(t);
}

void TranscriptBackend::add_for_source(std::string_view source, int exit_code, std::string output,
                                       std::chrono::milliseconds elapsed) {
  add({sha256_hex(source), exit_code, std::move(output), elapsed});
}

std::size_t TranscriptBackend::size() const {
  std::lock_guard lock(mu_);
  return by_digest_.size();
}

VerificationOutcome TranscriptBackend::check(const LeanProject& project, std::chrono::milliseconds timeout) const {
  Transcript t;
  {
    std::lock_guard lock(mu_);
    auto it = by_digest_.find(sha256_hex(project.source));
    if (it == by_digest_.end()) {
      VerificationOutcome o;
      o.status = Status::ToolMissing;
      o.note = "no transcript recorded for source digest " + sha256_hex(project.source);
      return o;
    }
    t = it->second;
  }
  return interpret(project, t.output, t.exit_code, false, t.elapsed, timeout);
}

std::string transcript_to_json(const Transcript& t) {
  nlohmann::ordered_json j;
  j["source_digest"] = t.source_digest;
  j["exit_code"] = t.exit_code;
  j["output"] = t.output;
  j["elapsed_ms"] = t.elapsed.count();
  return j.dump();
}

}  // namespace bridge::lean
