#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace bridge::gateway {

struct DecodingParams {
  double temperature = 0.7;
  int max_tokens = 4096;
  int n_samples = 1;
  std::optional<std::int64_t> seed;

  /// Throws Error(Config) when a field is out of range.
  void validate() const;
};

struct CompletionRecord {
  std::string model_id;
  std::string prompt_digest;
  int sample_index = 0;
  std::string text;
  std::optional<std::size_t> reported_tokens;
  std::chrono::milliseconds latency{0};
};

/// Where a request comes from; used only to select mock script entries.
struct RequestContext {
  std::string problem_id;
  std::string strategy;  // qualified StrategyId
  int round = 1;
};

/// sha256 over (model_id, prompt, temperature, max_tokens, seed). n_samples is excluded.
std::string prompt_digest(const std::string& model_id, const std::string& prompt, const DecodingParams& params);

struct TokenCount {
  std::size_t words = 0;
  std::size_t tokens = 0;
};

/// Words are whitespace-separated tokens; tokens are the provider's count when present,
/// otherwise the words-based estimate.
TokenCount count_tokens(const CompletionRecord& record);

struct Request {
  std::string model_id;
  std::string prompt;
  DecodingParams params;
  int sample_index = 0;
  RequestContext context;
  std::string digest;
};

/// Produces one completion per request. Implementations must be safe for concurrent use.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual CompletionRecord complete(const Request& request) = 0;
};

/// Deterministic scripted completions from a JSONL manifest. Each record has a "key" (problem id,
/// prompt digest, or "*") and either "text" or a per-sample "texts" list, plus optional
/// "strategy", "model", "round", "sample_index" and "tokens" filters. The most specific match wins.
class MockProvider : public Provider {
 public:
  struct Entry {
    std::string key;
    std::optional<std::string> strategy;
    std::optional<std::string> model;
    std::optional<int> round;
    std::optional<int> sample_index;
    std::vector<std::string> texts;  // one element for "text"
    std::optional<std::size_t> tokens;
  };

  MockProvider() = default;
  explicit MockProvider(std::vector<Entry> entries) : entries_(std::move(entries)) {}
  /// Throws Error(Config) on unreadable or malformed scripts.
  static MockProvider load(const std::filesystem::path& jsonl);
  static MockProvider parse(std::string_view jsonl, std::string_view origin = "<memory>");

  void add(Entry e) { entries_.push_back(std::move(e)); }
  std::size_t size() const { return entries_.size(); }

  /// Throws Error(Config) when no entry matches.
  CompletionRecord complete(const Request& request) override;

 private:
  std::vector<Entry> entries_;
};

/// Content-addressed store of completion records: <root>/<d[0:2]>/<digest>/<sample>.json.
class ReplayArchive {
 public:
  explicit ReplayArchive(std::filesystem::path root) : root_(std::move(root)) {}

  std::optional<CompletionRecord> lookup(const std::string& digest, int sample_index) const;
  /// Persists atomically; an existing record for the same (digest, sample) is kept.
  void store(const CompletionRecord& record);
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path path_for(const std::string& digest, int sample_index) const;
  std::filesystem::path root_;
  mutable std::mutex mu_;
};

std::string record_to_json(const CompletionRecord& r);
CompletionRecord record_from_json(std::string_view text);

/// Injectable time source.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::chrono::steady_clock::time_point now() const = 0;
  virtual void sleep_until(std::chrono::steady_clock::time_point t) = 0;
};

std::shared_ptr<Clock> system_clock();

/// Grants at most `limit` request slots in any window of `interval`.
/// Slots are reserved under a lock and waited for outside it.
class RateLimiter {
 public:
  RateLimiter(std::size_t limit, std::chrono::milliseconds interval, std::shared_ptr<Clock> clock = system_clock());
  /// Blocks until the caller may issue a request; returns the granted slot time.
  std::chrono::steady_clock::time_point acquire();

 private:
  std::size_t limit_;
  std::chrono::milliseconds interval_;
  std::shared_ptr<Clock> clock_;
  std::mutex mu_;
  std::vector<std::chrono::steady_clock::time_point> slots_;  // last `limit_` grants, ascending
};

enum class Mode { Live, Record, Replay, Mock };
std::string_view to_string(Mode m);
Mode parse_mode(std::string_view s);  // throws Error(Config)

/// Uniform model access: one mode per gateway. Concurrent identical requests coalesce into
/// one underlying call, and repeated identical requests reuse the first result.
class Gateway {
 public:
  /// `inner` serves Live, Mock and Record (as the source being recorded); `archive` serves
  /// Record and Replay.
  Gateway(Mode mode, std::shared_ptr<Provider> inner, std::shared_ptr<ReplayArchive> archive,
          std::shared_ptr<RateLimiter> limiter = nullptr);

  Mode mode() const { return mode_; }

  /// Exactly params.n_samples records, sample_index 0..n-1, each from a separate request.
  /// Throws Error(ReplayMiss) in replay mode when the archive lacks a record.
  std::vector<CompletionRecord> complete_n(const std::string& model_id, const std::string& prompt,
                                           const DecodingParams& params, const RequestContext& context = {});

  CompletionRecord complete_one(const std::string& model_id, const std::string& prompt, const DecodingParams& params,
                                int sample_index, const RequestContext& context = {});

  /// Underlying provider calls made so far (coalesced requests count once).
  std::size_t calls() const;

 private:
  CompletionRecord fetch(const Request& request);

  Mode mode_;
  std::shared_ptr<Provider> inner_;
  std::shared_ptr<ReplayArchive> archive_;
  std::shared_ptr<RateLimiter> limiter_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_future<CompletionRecord>> inflight_;
  std::size_t calls_ = 0;
};

}  // namespace bridge::gateway
