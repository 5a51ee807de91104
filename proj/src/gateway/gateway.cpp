#include "bridge/gateway/gateway.hpp"
#include "bridge/metrics/pass_at_k.hpp"
#include "bridge/util/digest.hpp"
#include "bridge/util/error.hpp"
#include "bridge/util/fs.hpp"
#include "bridge/util/text.hpp"

#include <json.hpp>

#include <sstream>

namespace bridge::gateway {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void DecodingParams::validate() const {
  if (!(temperature >= 0.0 && temperature <= 2.0))
    throw Error(ErrorKind::Config, "decoding.temperature must be in [0, 2]");
  if (max_tokens < 1) throw Error(ErrorKind::Config, "decoding.max_tokens must be positive");
  if (n_samples < 1) throw Error(ErrorKind::Config, "decoding.n_samples must be at least 1");
}

std::string prompt_digest(const std::string& model_id, const std::string& prompt, const DecodingParams& params) {
  ordered_json j;
  j["model_id"] = model_id;
  j["prompt"] = prompt;
  j["temperature"] = params.temperature;
  j["max_tokens"] = params.max_tokens;
  j["seed"] = params.seed ? json(*params.seed) : json(nullptr);
  return sha256_hex(j.dump());
}

TokenCount count_tokens(const CompletionRecord& record) {
  TokenCount c;
  c.words = text::word_count(record.text);
  c.tokens = record.reported_tokens ? *record.reported_tokens : metrics::estimate_tokens(c.words);
  return c;
}

std::string record_to_json(const CompletionRecord& r) {
  ordered_json j;
  j["model_id"] = r.model_id;
  j["prompt_digest"] = r.prompt_digest;
  j["sample_index"] = r.sample_index;
  j["text"] = r.text;
  j["reported_tokens"] = r.reported_tokens ? json(*r.reported_tokens) : json(nullptr);
  j["latency_ms"] = r.latency.count();
  return j.dump();
}

CompletionRecord record_from_json(std::string_view text) {
  auto j = json::parse(text);
  CompletionRecord r;
  r.model_id = j.at("model_id").get<std::string>();
  r.prompt_digest = j.at("prompt_digest").get<std::string>();
  r.sample_index = j.at("sample_index").get<int>();
  r.text = j.at("text").get<std::string>();
  if (auto it = j.find("reported_tokens"); it != j.end() && !it->is_null()) r.reported_tokens = it->get<std::size_t>();
  r.latency = std::chrono::milliseconds(j.value("latency_ms", 0));
  return r;
}

// ---- mock ----

MockProvider MockProvider::load(const std::filesystem::path& jsonl) {
  std::string contents;
  try {
    contents = fs::read_file(jsonl);
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, std::string("mock script: ") + e.what());
  }
  return parse(contents, jsonl.string());
}

MockProvider MockProvider::parse(std::string_view jsonl, std::string_view origin) {
  std::vector<Entry> entries;
  auto lines = text::split_lines(jsonl);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    std::string where = std::string(origin) + ":" + std::to_string(i + 1);
    try {
      auto j = json::parse(lines[i]);
      Entry e;
      e.key = j.at("key").get<std::string>();
      if (j.contains("strategy")) e.strategy = j["strategy"].get<std::string>();
      if (j.contains("model")) e.model = j["model"].get<std::string>();
      if (j.contains("round")) e.round = j["round"].get<int>();
      if (j.contains("sample_index")) e.sample_index = j["sample_index"].get<int>();
      if (j.contains("tokens")) e.tokens = j["tokens"].get<std::size_t>();
      if (j.contains("texts")) e.texts = j["texts"].get<std::vector<std::string>>();
      else e.texts.push_back(j.at("text").get<std::string>());
      if (e.texts.empty()) throw Error(ErrorKind::Config, where + ": empty texts list");
      entries.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw Error(ErrorKind::Config, where + ": malformed mock entry: " + ex.what());
    }
  }
  return MockProvider(std::move(entries));
}

CompletionRecord MockProvider::complete(const Request& request) {
  const Entry* best = nullptr;
  int best_score = -1;
  const std::string* best_text = nullptr;
  for (const auto& e : entries_) {
    int score = 0;
    if (e.key == request.context.problem_id || e.key == request.digest) score += 16;
    else if (e.key != "*") continue;
    if (e.strategy) {
      if (*e.strategy != request.context.strategy) continue;
      score += 8;
    }
    if (e.model) {
      if (*e.model != request.model_id) continue;
      score += 4;
    }
    if (e.round) {
      if (*e.round != request.context.round) continue;
      score += 2;
    }
    const std::string* text = nullptr;
    if (e.sample_index) {
      if (*e.sample_index != request.sample_index) continue;
      score += 1;
      text = &e.texts.front();
    } else if (e.texts.size() == 1) {
      text = &e.texts.front();
    } else if (static_cast<std::size_t>(request.sample_index) < e.texts.size()) {
      text = &e.texts[request.sample_index];
      score += 1;
    } else {
      continue;
    }
    if (score > best_score) {
      best = &e;
      best_score = score;
      best_text = text;
    }
  }
  if (!best) {
    throw Error(ErrorKind::Config, "mock script has no completion for problem '" + request.context.problem_id +
                                       "' strategy '" + request.context.strategy + "' model '" + request.model_id +
                                       "' round " + std::to_string(request.context.round) + " sample " +
                                       std::to_string(request.sample_index));
  }
  CompletionRecord r;
  r.model_id = request.model_id;
  r.prompt_digest = request.digest;
  r.sample_index = request.sample_index;
  r.text = *best_text;
  r.reported_tokens = best->tokens;
  return r;
}

// ---- archive ----

std::filesystem::path ReplayArchive::path_for(const std::string& digest, int sample_index) const {
  return root_ / digest.substr(0, 2) / digest / (std::to_string(sample_index) + ".json");
}

std::optional<CompletionRecord> ReplayArchive::lookup(const std::string& digest, int sample_index) const {
  auto path = path_for(digest, sample_index);
  std::lock_guard lock(mu_);
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    return record_from_json(fs::read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, "corrupt archive record " + path.string() + ": " + e.what());
  }
}

void ReplayArchive::store(const CompletionRecord& record) {
  auto path = path_for(record.prompt_digest, record.sample_index);
  std::lock_guard lock(mu_);
  if (std::filesystem::exists(path)) return;
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + path.parent_path().string() + ": " + ec.message());
  fs::write_file_atomic(path, record_to_json(record) + "\n");
}

// ---- gateway ----

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Live: return "live";
    case Mode::Record: return "record";
    case Mode::Replay: return "replay";
    case Mode::Mock: return "mock";
  }
  return "?";
}

Mode parse_mode(std::string_view s) {
  for (Mode m : {Mode::Live, Mode::Record, Mode::Replay, Mode::Mock})
    if (to_string(m) == s) return m;
  throw Error(ErrorKind::Config, "unknown gateway mode '" + std::string(s) + "' (live, record, replay, mock)");
}

Gateway::Gateway(Mode mode, std::shared_ptr<Provider> inner, std::shared_ptr<ReplayArchive> archive,
                 std::shared_ptr<RateLimiter> limiter)
    : mode_(mode), inner_(std::move(inner)), archive_(std::move(archive)), limiter_(std::move(limiter)) {
  if ((mode_ == Mode::Record || mode_ == Mode::Replay) && !archive_)
    throw Error(ErrorKind::Config, std::string(to_string(mode_)) + " mode needs gateway.archive");
  if (mode_ != Mode::Replay && !inner_)
    throw Error(ErrorKind::Config, std::string(to_string(mode_)) + " mode needs a provider");
}

std::size_t Gateway::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

CompletionRecord Gateway::fetch(const Request& request) {
  if (mode_ == Mode::Replay) {
    auto hit = archive_->lookup(request.digest, request.sample_index);
    if (!hit) {
      throw Error(ErrorKind::ReplayMiss, "replay archive has no record for digest " + request.digest + " sample " +
                                             std::to_string(request.sample_index) + " (problem '" +
                                             request.context.problem_id + "', round " +
                                             std::to_string(request.context.round) + ")");
    }
    return *hit;
  }
  if (limiter_ && mode_ != Mode::Mock) limiter_->acquire();
  auto start = std::chrono::steady_clock::now();
  CompletionRecord r = inner_->complete(request);
  if (mode_ != Mode::Mock)
    r.latency = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  r.model_id = request.model_id;
  r.prompt_digest = request.digest;
  r.sample_index = request.sample_index;
  if (mode_ == Mode::Record) archive_->store(r);
  return r;
}

CompletionRecord Gateway::complete_one(const std::string& model_id, const std::string& prompt,
                                       const DecodingParams& params, int sample_index, const RequestContext& context) {
  Request req{model_id, prompt, params, sample_index, context, prompt_digest(model_id, prompt, params)};
  // Mock entries may depend on the context, so it is part of the coalescing key there.
  std::string key = req.digest + "/" + std::to_string(sample_index);
  if (mode_ == Mode::Mock || (mode_ == Mode::Record && inner_ && dynamic_cast<MockProvider*>(inner_.get())))
    key += "/" + context.problem_id + "/" + context.strategy + "/" + std::to_string(context.round);

  std::promise<CompletionRecord> promise;
  std::shared_future<CompletionRecord> future;
  bool owner = false;
  {
    std::lock_guard lock(mu_);
    auto it = inflight_.find(key);
    if (it != inflight_.end()) {
      future = it->second;
    } else {
      future = promise.get_future().share();
      inflight_.emplace(key, future);
      owner = true;
      if (mode_ != Mode::Replay) ++calls_;
    }
  }
  if (owner) {
    try {
      promise.set_value(fetch(req));
    } catch (...) {
      promise.set_exception(std::current_exception());
      std::lock_guard lock(mu_);
      inflight_.erase(key);  // failures are not memoised
    }
  }
  return future.get();
}

std::vector<CompletionRecord> Gateway::complete_n(const std::string& model_id, const std::string& prompt,
                                                  const DecodingParams& params, const RequestContext& context) {
  params.validate();
  std::vector<CompletionRecord> out;
  out.reserve(params.n_samples);
  for (int i = 0; i < params.n_samples; ++i) out.push_back(complete_one(model_id, prompt, params, i, context));
  return out;
}

}  // namespace bridge::gateway
