#include "bridge/pipeline/config.hpp"
#include "bridge/util/error.hpp"
#include "bridge/util/fs.hpp"
#include "bridge/util/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

namespace bridge::pipeline {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;
namespace stdfs = std::filesystem;

std::string_view to_string(SamplingMode m) {
  switch (m) {
    case SamplingMode::ParallelOnly: return "ParallelOnly";
    case SamplingMode::RetryOnly: return "RetryOnly";
    case SamplingMode::ParallelPlusRetry: return "ParallelPlusRetry";
  }
  return "?";
}

SamplingMode parse_sampling_mode(std::string_view s) {
  for (auto m : {SamplingMode::ParallelOnly, SamplingMode::RetryOnly, SamplingMode::ParallelPlusRetry})
    if (to_string(m) == s) return m;
  throw Error(ErrorKind::Config, "unknown mode '" + std::string(s) + "' (ParallelOnly, RetryOnly, ParallelPlusRetry)");
}

std::string_view to_string(LeanSuccess s) {
  return s == LeanSuccess::CompileOnly ? "CompileOnly" : "CompileAndGuards";
}

LeanSuccess parse_lean_success(std::string_view s) {
  if (s == "CompileOnly") return LeanSuccess::CompileOnly;
  if (s == "CompileAndGuards") return LeanSuccess::CompileAndGuards;
  throw Error(ErrorKind::Config, "unknown lean.success '" + std::string(s) + "' (CompileOnly, CompileAndGuards)");
}

namespace {

std::string_view to_string(LeanBackendKind k) { return k == LeanBackendKind::Toolchain ? "toolchain" : "transcript"; }

LeanBackendKind parse_backend(std::string_view s) {
  if (s == "toolchain") return LeanBackendKind::Toolchain;
  if (s == "transcript") return LeanBackendKind::Transcript;
  throw Error(ErrorKind::Config, "unknown lean.backend '" + std::string(s) + "' (toolchain, transcript)");
}

std::string_view api_name(gateway::ApiStyle a) { return a == gateway::ApiStyle::OpenAI ? "openai" : "anthropic"; }

gateway::ApiStyle parse_api(std::string_view s) {
  if (s == "openai") return gateway::ApiStyle::OpenAI;
  if (s == "anthropic") return gateway::ApiStyle::Anthropic;
  throw Error(ErrorKind::Config, "unknown provider api '" + std::string(s) + "' (openai, anthropic)");
}

/// Reads typed fields out of one JSON object, rejecting keys nobody asked for.
class Reader {
 public:
  Reader(const json& obj, std::string prefix, stdfs::path base)
      : obj_(obj), prefix_(std::move(prefix)), base_(std::move(base)) {
    if (!obj_.is_object()) fail(prefix_.empty() ? "config" : prefix_.substr(0, prefix_.size() - 1), "must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end() || it->is_null()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      fail(key, "has the wrong type");
    }
  }

  void path(const char* key, stdfs::path& out) {
    std::string s = out.string();
    get(key, s);
    out = resolve(s);
  }

  const json* sub(const char* key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() || it->is_null() ? nullptr : &*it;
  }

  void finish() const {
    for (const auto& [k, v] : obj_.items())
      if (!seen_.count(k)) fail(k, "is not a recognised key");
  }

  [[noreturn]] void fail(std::string_view key, std::string_view what) const {
    throw Error(ErrorKind::Config, prefix_ + std::string(key) + " " + std::string(what));
  }

  stdfs::path resolve(const std::string& s) const {
    if (s.empty()) return {};
    stdfs::path p(s);
    return (p.is_absolute() ? p : base_ / p).lexically_normal();
  }

  const std::string& prefix() const { return prefix_; }
  const stdfs::path& base() const { return base_; }

 private:
  const json& obj_;
  std::string prefix_;
  stdfs::path base_;
  std::set<std::string> seen_;
};

std::vector<prompt::StrategyId> parse_strategies(const std::vector<std::string>& names) {
  std::vector<prompt::StrategyId> out;
  auto push = [&](prompt::StrategyId s) {
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  };
  for (const auto& n : names) {
    try {
      if (n.size() > 2 && n.substr(n.size() - 2) == "/*") {
        for (auto s : prompt::list_strategies(prompt::parse_domain(n.substr(0, n.size() - 2)))) push(s);
      } else {
        push(prompt::StrategyId::parse(n));
      }
    } catch (const Error& e) {
      throw Error(ErrorKind::Config, "strategies: " + std::string(e.what()));
    }
  }
  return out;
}

void read_lean(Reader& r, LeanConfig& lean) {
  std::string backend(to_string(lean.backend));
  std::string success(to_string(lean.success));
  long long timeout_ms = lean.timeout.count();
  r.get("backend", backend);
  r.get("command", lean.command);
  r.path("transcripts", lean.transcripts);
  r.path("record_transcripts", lean.record_transcripts);
  r.get("timeout_ms", timeout_ms);
  r.get("mathlib", lean.mathlib);
  r.get("include_tests", lean.include_tests);
  r.get("success", success);
  r.finish();
  lean.backend = parse_backend(backend);
  lean.success = parse_lean_success(success);
  lean.timeout = std::chrono::milliseconds(timeout_ms);
}

void read_python(Reader& r, PythonConfig& py) {
  long long timeout_ms = py.timeout.count();
  r.get("interpreter", py.interpreter);
  r.get("timeout_ms", timeout_ms);
  r.get("contract_trials", py.contract_trials);
  r.get("vacuity", py.vacuity);
  r.get("mutants", py.mutants);
  r.finish();
  py.timeout = std::chrono::milliseconds(timeout_ms);
}

void read_gateway(Reader& r, GatewayConfig& gw) {
  std::string mode(gateway::to_string(gw.mode));
  long long interval_ms = gw.rate_interval.count();
  r.get("mode", mode);
  r.path("mock_script", gw.mock_script);
  r.path("archive", gw.archive);
  r.get("rate_limit", gw.rate_limit);
  r.get("rate_interval_ms", interval_ms);
  if (const json* providers = r.sub("providers")) {
    if (!providers->is_array()) r.fail("providers", "must be a list");
    for (std::size_t i = 0; i < providers->size(); ++i) {
      Reader pr((*providers)[i], r.prefix() + "providers[" + std::to_string(i) + "].", r.base());
      gateway::ProviderConfig pc;
      std::string api(api_name(pc.api));
      long long timeout_s = pc.timeout.count();
      pr.get("name", pc.name);
      pr.get("base_url", pc.base_url);
      pr.get("api", api);
      pr.get("models", pc.models);
      pr.get("timeout_s", timeout_s);
      pr.finish();
      pc.api = parse_api(api);
      pc.timeout = std::chrono::seconds(timeout_s);
      gw.providers.push_back(std::move(pc));
    }
  }
  r.finish();
  gw.mode = gateway::parse_mode(mode);
  gw.rate_interval = std::chrono::milliseconds(interval_ms);
}

void apply_override(json& doc, std::string_view assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw Error(ErrorKind::Config, "override '" + std::string(assignment) + "' is not key=value");
  std::string key(text::trim(assignment.substr(0, eq)));
  std::string raw(assignment.substr(eq + 1));
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json* node = &doc;
  std::size_t pos = 0;
  while (true) {
    auto dot = key.find('.', pos);
    std::string part = key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (part.empty()) throw Error(ErrorKind::Config, "override key '" + key + "' has an empty segment");
    if (!node->is_object()) throw Error(ErrorKind::Config, "override key '" + key + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    pos = dot + 1;
  }
}

}  // namespace

void RunConfig::validate() const {
  auto bad = [](const std::string& m) { throw Error(ErrorKind::Config, m); };
  if (corpus.empty()) bad("corpus is required");
  if (models.empty()) bad("models must list at least one model");
  if (strategies.empty()) bad("strategies must list at least one strategy");
  decoding.validate();
  if (max_retries < 0) bad("max_retries must be >= 0");
  for (double t : temperature_grid)
    if (!(t >= 0.0 && t <= 2.0)) bad("temperature_grid values must be in [0, 2]");
  if (ladder.empty()) bad("ladder must not be empty");
  for (auto k : ladder)
    if (k == 0) bad("ladder values must be positive");
  if (intersection_threshold == 0) bad("intersection_threshold must be >= 1");
  if (lean.timeout.count() <= 0) bad("lean.timeout_ms must be positive");
  if (python.timeout.count() <= 0) bad("python.timeout_ms must be positive");
  if (python.vacuity && python.mutants == 0) bad("python.mutants must be >= 1 when vacuity is enabled");
  if (lean.backend == LeanBackendKind::Transcript && lean.transcripts.empty())
    bad("lean.transcripts is required for the transcript backend");
  using gateway::Mode;
  if (gateway.mode == Mode::Mock && gateway.mock_script.empty()) bad("gateway.mock_script is required in mock mode");
  if ((gateway.mode == Mode::Record || gateway.mode == Mode::Replay) && gateway.archive.empty())
    bad("gateway.archive is required in record and replay modes");
  if (gateway.mode == Mode::Live && gateway.providers.empty()) bad("gateway.providers is required in live mode");
  if (gateway.mode == Mode::Record && gateway.mock_script.empty() && gateway.providers.empty())
    bad("record mode needs gateway.providers or gateway.mock_script");
}

std::vector<double> RunConfig::temperatures() const {
  if (temperature_grid.empty()) return {decoding.temperature};
  return temperature_grid;
}

int RunConfig::samples() const { return mode == SamplingMode::RetryOnly ? 1 : decoding.n_samples; }

RunConfig config_from_json(std::string_view document, const std::filesystem::path& base) {
  json doc = json::parse(document, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorKind::Config, "config is not valid JSON");

  RunConfig c;
  Reader r(doc, "", base);
  r.path("corpus", c.corpus);
  r.get("problems", c.problems);
  r.get("models", c.models);
  std::vector<std::string> strategies;
  r.get("strategies", strategies);
  c.strategies = parse_strategies(strategies);
  if (const json* d = r.sub("decoding")) {
    Reader dr(*d, "decoding.", base);
    dr.get("temperature", c.decoding.temperature);
    dr.get("max_tokens", c.decoding.max_tokens);
    dr.get("n_samples", c.decoding.n_samples);
    std::int64_t seed = 0;
    if (const json* s = dr.sub("seed")) {
      if (!s->is_number_integer()) dr.fail("seed", "has the wrong type");
      seed = s->get<std::int64_t>();
      c.decoding.seed = seed;
    }
    dr.finish();
  }
  r.get("max_retries", c.max_retries);
  std::string mode(to_string(c.mode));
  r.get("mode", mode);
  c.mode = parse_sampling_mode(mode);
  r.get("temperature_grid", c.temperature_grid);
  r.get("parallelism", c.parallelism);
  r.get("seed", c.seed);
  r.get("cross_feedback", c.cross_feedback);
  r.get("tool_context", c.tool_context);
  r.path("templates", c.templates);
  r.path("runs_dir", c.runs_dir);
  r.get("ladder", c.ladder);
  r.get("intersection_threshold", c.intersection_threshold);
  if (const json* l = r.sub("lean")) {
    Reader lr(*l, "lean.", base);
    read_lean(lr, c.lean);
  }
  if (const json* p = r.sub("python")) {
    Reader pr(*p, "python.", base);
    read_python(pr, c.python);
  }
  if (const json* g = r.sub("gateway")) {
    Reader gr(*g, "gateway.", base);
    read_gateway(gr, c.gateway);
  }
  r.finish();
  if (c.runs_dir.is_relative()) c.runs_dir = (base / c.runs_dir).lexically_normal();
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::string text;
  try {
    text = fs::read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, "cannot read config " + path.string() + ": " + e.what());
  }
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorKind::Config, path.string() + " is not valid JSON");
  for (const auto& o : overrides) apply_override(doc, o);
  auto base = stdfs::absolute(path).parent_path();
  return config_from_json(doc.dump(), base);
}

std::string config_to_json(const RunConfig& c, int indent) {
  ordered_json j;
  j["corpus"] = c.corpus.string();
  j["problems"] = c.problems;
  j["models"] = c.models;
  ordered_json strategies = ordered_json::array();
  for (auto s : c.strategies) strategies.push_back(s.qualified());
  j["strategies"] = strategies;
  ordered_json d;
  d["temperature"] = c.decoding.temperature;
  d["max_tokens"] = c.decoding.max_tokens;
  d["n_samples"] = c.decoding.n_samples;
  d["seed"] = c.decoding.seed ? ordered_json(*c.decoding.seed) : ordered_json(nullptr);
  j["decoding"] = d;
  j["max_retries"] = c.max_retries;
  j["mode"] = to_string(c.mode);
  j["temperature_grid"] = c.temperature_grid;
  j["parallelism"] = c.parallelism;
  j["seed"] = c.seed;
  j["cross_feedback"] = c.cross_feedback;
  j["tool_context"] = c.tool_context;
  j["templates"] = c.templates.string();
  j["runs_dir"] = c.runs_dir.string();
  j["ladder"] = c.ladder;
  j["intersection_threshold"] = c.intersection_threshold;
  ordered_json l;
  l["backend"] = to_string(c.lean.backend);
  l["command"] = c.lean.command;
  l["transcripts"] = c.lean.transcripts.string();
  l["record_transcripts"] = c.lean.record_transcripts.string();
  l["timeout_ms"] = c.lean.timeout.count();
  l["mathlib"] = c.lean.mathlib;
  l["include_tests"] = c.lean.include_tests;
  l["success"] = to_string(c.lean.success);
  j["lean"] = l;
  ordered_json p;
  p["interpreter"] = c.python.interpreter;
  p["timeout_ms"] = c.python.timeout.count();
  p["contract_trials"] = c.python.contract_trials;
  p["vacuity"] = c.python.vacuity;
  p["mutants"] = c.python.mutants;
  j["python"] = p;
  ordered_json g;
  g["mode"] = gateway::to_string(c.gateway.mode);
  g["mock_script"] = c.gateway.mock_script.string();
  g["archive"] = c.gateway.archive.string();
  ordered_json providers = ordered_json::array();
  for (const auto& pc : c.gateway.providers) {
    ordered_json pj;
    pj["name"] = pc.name;
    pj["base_url"] = pc.base_url;
    pj["api"] = api_name(pc.api);
    pj["models"] = pc.models;
    pj["timeout_s"] = pc.timeout.count();
    providers.push_back(pj);
  }
  g["providers"] = providers;
  g["rate_limit"] = c.gateway.rate_limit;
  g["rate_interval_ms"] = c.gateway.rate_interval.count();
  j["gateway"] = g;
  return j.dump(indent) + "\n";
}

}  // namespace bridge::pipeline
