#include "bridge/gateway/providers.hpp"
#include "bridge/util/error.hpp"
#include "bridge/util/text.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <thread>

namespace bridge::gateway {

using nlohmann::json;

std::string credential_variable(const std::string& provider_name) {
  std::string upper;
  for (char c : provider_name)
    upper += std::isalnum(static_cast<unsigned char>(c)) ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : '_';
  return "BRIDGE_" + upper + "_KEY";
}

HttpProvider::HttpProvider(ProviderConfig config, RetryPolicy retry) : config_(std::move(config)), retry_(std::move(retry)) {
  std::string var = credential_variable(config_.name);
  const char* key = std::getenv(var.c_str());
  if (!key || !*key) throw Error(ErrorKind::Config, "missing credentials for provider '" + config_.name + "': set " + var);
  key_ = key;
  if (retry_.max_attempts < 1) retry_.max_attempts = 1;
  if (!retry_.sleep) retry_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

CompletionRecord HttpProvider::complete(const Request& request) {
  json body;
  std::string path;
  httplib::Headers headers;
  body["model"] = request.model_id;
  body["max_tokens"] = request.params.max_tokens;
  body["temperature"] = request.params.temperature;
  body["messages"] = json::array({{{"role", "user"}, {"content", request.prompt}}});
  if (config_.api == ApiStyle::OpenAI) {
    path = "/v1/chat/completions";
    headers.emplace("Authorization", "Bearer " + key_);
    if (request.params.seed) body["seed"] = *request.params.seed + request.sample_index;
  } else {
    path = "/v1/messages";
    headers.emplace("x-api-key", key_);
    headers.emplace("anthropic-version", "2023-06-01");
  }
  std::string payload = body.dump();

  std::string last_error;
  auto delay = retry_.backoff;
  for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
    httplib::Client client(config_.base_url);
    client.set_connection_timeout(std::chrono::seconds(30));
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(std::chrono::seconds(60));
    auto res = client.Post(path, headers, payload, "application/json");
    bool retryable = false;
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      retryable = true;
    } else if (res->status == 200) {
      try {
        auto j = json::parse(res->body);
        CompletionRecord r;
        if (config_.api == ApiStyle::OpenAI) {
          r.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
          if (j.contains("usage") && j["usage"].contains("completion_tokens"))
            r.reported_tokens = j["usage"]["completion_tokens"].get<std::size_t>();
        } else {
          for (const auto& part : j.at("content"))
            if (part.value("type", "") == "text") r.text += part.value("text", "");
          if (j.contains("usage") && j["usage"].contains("output_tokens"))
            r.reported_tokens = j["usage"]["output_tokens"].get<std::size_t>();
        }
        return r;
      } catch (const json::exception& e) {
        throw Error(ErrorKind::Provider, config_.name + ": unreadable response: " + e.what());
      }
    } else {
      last_error = "HTTP " + std::to_string(res->status) + ": " + std::string(text::trim(res->body)).substr(0, 200);
      retryable = res->status == 429 || res->status >= 500;
    }
    if (!retryable) break;
    if (attempt < retry_.max_attempts) {
      retry_.sleep(delay);
      delay *= 2;
    }
  }
  throw Error(ErrorKind::Provider, config_.name + " request failed: " + last_error);
}

void ProviderRouter::add(std::vector<std::string> models, std::shared_ptr<Provider> provider) {
  routes_.emplace_back(std::move(models), std::move(provider));
}

CompletionRecord ProviderRouter::complete(const Request& request) {
  for (const auto& [models, provider] : routes_) {
    if (std::find(models.begin(), models.end(), request.model_id) != models.end()) return provider->complete(request);
  }
  throw Error(ErrorKind::Config, "no provider configured for model '" + request.model_id + "'");
}

}  // namespace bridge::gateway
