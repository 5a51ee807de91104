#pragma once

#include "bridge/gateway/gateway.hpp"

#include <chrono>
#include <functional>
#include <string>
#include <vector>

namespace bridge::gateway {

enum class ApiStyle { OpenAI, Anthropic };

struct ProviderConfig {
  std::string name;      // credentials come from BRIDGE_<NAME>_KEY
  std::string base_url;  // scheme://host[:port]
  ApiStyle api = ApiStyle::OpenAI;
  std::vector<std::string> models;  // model_ids served by this provider
  std::chrono::seconds timeout{300};
};

/// Environment variable holding the provider's key, e.g. BRIDGE_OPENAI_KEY.
std::string credential_variable(const std::string& provider_name);

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds backoff{500};  // doubles after each failed attempt
  std::function<void(std::chrono::milliseconds)> sleep;  // empty means std::this_thread::sleep_for
};

/// Chat-completion client over HTTP(S). Retries transport errors, 429 and 5xx only.
class HttpProvider : public Provider {
 public:
  /// Throws Error(Config) naming the variable when the credential is unset.
  HttpProvider(ProviderConfig config, RetryPolicy retry = {});
  CompletionRecord complete(const Request& request) override;
  const ProviderConfig& config() const { return config_; }

 private:
  ProviderConfig config_;
  RetryPolicy retry_;
  std::string key_;
};

/// Routes each model_id to the provider that lists it.
class ProviderRouter : public Provider {
 public:
  void add(std::vector<std::string> models, std::shared_ptr<Provider> provider);
  CompletionRecord complete(const Request& request) override;

 private:
  std::vector<std::pair<std::vector<std::string>, std::shared_ptr<Provider>>> routes_;
};

}  // namespace bridge::gateway
