#pragma once

#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "proeval/errors.hpp"
#include "proeval/json_extract.hpp"
#include "proeval/util.hpp"

namespace proeval {

enum class EndpointKind { remote, scripted };

enum class Role { system, user, assistant };

inline std::string_view to_string(Role r) {
  switch (r) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "user";
}

struct ChatMessage {
  Role role = Role::user;
  std::string content;
};

inline Role role_from_string(std::string_view name) {
  if (name == "system") return Role::system;
  if (name == "user") return Role::user;
  if (name == "assistant") return Role::assistant;
  throw Error("unknown chat role '" + std::string(name) + "'");
}

inline void to_json(nlohmann::json& j, const ChatMessage& m) {
  j = {{"role", std::string(to_string(m.role))}, {"content", m.content}};
}
inline void from_json(const nlohmann::json& j, ChatMessage& m) {
  m.role = role_from_string(j.at("role").get<std::string>());
  j.at("content").get_to(m.content);
}

inline ChatMessage system_message(std::string content) {
  return {Role::system, std::move(content)};
}
inline ChatMessage user_message(std::string content) { return {Role::user, std::move(content)}; }
inline ChatMessage assistant_message(std::string content) {
  return {Role::assistant, std::move(content)};
}

/// One reachable model: either a remote chat-completions endpoint or a
/// scripted stand-in registered with the gateway under the same id.
struct ModelEndpoint {
  std::string id;
  EndpointKind kind = EndpointKind::scripted;
  std::string base_url;      // remote only, e.g. https://api.example.com/v1
  std::string model_name;
  std::string api_key_ref;   // environment variable holding the credential
  double default_temperature = 0.0;
  int max_output_tokens = 2048;
  int max_in_flight = 4;
  int retry_limit = 3;
  // Transport policy. Backoff doubles per retry with +-20% jitter.
  int initial_backoff_ms = 500;
  int connect_timeout_ms = 10000;
  int read_timeout_ms = 120000;
};

struct CompletionResult {
  std::string content;
  std::string endpoint_id;
  int attempt_count = 1;
  int64_t latency_ms = 0;
};

enum class ExhaustionPolicy { error, repeat_last };

struct ScriptEntry {
  // When set, the entry only matches requests whose last message contains
  // this substring. Matcher-less entries match anything.
  std::optional<std::string> matcher;
  std::string response;
};

/// Deterministic canned behavior for a scripted endpoint. Entries are
/// consumed in order: each request takes the first unconsumed entry whose
/// matcher accepts the request's last message.
struct ScriptedBehavior {
  std::vector<ScriptEntry> entries;
  ExhaustionPolicy on_exhausted = ExhaustionPolicy::error;
};

inline ScriptedBehavior script_of(std::vector<std::string> responses,
                                  ExhaustionPolicy policy = ExhaustionPolicy::error) {
  ScriptedBehavior b;
  b.on_exhausted = policy;
  for (auto& r : responses) b.entries.push_back({std::nullopt, std::move(r)});
  return b;
}

inline void to_json(nlohmann::json& j, const ModelEndpoint& e) {
  j = {{"id", e.id},
       {"kind", e.kind == EndpointKind::remote ? "remote" : "scripted"},
       {"base_url", e.base_url},
       {"model_name", e.model_name},
       {"api_key_ref", e.api_key_ref},
       {"default_temperature", e.default_temperature},
       {"max_output_tokens", e.max_output_tokens},
       {"max_in_flight", e.max_in_flight},
       {"retry_limit", e.retry_limit},
       {"initial_backoff_ms", e.initial_backoff_ms},
       {"connect_timeout_ms", e.connect_timeout_ms},
       {"read_timeout_ms", e.read_timeout_ms}};
}
inline void from_json(const nlohmann::json& j, ModelEndpoint& e) {
  e.id = j.at("id").get<std::string>();
  std::string kind = j.value("kind", "scripted");
  if (kind == "remote")
    e.kind = EndpointKind::remote;
  else if (kind == "scripted")
    e.kind = EndpointKind::scripted;
  else
    throw ConfigError("unknown endpoint kind '" + kind + "'");
  e.base_url = j.value("base_url", "");
  e.model_name = j.value("model_name", "");
  e.api_key_ref = j.value("api_key_ref", "");
  e.default_temperature = j.value("default_temperature", 0.0);
  e.max_output_tokens = j.value("max_output_tokens", 2048);
  e.max_in_flight = j.value("max_in_flight", 4);
  e.retry_limit = j.value("retry_limit", 3);
  e.initial_backoff_ms = j.value("initial_backoff_ms", 500);
  e.connect_timeout_ms = j.value("connect_timeout_ms", 10000);
  e.read_timeout_ms = j.value("read_timeout_ms", 120000);
  if (e.kind == EndpointKind::remote && e.base_url.empty())
    throw ConfigError("remote endpoint '" + e.id + "' needs a base_url");
}

inline void to_json(nlohmann::json& j, const ScriptEntry& e) {
  j = nlohmann::json{{"response", e.response}};
  if (e.matcher) j["matcher"] = *e.matcher;
}
inline void from_json(const nlohmann::json& j, ScriptEntry& e) {
  j.at("response").get_to(e.response);
  if (j.contains("matcher") && !j.at("matcher").is_null())
    e.matcher = j.at("matcher").get<std::string>();
  else
    e.matcher.reset();
}

inline void to_json(nlohmann::json& j, const ScriptedBehavior& b) {
  j = {{"entries", b.entries},
       {"on_exhausted", b.on_exhausted == ExhaustionPolicy::repeat_last ? "repeat_last" : "error"}};
}
inline void from_json(const nlohmann::json& j, ScriptedBehavior& b) {
  j.at("entries").get_to(b.entries);
  std::string policy = j.value("on_exhausted", "error");
  if (policy == "repeat_last")
    b.on_exhausted = ExhaustionPolicy::repeat_last;
  else if (policy == "error")
    b.on_exhausted = ExhaustionPolicy::error;
  else
    throw ConfigError("unknown exhaustion policy '" + policy + "'");
}

struct CompleteOptions {
  std::optional<double> temperature;
  // Folded into the cache key. Callers use it to keep re-asks and
  // independent samples of an identical prompt from colliding in the cache.
  std::string cache_salt;
  bool bypass_cache = false;
};

/// Shared access point for all model traffic: admission control per endpoint,
/// retry with exponential backoff for remote transports, an on-disk response
/// cache, and deterministic scripted endpoints for offline runs.
///
/// A single instance is shared across worker threads; all methods are
/// thread-safe and returned values are plain data.
class Gateway {
 public:
  using RequestObserver =
      std::function<void(const ModelEndpoint&, const std::vector<ChatMessage>&)>;

  Gateway() = default;
  explicit Gateway(std::filesystem::path cache_dir) : cache_dir_(std::move(cache_dir)) {}

  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  void set_cache_dir(std::filesystem::path dir) { cache_dir_ = std::move(dir); }

  void set_script(const std::string& endpoint_id, ScriptedBehavior behavior) {
    std::lock_guard<std::mutex> lock(mu_);
    auto state = std::make_shared<ScriptState>();
    state->behavior = std::move(behavior);
    state->consumed.assign(state->behavior.entries.size(), false);
    scripts_[endpoint_id] = std::move(state);
  }

  /// Observer sees every outgoing request (cache hits included). Used by the
  /// test harness for payload sweeps and by the CLI's payload capture flag.
  void set_request_observer(RequestObserver obs) {
    std::lock_guard<std::mutex> lock(mu_);
    observer_ = std::move(obs);
  }

  CompletionResult complete(const ModelEndpoint& endpoint,
                            const std::vector<ChatMessage>& messages,
                            const CompleteOptions& options = {}) {
    validate_messages(messages);
    notify_observer(endpoint, messages);

    if (endpoint.kind == EndpointKind::scripted) return complete_scripted(endpoint, messages);
    return complete_remote(endpoint, messages, options);
  }

  CompletionResult complete(const ModelEndpoint& endpoint,
                            const std::vector<ChatMessage>& messages,
                            std::optional<double> temperature_override) {
    CompleteOptions options;
    options.temperature = temperature_override;
    return complete(endpoint, messages, options);
  }

 private:
  struct ScriptState {
    ScriptedBehavior behavior;
    std::vector<bool> consumed;
    std::optional<std::string> last_response;
    std::mutex mu;
  };

  struct Admission {
    std::mutex mu;
    std::condition_variable cv;
    int available = 0;
  };

  class AdmissionTicket {
   public:
    explicit AdmissionTicket(Admission& a) : a_(a) {
      std::unique_lock<std::mutex> lock(a_.mu);
      a_.cv.wait(lock, [&] { return a_.available > 0; });
      --a_.available;
    }
    ~AdmissionTicket() {
      {
        std::lock_guard<std::mutex> lock(a_.mu);
        ++a_.available;
      }
      a_.cv.notify_one();
    }

   private:
    Admission& a_;
  };

  static void validate_messages(const std::vector<ChatMessage>& messages) {
    if (messages.empty()) throw Error("complete() requires at least one message");
    size_t first = messages[0].role == Role::system ? 1 : 0;
    for (size_t i = 0; i < messages.size(); ++i) {
      if (messages[i].content.empty()) throw Error("message content must be non-empty");
      if (i > first && messages[i].role != Role::system &&
          messages[i].role == messages[i - 1].role)
        throw Error("conversation must alternate user/assistant roles");
      if (i >= first && messages[i].role == Role::system)
        throw Error("system message only allowed in leading position");
    }
  }

  void notify_observer(const ModelEndpoint& endpoint, const std::vector<ChatMessage>& messages) {
    RequestObserver obs;
    {
      std::lock_guard<std::mutex> lock(mu_);
      obs = observer_;
    }
    if (obs) obs(endpoint, messages);
  }

  CompletionResult complete_scripted(const ModelEndpoint& endpoint,
                                     const std::vector<ChatMessage>& messages) {
    std::shared_ptr<ScriptState> state;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = scripts_.find(endpoint.id);
      if (it == scripts_.end())
        throw ConfigError("no script registered for scripted endpoint '" + endpoint.id + "'");
      state = it->second;
    }
    const std::string& last = messages.back().content;
    std::lock_guard<std::mutex> lock(state->mu);
    for (size_t i = 0; i < state->behavior.entries.size(); ++i) {
      if (state->consumed[i]) continue;
      const ScriptEntry& entry = state->behavior.entries[i];
      if (entry.matcher && last.find(*entry.matcher) == std::string::npos) continue;
      state->consumed[i] = true;
      state->last_response = entry.response;
      return {entry.response, endpoint.id, 1, 0};
    }
    if (state->behavior.on_exhausted == ExhaustionPolicy::repeat_last && state->last_response)
      return {*state->last_response, endpoint.id, 1, 0};
    throw ScriptExhausted("script exhausted for endpoint '" + endpoint.id + "'");
  }

  CompletionResult complete_remote(const ModelEndpoint& endpoint,
                                   const std::vector<ChatMessage>& messages,
                                   const CompleteOptions& options) {
    if (endpoint.base_url.empty())
      throw ConfigError("remote endpoint '" + endpoint.id + "' has empty base_url");

    double temperature = options.temperature.value_or(endpoint.default_temperature);
    nlohmann::json payload = {
        {"model", endpoint.model_name},
        {"messages", nlohmann::json::array()},
        {"temperature", temperature},
        {"max_tokens", endpoint.max_output_tokens},
    };
    for (const auto& m : messages)
      payload["messages"].push_back({{"role", to_string(m.role)}, {"content", m.content}});

    const std::string cache_key = make_cache_key(endpoint.id, payload["messages"], temperature,
                                                 options.cache_salt);
    if (!options.bypass_cache) {
      if (auto cached = cache_lookup(cache_key)) return {*cached, endpoint.id, 1, 0};
    }

    std::string api_key;
    if (!endpoint.api_key_ref.empty()) {
      const char* value = std::getenv(endpoint.api_key_ref.c_str());
      if (value == nullptr || *value == '\0')
        throw CredentialMissing("environment variable '" + endpoint.api_key_ref +
                                "' for endpoint '" + endpoint.id + "' is not set");
      api_key = value;
    }

    auto [host, path_prefix] = split_base_url(endpoint.base_url);
    const std::string path = path_prefix + "/chat/completions";
    const std::string body = payload.dump();

    AdmissionTicket ticket(admission_for(endpoint));
    auto started = std::chrono::steady_clock::now();

    std::string last_failure = "unknown transport failure";
    const int max_attempts = endpoint.retry_limit + 1;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
      httplib::Client client(host);
      client.set_connection_timeout(0, endpoint.connect_timeout_ms * 1000);
      client.set_read_timeout(endpoint.read_timeout_ms / 1000,
                              (endpoint.read_timeout_ms % 1000) * 1000);
      httplib::Headers headers;
      if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);

      auto res = client.Post(path, headers, body, "application/json");
      if (res && res->status == 200) {
        if (auto content = parse_completion_body(res->body)) {
          auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();
          if (!options.bypass_cache) cache_store(cache_key, payload, *content);
          return {*content, endpoint.id, attempt, latency};
        }
        last_failure = "response body missing choices[0].message.content";
      } else if (res) {
        if (!is_transient_status(res->status))
          throw TransportFailure("endpoint '" + endpoint.id + "' returned HTTP " +
                                 std::to_string(res->status) + ": " + res->body.substr(0, 200));
        last_failure = "HTTP " + std::to_string(res->status);
      } else {
        last_failure = std::string("connection error: ") + httplib::to_string(res.error());
      }
      if (attempt < max_attempts) backoff_sleep(endpoint.initial_backoff_ms, attempt);
    }
    throw TransportFailure("endpoint '" + endpoint.id + "' failed after " +
                           std::to_string(max_attempts) + " attempts (" + last_failure + ")");
  }

  static bool is_transient_status(int status) {
    return status >= 500 || status == 408 || status == 429;
  }

  static std::optional<std::string> parse_completion_body(const std::string& body) {
    nlohmann::json parsed = nlohmann::json::parse(body, nullptr, false);
    if (parsed.is_discarded()) return std::nullopt;
    const auto* cursor = &parsed;
    if (!cursor->contains("choices") || !(*cursor)["choices"].is_array() ||
        (*cursor)["choices"].empty())
      return std::nullopt;
    const auto& message = (*cursor)["choices"][0];
    if (!message.contains("message") || !message["message"].contains("content") ||
        !message["message"]["content"].is_string())
      return std::nullopt;
    return message["message"]["content"].get<std::string>();
  }

  // Splits "https://host:port/some/prefix" into client target and path prefix.
  static std::pair<std::string, std::string> split_base_url(const std::string& base_url) {
    size_t scheme = base_url.find("://");
    size_t path_start = base_url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (path_start == std::string::npos) return {base_url, ""};
    std::string prefix = base_url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {base_url.substr(0, path_start), prefix};
  }

  static void backoff_sleep(int initial_ms, int attempt) {
    thread_local std::mt19937_64 rng{std::random_device{}()};
    std::uniform_real_distribution<double> jitter(0.8, 1.2);
    double ms = static_cast<double>(initial_ms) * std::pow(2.0, attempt - 1) * jitter(rng);
    std::this_thread::sleep_for(std::chrono::milliseconds(static_cast<int64_t>(ms)));
  }

  Admission& admission_for(const ModelEndpoint& endpoint) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = admission_.find(endpoint.id);
    if (it == admission_.end()) {
      auto slot = std::make_shared<Admission>();
      slot->available = std::max(1, endpoint.max_in_flight);
      it = admission_.emplace(endpoint.id, std::move(slot)).first;
    }
    return *it->second;
  }

  static std::string make_cache_key(const std::string& endpoint_id, const nlohmann::json& messages,
                                    double temperature, const std::string& salt) {
    nlohmann::json key = {{"endpoint_id", endpoint_id},
                          {"messages", messages},
                          {"temperature", temperature}};
    if (!salt.empty()) key["salt"] = salt;
    return util::hex64(util::fnv1a(key.dump()));
  }

  std::optional<std::string> cache_lookup(const std::string& key) const {
    if (cache_dir_.empty()) return std::nullopt;
    std::filesystem::path file = cache_dir_ / (key + ".json");
    if (!std::filesystem::exists(file)) return std::nullopt;
    nlohmann::json entry = nlohmann::json::parse(util::read_file(file), nullptr, false);
    if (entry.is_discarded() || !entry.contains("response")) return std::nullopt;
    return entry["response"]["content"].get<std::string>();
  }

  void cache_store(const std::string& key, const nlohmann::json& request,
                   const std::string& content) const {
    if (cache_dir_.empty()) return;
    nlohmann::json entry = {{"request", request}, {"response", {{"content", content}}}};
    util::write_file_atomic(cache_dir_ / (key + ".json"), entry.dump(2) + "\n");
  }

  std::filesystem::path cache_dir_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<ScriptState>> scripts_;
  std::map<std::string, std::shared_ptr<Admission>> admission_;
  RequestObserver observer_;
};

}  // namespace proeval
