#pragma once

// SPARQL protocol client for live HTTP endpoints.

#include <chrono>
#include <mutex>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "kbqa/store.hpp"

namespace kbqa::endpoint {

struct EndpointConfig {
  std::string url;  // http:// or https://, with path
  double timeout_seconds = 60;
  int max_retries = 3;
  int min_delay_ms = 1000;
  std::string user_agent = "kbqa/0.1 (temporal KBQA pipeline)";

  // InvalidValue listing every violated constraint.
  void validate() const;

  static EndpointConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Requests through one client are issued one at a time, at least
// min_delay_ms apart; the client may be shared between threads.
// Responses 429 and 503 are retried with exponential backoff (honoring
// Retry-After) up to max_retries times before HttpError is raised.
class Client {
 public:
  explicit Client(EndpointConfig cfg);

  // HttpError(status) for non-success responses (status 0 when the connection
  // fails), Timeout, MalformedResults for bodies that are not SPARQL JSON.
  store::Results execute(const std::string& query_text);

  const EndpointConfig& config() const { return cfg_; }

 private:
  std::string request(const std::string& query_text);

  EndpointConfig cfg_;
  std::mutex mu_;
  std::optional<std::chrono::steady_clock::time_point> last_;
};

store::Results execute(const EndpointConfig& cfg, const std::string& query_text);

// Typed literals in canonical lexical form (dateTime re-formatted, "+1"
// integers trimmed) so endpoint rows compare equal to mini-store rows.
store::Results normalize(store::Results r);

}  // namespace kbqa::endpoint
