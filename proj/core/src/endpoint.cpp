#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "kbqa/endpoint.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <thread>

#include "kbqa/error.hpp"

namespace kbqa::endpoint {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kMaxGetQueryBytes = 2000;
constexpr auto kMaxBackoff = std::chrono::seconds(60);

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;    // with any fixed query string
};

Url split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw InvalidValue("endpoint url has no scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string percent_encode(const std::string& s) {
  static const char* kHex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  return out;
}

std::optional<std::chrono::milliseconds> retry_after(const httplib::Response& res) {
  if (!res.has_header("Retry-After")) return std::nullopt;
  try {
    return std::chrono::milliseconds(
        static_cast<std::int64_t>(std::stod(res.get_header_value("Retry-After")) * 1000));
  } catch (const std::exception&) {
    return std::nullopt;  // HTTP-date form: fall back to the computed backoff
  }
}

rdf::Term normalize_term(rdf::Term t) {
  if (!t.is_literal()) return t;
  if (t.datatype == rdf::xsd("dateTime")) {
    if (auto d = rdf::parse_datetime(t.value)) t.value = rdf::format_datetime(*d);
  } else if (t.datatype == rdf::xsd("integer") && rdf::valid_lexical(t.value, t.datatype)) {
    t.value = std::to_string(std::stoll(t.value));
  }
  return t;
}

}  // namespace

void EndpointConfig::validate() const {
  std::vector<std::string> v;
  if (url.rfind("http://", 0) != 0 && url.rfind("https://", 0) != 0)
    v.push_back("url must start with http:// or https://");
  if (!(timeout_seconds > 0)) v.push_back("timeout_seconds must be positive");
  if (max_retries < 0) v.push_back("max_retries must be >= 0");
  if (min_delay_ms < 0) v.push_back("min_delay_ms must be >= 0");
  if (!v.empty()) throw InvalidValue("invalid endpoint config", v);
}

EndpointConfig EndpointConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("endpoint config must be an object");
  EndpointConfig c;
  try {
    c.url = j.at("url").get<std::string>();
    c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
    c.max_retries = j.value("max_retries", c.max_retries);
    c.min_delay_ms = j.value("min_delay_ms", c.min_delay_ms);
    c.user_agent = j.value("user_agent", c.user_agent);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("endpoint config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json EndpointConfig::to_json() const {
  return {{"url", url},
          {"timeout_seconds", timeout_seconds},
          {"max_retries", max_retries},
          {"min_delay_ms", min_delay_ms},
          {"user_agent", user_agent}};
}

Client::Client(EndpointConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

std::string Client::request(const std::string& query_text) {
  auto [origin, path] = split_url(cfg_.url);
  httplib::Client http(origin);
  auto secs = static_cast<time_t>(cfg_.timeout_seconds);
  auto usecs = static_cast<time_t>((cfg_.timeout_seconds - static_cast<double>(secs)) * 1e6);
  http.set_connection_timeout(secs, usecs);
  http.set_read_timeout(secs, usecs);
  http.set_write_timeout(secs, usecs);
  http.set_follow_location(true);
  httplib::Headers headers{{"Accept", "application/sparql-results+json"},
                           {"User-Agent", cfg_.user_agent}};

  std::lock_guard lock(mu_);
  auto delay = std::chrono::milliseconds(cfg_.min_delay_ms);
  for (int attempt = 0;; ++attempt) {
    if (last_) std::this_thread::sleep_until(*last_ + delay);
    auto started = Clock::now();
    last_ = started;
    httplib::Result res =
        query_text.size() <= kMaxGetQueryBytes
            ? http.Get(path + (path.find('?') == std::string::npos ? "?" : "&") +
                           "query=" + percent_encode(query_text),
                       headers)
            : http.Post(path, headers, "query=" + percent_encode(query_text),
                        "application/x-www-form-urlencoded");
    if (!res) {
      auto err = res.error();
      std::chrono::duration<double> elapsed = Clock::now() - started;
      if (err == httplib::Error::ConnectionTimeout ||
          ((err == httplib::Error::Read || err == httplib::Error::Write) &&
           elapsed.count() >= 0.9 * cfg_.timeout_seconds))
        throw Timeout(cfg_.url);
      throw HttpError(0, httplib::to_string(err));
    }
    if (res->status == 200) return res->body;
    bool transient = res->status == 429 || res->status == 503;
    if (!transient || attempt >= cfg_.max_retries) throw HttpError(res->status, res->body);
    auto backoff = std::max<std::chrono::milliseconds>(delay, std::chrono::milliseconds(1)) *
                   (std::int64_t{1} << std::min(attempt, 16));
    if (auto ra = retry_after(*res)) backoff = std::max(backoff, *ra);
    std::this_thread::sleep_for(std::min<std::chrono::milliseconds>(backoff, kMaxBackoff));
  }
}

store::Results Client::execute(const std::string& query_text) {
  std::string body = request(query_text);
  auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) throw MalformedResults("response body is not JSON");
  return normalize(store::results_from_json(j));
}

store::Results execute(const EndpointConfig& cfg, const std::string& query_text) {
  return Client(cfg).execute(query_text);
}

store::Results normalize(store::Results r) {
  for (auto& row : r.rows)
    for (auto& [var, term] : row) term = normalize_term(std::move(term));
  return r;
}

}  // namespace kbqa::endpoint
