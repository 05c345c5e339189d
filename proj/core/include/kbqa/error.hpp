#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace kbqa {

// Base of every domain error raised by the library. `kind()` is a stable
// identifier used by the CLI's JSON error object; `details()` carries the
// structured payload (positions, candidate lists, ...).
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message,
        nlohmann::json details = nlohmann::json::object())
      : std::runtime_error(message),
        kind_(std::move(kind)),
        details_(std::move(details)) {}

  const std::string& kind() const noexcept { return kind_; }
  const nlohmann::json& details() const noexcept { return details_; }

  nlohmann::json to_json() const {
    nlohmann::json j = details_;
    j["error"] = kind_;
    j["message"] = what();
    return j;
  }

 private:
  std::string kind_;
  nlohmann::json details_;
};

// penman-amr

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& expected)
      : Error("SyntaxError",
              "syntax error at offset " + std::to_string(position) +
                  ": expected " + expected,
              {{"position", position}, {"expected", expected}}),
        position_(position),
        expected_(expected) {}
  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class DuplicateConceptError : public Error {
 public:
  DuplicateConceptError(const std::string& var, const std::string& first,
                        const std::string& second)
      : Error("DuplicateConceptError",
              "variable '" + var + "' has concepts '" + first + "' and '" +
                  second + "'",
              {{"var", var}, {"concepts", {first, second}}}) {}
};

// Raised when a value violates a structural invariant of its type.
class InvalidValue : public Error {
 public:
  explicit InvalidValue(const std::string& message,
                        std::vector<std::string> violations = {})
      : Error("InvalidValue", message, {{"violations", violations}}) {}
};

// rule-translate

class UnsupportedConstruct : public Error {
 public:
  UnsupportedConstruct(const std::string& node, const std::string& concept_name,
                       const std::string& reason = "no rule for construct")
      : Error("UnsupportedConstruct",
              reason + " at node '" + node + "' (" + concept_name + ")",
              {{"node", node}, {"concept", concept_name}}) {}
};

// grounder

class UnlinkedEntity : public Error {
 public:
  UnlinkedEntity(const std::string& surface, std::vector<std::string> candidates)
      : Error("UnlinkedEntity", "no entity linked for '" + surface + "'",
              {{"surface", surface}, {"candidates", candidates}}) {}
};

class UnlinkedRelation : public Error {
 public:
  UnlinkedRelation(const std::string& frame, std::vector<std::string> candidates)
      : Error("UnlinkedRelation", "no relation linked for frame '" + frame + "'",
              {{"frame", frame}, {"candidates", candidates}}) {}
};

class ProfileMismatch : public Error {
 public:
  explicit ProfileMismatch(const std::string& message)
      : Error("ProfileMismatch", message) {}
};

class MissingGold : public Error {
 public:
  explicit MissingGold(const std::string& symbol)
      : Error("MissingGold", "gold annotation missing for '" + symbol + "'",
              {{"symbol", symbol}}) {}
};

// sparql-gen

class UnemittableConstruct : public Error {
 public:
  explicit UnemittableConstruct(const std::string& construct)
      : Error("UnemittableConstruct",
              "construct '" + construct + "' has no SPARQL translation",
              {{"construct", construct}}) {}
};

class InvalidQuery : public Error {
 public:
  explicit InvalidQuery(std::vector<std::string> violations)
      : Error("InvalidQuery", join(violations), {{"violations", violations}}) {}

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid query:";
    for (const auto& s : v) out += " " + s + ";";
    return out;
  }
};

// mini-store

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("ParseError",
              "line " + std::to_string(line) + ": " + message,
              {{"line", line}}),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UnsupportedFeature : public Error {
 public:
  explicit UnsupportedFeature(const std::string& feature)
      : Error("UnsupportedFeature", "unsupported SPARQL feature: " + feature,
              {{"feature", feature}}) {}
};

// endpoint-client

class HttpError : public Error {
 public:
  HttpError(int status, const std::string& body)
      : Error("HttpError", "HTTP status " + std::to_string(status),
              {{"status", status}, {"body", body.substr(0, 512)}}),
        status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

class Timeout : public Error {
 public:
  explicit Timeout(const std::string& url)
      : Error("Timeout", "request to " + url + " timed out", {{"url", url}}) {}
};

class MalformedResults : public Error {
 public:
  explicit MalformedResults(const std::string& message)
      : Error("MalformedResults", message) {}
};

// kbqa-eval

class MissingGoldStage : public Error {
 public:
  MissingGoldStage(const std::string& stage, const std::string& record)
      : Error("MissingGoldStage",
              "record '" + record + "' has no gold artifact for " + stage,
              {{"stage", stage}, {"record", record}}) {}
};

// Malformed JSON input for one of the interchange formats.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& message)
      : Error("FormatError", message) {}
};

}  // namespace kbqa
