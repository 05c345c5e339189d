#pragma once

// The kbqa command-line driver, callable in-process for tests.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbqa/endpoint.hpp"
#include "kbqa/rdf.hpp"
#include "kbqa/translate.hpp"

namespace kbqa::cli {

enum class Format { Text, Json };

struct CliConfig {
  std::string kb = "wikidata";
  std::optional<std::string> lexicon;
  std::optional<std::string> store;
  std::optional<endpoint::EndpointConfig> endpoint;
  translate::OrdinalOffsetMode ordinal_offset_mode = translate::OrdinalOffsetMode::ZeroBased;
  std::optional<rdf::DateTime> now;  // wall clock when absent
  Format format = Format::Text;

  // Relative paths resolve against `base_dir`. FormatError on bad fields.
  static CliConfig from_json(const nlohmann::json& j, const std::string& base_dir = "");
};

// Exit codes: 0 success, 1 domain error (printed to `err` as one JSON
// object), 2 usage error. `config_path` is the SYGMA_CONFIG file, if any.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err,
        const std::optional<std::string>& config_path = std::nullopt);

}  // namespace kbqa::cli
