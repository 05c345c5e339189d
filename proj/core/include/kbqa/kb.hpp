#pragma once

// Knowledge-base profiles: prefix tables, property naming schemes and the
// reification convention of a target KB.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kbqa::kb {

enum class KbName { Wikidata, DBpedia };
enum class Reification { StatementNodes, None };

std::string to_string(KbName n);  // "wikidata", "dbpedia"

struct KbProfile {
  KbName name = KbName::Wikidata;
  Reification reification = Reification::StatementNodes;
  std::vector<std::pair<std::string, std::string>> prefixes;  // prefix -> namespace IRI

  // Prefixes used to build property and entity IRIs from bare identifiers.
  std::string entity_prefix;           // wd
  std::string direct_prefix;           // wdt
  std::string statement_prefix;        // p    (empty without reification)
  std::string statement_value_prefix;  // ps
  std::string qualifier_prefix;        // pq

  std::string birthdate;   // property id of the date of birth
  std::string start_time;  // start/end/point-in-time property ids; empty when
  std::string end_time;    // the KB has no generic temporal properties
  std::string point_in_time;

  static const KbProfile& wikidata();
  static const KbProfile& dbpedia();
  // Throws InvalidValue for names other than "wikidata" / "dbpedia".
  static const KbProfile& by_name(std::string_view name);

  bool has_prefix(std::string_view prefix) const;
  std::string namespace_of(std::string_view prefix) const;  // throws ProfileMismatch

  // "wd:Q1" -> full IRI (ProfileMismatch for unknown prefixes); absolute IRIs
  // pass through; anything else is InvalidValue.
  std::string expand(std::string_view curie_or_iri) const;
  // Full IRI -> "prefix:local" when a namespace matches and the local part is
  // a plain name, otherwise the IRI unchanged.
  std::string compact(std::string_view iri) const;

  std::string direct(std::string_view pid) const;
  std::string statement(std::string_view pid) const;
  std::string statement_value(std::string_view pid) const;
  std::string qualifier(std::string_view pid) const;
};

bool is_absolute_iri(std::string_view s);

}  // namespace kbqa::kb
