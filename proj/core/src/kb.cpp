#include "kbqa/kb.hpp"

#include <cctype>

#include "kbqa/error.hpp"

namespace kbqa::kb {

namespace {

bool plain_local(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

const std::pair<std::string, std::string> kXsdPrefix{"xsd",
                                                     "http://www.w3.org/2001/XMLSchema#"};

}  // namespace

std::string to_string(KbName n) { return n == KbName::Wikidata ? "wikidata" : "dbpedia"; }

bool is_absolute_iri(std::string_view s) {
  auto colon = s.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    char c = s[i];
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.')
      return false;
  }
  return s.substr(colon + 1, 2) == "//" || s.substr(0, colon) == "urn";
}

const KbProfile& KbProfile::wikidata() {
  static const KbProfile p = [] {
    KbProfile k;
    k.name = KbName::Wikidata;
    k.reification = Reification::StatementNodes;
    k.prefixes = {{"wd", "http://www.wikidata.org/entity/"},
                  {"wdt", "http://www.wikidata.org/prop/direct/"},
                  {"p", "http://www.wikidata.org/prop/"},
                  {"ps", "http://www.wikidata.org/prop/statement/"},
                  {"pq", "http://www.wikidata.org/prop/qualifier/"},
                  kXsdPrefix};
    k.entity_prefix = "wd";
    k.direct_prefix = "wdt";
    k.statement_prefix = "p";
    k.statement_value_prefix = "ps";
    k.qualifier_prefix = "pq";
    k.birthdate = "P569";
    k.start_time = "P580";
    k.end_time = "P582";
    k.point_in_time = "P585";
    return k;
  }();
  return p;
}

const KbProfile& KbProfile::dbpedia() {
  static const KbProfile p = [] {
    KbProfile k;
    k.name = KbName::DBpedia;
    k.reification = Reification::None;
    k.prefixes = {{"dbo", "http://dbpedia.org/ontology/"},
                  {"dbr", "http://dbpedia.org/resource/"},
                  kXsdPrefix};
    k.entity_prefix = "dbr";
    k.direct_prefix = "dbo";
    k.birthdate = "birthDate";
    return k;
  }();
  return p;
}

const KbProfile& KbProfile::by_name(std::string_view name) {
  if (name == "wikidata") return wikidata();
  if (name == "dbpedia") return dbpedia();
  throw InvalidValue("unknown KB profile '" + std::string(name) + "'");
}

bool KbProfile::has_prefix(std::string_view prefix) const {
  for (const auto& [p, ns] : prefixes)
    if (p == prefix) return true;
  return false;
}

std::string KbProfile::namespace_of(std::string_view prefix) const {
  for (const auto& [p, ns] : prefixes)
    if (p == prefix) return ns;
  throw ProfileMismatch("prefix '" + std::string(prefix) + "' is not declared by the " +
                        to_string(name) + " profile");
}

std::string KbProfile::expand(std::string_view s) const {
  if (is_absolute_iri(s)) return std::string(s);
  auto colon = s.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == s.size())
    throw InvalidValue("'" + std::string(s) + "' is neither an absolute IRI nor a prefixed name");
  return namespace_of(s.substr(0, colon)) + std::string(s.substr(colon + 1));
}

std::string KbProfile::compact(std::string_view iri) const {
  const std::pair<std::string, std::string>* best = nullptr;
  for (const auto& p : prefixes) {
    if (iri.substr(0, p.second.size()) != p.second) continue;
    if (!plain_local(iri.substr(p.second.size()))) continue;
    if (!best || p.second.size() > best->second.size()) best = &p;
  }
  if (!best) return std::string(iri);
  return best->first + ":" + std::string(iri.substr(best->second.size()));
}

std::string KbProfile::direct(std::string_view pid) const {
  return namespace_of(direct_prefix) + std::string(pid);
}

std::string KbProfile::statement(std::string_view pid) const {
  if (statement_prefix.empty())
    throw ProfileMismatch("the " + to_string(name) + " profile has no statement nodes");
  return namespace_of(statement_prefix) + std::string(pid);
}

std::string KbProfile::statement_value(std::string_view pid) const {
  if (statement_value_prefix.empty())
    throw ProfileMismatch("the " + to_string(name) + " profile has no statement nodes");
  return namespace_of(statement_value_prefix) + std::string(pid);
}

std::string KbProfile::qualifier(std::string_view pid) const {
  if (qualifier_prefix.empty())
    throw ProfileMismatch("the " + to_string(name) + " profile has no qualifiers");
  return namespace_of(qualifier_prefix) + std::string(pid);
}

}  // namespace kbqa::kb
