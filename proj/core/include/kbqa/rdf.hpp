#pragma once

// RDF terms shared by the store, the query evaluator and the endpoint client,
// plus the xsd:dateTime / xsd:duration arithmetic the temporal filters need.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace kbqa::rdf {

inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kLangString =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";

std::string xsd(std::string_view local);  // full IRI of xsd:<local>

enum class TermKind { Iri, Blank, Literal };

struct Term {
  TermKind kind = TermKind::Iri;
  std::string value;     // IRI, blank node label, or literal lexical form
  std::string datatype;  // literals only; full IRI
  std::string lang;      // language-tagged strings only

  static Term iri(std::string v) { return {TermKind::Iri, std::move(v), {}, {}}; }
  static Term blank(std::string v) { return {TermKind::Blank, std::move(v), {}, {}}; }
  static Term literal(std::string lexical, std::string datatype = xsd("string"),
                      std::string lang = {});
  static Term integer(std::int64_t v);

  bool is_iri() const { return kind == TermKind::Iri; }
  bool is_literal() const { return kind == TermKind::Literal; }

  friend auto operator<=>(const Term&, const Term&) = default;
};

// N-Triples form: <iri>, _:b, "lex"^^<dt>, "lex"@en. Plain xsd:string
// literals are written without a datatype.
std::string to_ntriples(const Term& t);

// ---- xsd:dateTime ----

// A calendar instant. `tz_minutes` is the offset from UTC; absent means the
// lexical form carried no timezone, which is treated as UTC for comparison.
struct DateTime {
  std::int64_t year = 1970;
  int month = 1;
  int day = 1;
  int hour = 0;
  int minute = 0;
  int second = 0;
  int micros = 0;
  std::optional<int> tz_minutes;

  // Microseconds since 1970-01-01T00:00:00Z.
  std::int64_t instant() const;
};

// Accepts xsd:dateTime ("1997-12-19T00:00:00Z") and xsd:date ("1997-12-19",
// read as midnight). Returns nullopt for malformed or impossible dates.
std::optional<DateTime> parse_datetime(std::string_view lexical);
std::string format_datetime(const DateTime& d);  // canonical xsd:dateTime

std::strong_ordering compare(const DateTime& a, const DateTime& b);

DateTime datetime_from_instant(std::int64_t micros);  // UTC
std::int64_t days_in_month(std::int64_t year, int month);

// ---- xsd:duration ----

struct Duration {
  bool negative = false;
  std::int64_t months = 0;   // years folded in
  std::int64_t days = 0;
  std::int64_t micros = 0;   // hours, minutes and seconds folded in

  friend bool operator==(const Duration&, const Duration&) = default;
};

std::optional<Duration> parse_duration(std::string_view lexical);
std::string format_duration(const Duration& d);

// Years and months first with the day clamped to the end of the target month
// (2000-02-29 + P13Y = 2013-02-28), then days, then the time part.
DateTime add(const DateTime& d, const Duration& dur);

// ---- lexical validation of typed literals ----

bool valid_lexical(std::string_view lexical, std::string_view datatype);

}  // namespace kbqa::rdf
