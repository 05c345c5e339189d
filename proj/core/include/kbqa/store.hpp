#pragma once

// In-memory triple store and evaluator for the emitted SPARQL subset.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbqa/rdf.hpp"
#include "kbqa/sparql.hpp"

namespace kbqa::store {

using TermId = std::uint32_t;
using Triple = std::array<rdf::Term, 3>;
using IdTriple = std::array<TermId, 3>;

// Immutable after construction; safe for concurrent reads.
class TripleStore {
 public:
  TripleStore() = default;
  // Duplicates collapse; literals must have valid lexical forms (InvalidValue).
  explicit TripleStore(const std::vector<Triple>& triples);

  std::size_t size() const { return spo_.size(); }
  std::size_t term_count() const { return terms_.size(); }
  const rdf::Term& term(TermId id) const { return terms_[id]; }
  std::optional<TermId> find(const rdf::Term& t) const;

  bool contains(const IdTriple& t) const;

  // Calls f(const IdTriple&) for every triple matching the bound positions.
  template <class F>
  void match(std::optional<TermId> s, std::optional<TermId> p, std::optional<TermId> o,
             F&& f) const;

  std::vector<Triple> triples() const;  // sorted by (s, p, o) ids
  std::string to_ntriples() const;

 private:
  std::vector<rdf::Term> terms_;
  std::map<rdf::Term, TermId> ids_;
  std::vector<IdTriple> spo_;  // sorted (s, p, o)
  std::vector<IdTriple> pos_;  // stored as (p, o, s), sorted
  std::vector<IdTriple> osp_;  // stored as (o, s, p), sorted
};

// Line-oriented N-Triples: one triple per line, full IRIs, typed or
// language-tagged literals, blank nodes, '#' comments. ParseError(line).
TripleStore load_ntriples(std::string_view text);
TripleStore load_ntriples_file(const std::string& path);

// One result row: projected variable -> term. Unbound variables are absent.
using Binding = std::map<std::string, rdf::Term>;

struct Results {
  bool is_boolean = false;
  bool boolean = false;
  std::vector<std::string> vars;
  std::vector<Binding> rows;
  friend bool operator==(const Results&, const Results&) = default;
};

// Throws UnsupportedFeature for queries outside the evaluable subset: a
// triple pattern that uses a variable an earlier BIND introduced.
void check_subset(const sparql::Query& q);

// Index-driven evaluation. Group semantics: UNION branches are spliced in
// place (each branch continues with the rest of the group), BINDs see the
// variables bound before them, FILTERs apply to the whole group. Rows are
// ordered by the ORDER BY key, then by the canonical form of the row.
Results eval(const sparql::Query& q, const TripleStore& s, const rdf::DateTime& now);

// Reference evaluator: enumerates assignments of store terms to the pattern
// variables and checks each pattern, BIND and FILTER directly.
Results eval_bruteforce(const sparql::Query& q, const TripleStore& s, const rdf::DateTime& now);

// SPARQL 1.1 JSON results format.
nlohmann::json to_json(const Results& r);
Results results_from_json(const nlohmann::json& j);  // MalformedResults

// All terms bound in any row; for ASK the boolean as an xsd:boolean literal.
std::vector<rdf::Term> answer_terms(const Results& r);

// ---- inline ----

template <class F>
void TripleStore::match(std::optional<TermId> s, std::optional<TermId> p,
                        std::optional<TermId> o, F&& f) const {
  auto scan = [&](const std::vector<IdTriple>& index, std::optional<TermId> a,
                  std::optional<TermId> b, auto&& unpermute) {
    IdTriple lo{a.value_or(0), a && b ? *b : 0, 0};
    auto it = a ? std::lower_bound(index.begin(), index.end(), lo) : index.begin();
    for (; it != index.end(); ++it) {
      if (a && (*it)[0] != *a) break;
      if (a && b && (*it)[1] != *b) break;
      IdTriple t = unpermute(*it);
      if ((s && t[0] != *s) || (p && t[1] != *p) || (o && t[2] != *o)) continue;
      f(t);
    }
  };
  if (s) {
    scan(spo_, s, p, [](const IdTriple& t) { return t; });
  } else if (p) {
    scan(pos_, p, o, [](const IdTriple& t) { return IdTriple{t[2], t[0], t[1]}; });
  } else if (o) {
    scan(osp_, o, std::nullopt, [](const IdTriple& t) { return IdTriple{t[1], t[2], t[0]}; });
  } else {
    scan(spo_, std::nullopt, std::nullopt, [](const IdTriple& t) { return t; });
  }
}

}  // namespace kbqa::store
