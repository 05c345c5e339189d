#pragma once

// Term-level semantics shared by both evaluators: expression values,
// comparison, arithmetic, and the total order used by ORDER BY.

#include <functional>
#include <optional>
#include <string>

#include "kbqa/rdf.hpp"
#include "kbqa/sparql.hpp"

namespace kbqa::store::detail {

// Returns the term bound to a variable, or nullptr when unbound.
using Lookup = std::function<const rdf::Term*(const std::string&)>;

rdf::Term now_term(const rdf::DateTime& now);

// nullopt is an evaluation error (unbound variable, type mismatch, ...).
std::optional<rdf::Term> evaluate(const sparql::Expr& e, const Lookup& lookup,
                                  const rdf::Term& now);

// A FILTER keeps the solution only if its effective boolean value is true.
bool filter_passes(const sparql::Expr& e, const Lookup& lookup, const rdf::Term& now);

// Total order over optional terms: unbound < blank < IRI < numeric literal
// < dateTime/date literal < other literals; numbers and instants by value,
// ties and everything else by their N-Triples form. Returns <0, 0, >0.
int order_compare(const rdf::Term* a, const rdf::Term* b);

}  // namespace kbqa::store::detail
