#pragma once

// Grounded lambda expression to SPARQL.

#include "kbqa/grounder.hpp"
#include "kbqa/kb.hpp"
#include "kbqa/sparql.hpp"

namespace kbqa::sparql {

// Within each group the emitted elements are ordered triple patterns, UNION
// blocks, BINDs, FILTERs, so every BIND sees the variables its patterns bind.
// Throws UnemittableConstruct for spatial predicates and InvalidQuery if the
// result fails validate().
Query emit(const ground::KbLambdaExpr& e, const kb::KbProfile& kb);

// The interval bounds a DatePred denotes: midnight UTC of the first and last
// day of the day, month or year.
std::pair<rdf::Term, rdf::Term> date_bounds(const lambda::CalendarDate& d);

}  // namespace kbqa::sparql
