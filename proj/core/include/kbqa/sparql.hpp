#pragma once

// SPARQL query AST for the subset the generator emits: basic graph patterns,
// FILTER, BIND, UNION, COUNT, ORDER BY / LIMIT / OFFSET and ASK.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbqa/box.hpp"
#include "kbqa/rdf.hpp"

namespace kbqa::sparql {

struct Var {
  std::string name;  // without the leading '?'
  friend auto operator<=>(const Var&, const Var&) = default;
};

using PatternTerm = std::variant<Var, rdf::Term>;

struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;
  friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
};

enum class Op { Or, And, Eq, Ne, Lt, Le, Gt, Ge, Add, Sub };

std::string_view symbol(Op op);

struct Expr;

struct NowCall {
  friend bool operator==(const NowCall&, const NowCall&) = default;
};

struct BinaryExpr {
  Op op = Op::And;
  Box<Expr> lhs;
  Box<Expr> rhs;
  friend bool operator==(const BinaryExpr&, const BinaryExpr&) = default;
};

struct Expr {
  std::variant<Var, rdf::Term, NowCall, BinaryExpr> node;
  friend bool operator==(const Expr&, const Expr&) = default;
};

Expr binary(Op op, Expr lhs, Expr rhs);
inline Expr var_expr(std::string name) { return Expr{Var{std::move(name)}}; }

struct Filter {
  Expr expr;
  friend bool operator==(const Filter&, const Filter&) = default;
};

struct Bind {
  Expr expr;
  Var var;
  friend bool operator==(const Bind&, const Bind&) = default;
};

struct Union;

using Element = std::variant<TriplePattern, Filter, Bind, Box<Union>>;

struct Group {
  std::vector<Element> elements;
  friend bool operator==(const Group&, const Group&) = default;
};

struct Union {
  std::vector<Group> branches;
  friend bool operator==(const Union&, const Union&) = default;
};

enum class Form { Select, Ask };

struct CountProjection {
  Var var;
  Var alias;
  bool distinct = false;
  friend bool operator==(const CountProjection&, const CountProjection&) = default;
};

struct OrderKey {
  Var var;
  bool descending = false;
  friend bool operator==(const OrderKey&, const OrderKey&) = default;
};

struct Query {
  Form form = Form::Select;
  bool distinct = true;
  std::vector<Var> projection;
  std::optional<CountProjection> count;
  Group where;
  std::optional<OrderKey> order;
  std::optional<std::int64_t> limit;
  std::optional<std::int64_t> offset;
  std::vector<std::pair<std::string, std::string>> prefixes;  // prefix -> namespace
  friend bool operator==(const Query&, const Query&) = default;
};

// Names of the variables a result row carries: the projection, the COUNT
// alias, or nothing for ASK.
std::vector<std::string> result_vars(const Query& q);

// Every variable bound somewhere in the where clause (patterns and BINDs).
std::vector<std::string> bound_vars(const Group& g);

// Structural violations: empty where clause, projected or ordered variables
// that the where clause never binds, BIND targets already in scope, negative
// slices.
std::vector<std::string> validate(const Query& q);

// Deterministic text. Throws InvalidQuery for queries failing validate().
std::string render(const Query& q);

std::string render(const Expr& e, const Query& context);

// Parses the subset above. `default_prefixes` resolve prefixed names that the
// text does not declare. ParseError on malformed text, UnsupportedFeature for
// SPARQL constructs outside the subset.
Query parse(std::string_view text,
            const std::vector<std::pair<std::string, std::string>>& default_prefixes = {});

nlohmann::json to_json(const Query& q);

}  // namespace kbqa::sparql
