#pragma once

// KB-agnostic lambda-calculus intermediate representation.
//
// The expression algebra (abstraction, count, min/max, argmin/argmax,
// boolean) is parameterised over the predicate type so the grounded form in
// grounder.hpp reuses it with KB predicates in place of frame predicates.

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbqa/box.hpp"

namespace kbqa::lambda {

struct Var {
  std::string name;
  friend auto operator<=>(const Var&, const Var&) = default;
};

// KB-constant placeholder: an entity mention or literal awaiting grounding.
struct Const {
  std::string value;
  friend auto operator<=>(const Const&, const Const&) = default;
};

using Arg = std::variant<Var, Const>;

// Time interval variable. Its endpoints are the accessors "<name>Start" and
// "<name>End".
struct IntervalVar {
  std::string name;
  std::string start() const { return name + "Start"; }
  std::string end() const { return name + "End"; }
  friend auto operator<=>(const IntervalVar&, const IntervalVar&) = default;
};

using Binder = std::variant<Var, IntervalVar>;

std::string binder_name(const Binder& b);

enum class DatePrecision { Day, Month, Year };

// Proleptic Gregorian date. With Month/Year precision the unused fields are 1
// and the date denotes the whole month or year.
struct CalendarDate {
  int year = 1970;
  int month = 1;
  int day = 1;
  DatePrecision precision = DatePrecision::Day;
  friend auto operator<=>(const CalendarDate&, const CalendarDate&) = default;
};

enum class Connective { And, Or };
enum class CmpOp { Greater, Less };
enum class Extreme { Min, Max };

// frame(v, v0, ..., vn). args[0] is the event variable of the frame node;
// roles, when present, label each argument ("" for the event, "arg0", ...).
struct FramePred {
  std::string name;
  std::vector<Arg> args;
  std::vector<std::string> roles;
  friend bool operator==(const FramePred&, const FramePred&) = default;
};

struct IntervalPred {
  IntervalVar ivar;
  Arg source;
  friend bool operator==(const IntervalPred&, const IntervalPred&) = default;
};

struct NowPred {
  IntervalVar ivar;
  friend bool operator==(const NowPred&, const NowPred&) = default;
};

struct TeenagerPred {
  IntervalVar ivar;
  Arg person;
  friend bool operator==(const TeenagerPred&, const TeenagerPred&) = default;
};

struct DatePred {
  IntervalVar ivar;
  CalendarDate date;
  friend bool operator==(const DatePred&, const DatePred&) = default;
};

struct OverlapPred {
  IntervalVar first;
  IntervalVar second;
  friend bool operator==(const OverlapPred&, const OverlapPred&) = default;
};

struct BeforePred {
  IntervalVar first;
  IntervalVar second;
  friend bool operator==(const BeforePred&, const BeforePred&) = default;
};

struct AfterPred {
  IntervalVar first;
  IntervalVar second;
  friend bool operator==(const AfterPred&, const AfterPred&) = default;
};

struct CmpPred {
  Var left;
  Var right;
  CmpOp op = CmpOp::Greater;
  friend bool operator==(const CmpPred&, const CmpPred&) = default;
};

struct CoordinatePred {
  Var cvar;
  Arg source;
  friend bool operator==(const CoordinatePred&, const CoordinatePred&) = default;
};

struct SouthPred {
  Var first;
  Var second;
  friend bool operator==(const SouthPred&, const SouthPred&) = default;
};

using Predicate =
    std::variant<FramePred, IntervalPred, NowPred, TeenagerPred, DatePred,
                 OverlapPred, BeforePred, AfterPred, CmpPred, CoordinatePred,
                 SouthPred>;

template <class P>
struct BasicTerm;

template <class P>
using TermChild = std::variant<P, Box<BasicTerm<P>>>;

template <class P>
struct BasicTerm {
  Connective connective = Connective::And;
  std::vector<TermChild<P>> children;
  friend bool operator==(const BasicTerm&, const BasicTerm&) = default;
};

// λx.T. `exists` lists the variables of T that are existentially closed
// (event variables, intermediate nodes); they are not projected.
template <class P>
struct BasicAbstraction {
  std::vector<Binder> bound;
  std::vector<Var> exists;
  BasicTerm<P> body;
  friend bool operator==(const BasicAbstraction&, const BasicAbstraction&) = default;
};

template <class P>
struct BasicCount {
  BasicAbstraction<P> inner;
  friend bool operator==(const BasicCount&, const BasicCount&) = default;
};

// min/max(λx.T, offset, limit)
template <class P>
struct BasicExtremum {
  Extreme kind = Extreme::Min;
  BasicAbstraction<P> inner;
  std::int64_t offset = 0;
  std::int64_t limit = 1;
  friend bool operator==(const BasicExtremum&, const BasicExtremum&) = default;
};

// argmin/argmax(λx.T1, λx.λy.T2, offset, limit)
template <class P>
struct BasicArgExtremum {
  Extreme kind = Extreme::Min;
  BasicAbstraction<P> target;
  BasicAbstraction<P> key;
  std::int64_t offset = 0;
  std::int64_t limit = 1;
  friend bool operator==(const BasicArgExtremum&, const BasicArgExtremum&) = default;
};

template <class P>
struct BasicBoolean {
  std::vector<Var> exists;
  BasicTerm<P> body;
  friend bool operator==(const BasicBoolean&, const BasicBoolean&) = default;
};

template <class P>
using BasicExpr = std::variant<BasicAbstraction<P>, BasicCount<P>, BasicExtremum<P>,
                               BasicArgExtremum<P>, BasicBoolean<P>>;

using Term = BasicTerm<Predicate>;
using Abstraction = BasicAbstraction<Predicate>;
using Count = BasicCount<Predicate>;
using Extremum = BasicExtremum<Predicate>;
using ArgExtremum = BasicArgExtremum<Predicate>;
using BooleanQuery = BasicBoolean<Predicate>;
using LambdaExpr = BasicExpr<Predicate>;

struct Violation {
  std::string path;
  std::string message;
  friend bool operator==(const Violation&, const Violation&) = default;
};

// Ordinary variables that are neither λ-bound nor declared existential.
std::set<Var> free_vars(const LambdaExpr& e);

// Every invariant violation, each with a path into the expression tree.
std::vector<Violation> validate(const LambdaExpr& e);

std::string pretty(const LambdaExpr& e);
std::string pretty(const Predicate& p);

nlohmann::json to_json(const LambdaExpr& e);
LambdaExpr lambda_from_json(const nlohmann::json& j);

std::string to_string(const CalendarDate& d);  // dd-mm-yyyy

// Convenience builders used by the rule engine and tests.
Term conj(std::vector<Predicate> preds);

}  // namespace kbqa::lambda
