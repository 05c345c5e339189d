#include "kbqa/lambda.hpp"

#include <gtest/gtest.h>

#include "kbqa/error.hpp"

using namespace kbqa;
using namespace kbqa::lambda;

namespace {

Var v(const char* n) { return Var{n}; }
IntervalVar iv(const char* n) { return IntervalVar{n}; }
FramePred frame(const char* name, std::vector<Arg> args) { return {name, std::move(args), {}}; }

// argmax(λa. f(v, a), λa.λev. g(n) ∧ interval(ev, v) ∧ interval(en, n) ∧ before(ev, en), 0, 1)
ArgExtremum before_shape() {
  Abstraction target{{v("a")}, {v("v")}, conj({frame("f", {v("v"), v("a")})})};
  Abstraction key{{v("a"), iv("ev")},
                  {v("v"), v("n")},
                  conj({frame("g", {v("n")}), IntervalPred{iv("ev"), v("v")},
                        IntervalPred{iv("en"), v("n")}, BeforePred{iv("ev"), iv("en")}})};
  return ArgExtremum{Extreme::Max, target, key, 0, 1};
}

TEST(FreeVars, UnboundFrameArguments) {
  LambdaExpr e = Abstraction{{v("a")}, {}, conj({frame("direct-01", {v("v"), v("a"), v("m")})})};
  EXPECT_EQ(free_vars(e), (std::set<Var>{v("v"), v("m")}));
}

TEST(FreeVars, ConstantsAreNotVariables) {
  LambdaExpr e = Abstraction{{v("a")}, {v("v")},
                             conj({frame("release-01", {v("v"), Const{"Titanic"}, v("a")})})};
  EXPECT_TRUE(free_vars(e).empty());
}

TEST(FreeVars, BeforeRuleClosed) {
  EXPECT_TRUE(free_vars(LambdaExpr{before_shape()}).empty());
}

TEST(Validate, WellFormedCount) {
  LambdaExpr e = Count{Abstraction{{v("v0")}, {v("v")}, conj({frame("frame", {v("v"), v("v0")})})}};
  EXPECT_TRUE(validate(e).empty());
}

TEST(Validate, KeyBindsWrongTargetVar) {
  auto e = before_shape();
  e.key.bound[0] = v("b");
  auto violations = validate(LambdaExpr{e});
  ASSERT_FALSE(violations.empty());
  EXPECT_EQ(violations[0].message, "key binds wrong target var");
  EXPECT_EQ(violations[0].path, "key.bound");
}

TEST(Validate, EmptyTerm) {
  LambdaExpr e = Abstraction{{v("a")}, {}, Term{}};
  auto violations = validate(e);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].path, "body");
  EXPECT_EQ(violations[0].message, "empty term");
}

TEST(Validate, ReportsEveryViolation) {
  Abstraction inner{{v("a")}, {}, conj({OverlapPred{iv("ev"), iv("en")}, frame("f", {v("a"), v("x")})})};
  LambdaExpr e = Extremum{Extreme::Min, inner, -1, 0};
  auto violations = validate(e);
  std::vector<std::string> messages;
  for (const auto& x : violations) messages.push_back(x.path + ": " + x.message);
  EXPECT_EQ(messages, (std::vector<std::string>{
                          "offset: offset must be non-negative",
                          "limit: limit must be positive",
                          "inner.body: unbound variable 'x'",
                          "expr: interval variable 'ev' is never defined",
                          "expr: interval variable 'en' is never defined"}));
}

TEST(Validate, IntervalNamesDisjointFromVars) {
  LambdaExpr e = Abstraction{{v("a")}, {v("e")}, conj({frame("f", {v("e"), v("a")}),
                                                       IntervalPred{iv("e"), v("a")}})};
  auto violations = validate(e);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].message, "interval variable 'e' clashes with a variable");
}

TEST(Validate, NestedPathAndDate) {
  Term inner = conj({DatePred{iv("en"), {2021, 2, 30, DatePrecision::Day}}});
  Term outer = conj({frame("f", {v("a")})});
  outer.children.emplace_back(Box<Term>(inner));
  auto violations = validate(LambdaExpr{Abstraction{{v("a")}, {}, outer}});
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].path, "body[1][0]");
}

TEST(Pretty, CountOverFrame) {
  LambdaExpr e = Count{Abstraction{{v("v0")}, {v("v")}, conj({frame("frame", {v("v"), v("v0")})})}};
  EXPECT_EQ(pretty(e), "count(λv0. frame(v, v0))");
}

TEST(Pretty, ArgmaxAndTemporalPredicates) {
  EXPECT_EQ(pretty(LambdaExpr{before_shape()}),
            "argmax(λa. f(v, a), λa.λev. g(n) ∧ interval(ev, v) ∧ interval(en, n) ∧ "
            "before(ev, en), 0, 1)");
  EXPECT_EQ(pretty(Predicate{NowPred{iv("en")}}), "interval(en, now())");
  EXPECT_EQ(pretty(Predicate{DatePred{iv("en"), {1997, 12, 19, DatePrecision::Day}}}),
            "interval(en, date(\"19-12-1997\"))");
  EXPECT_EQ(pretty(Predicate{TeenagerPred{iv("en"), v("n")}}), "teenager(en, n)");
  EXPECT_EQ(pretty(Predicate{CmpPred{v("vn"), v("vm"), CmpOp::Greater}}), "cmp(vn, vm, >)");
  EXPECT_EQ(pretty(Predicate{frame("star-01", {v("s"), Const{"Leonardo DiCaprio"}})}),
            "star-01(s, \"Leonardo DiCaprio\")");
}

TEST(Pretty, DisjunctionAndNesting) {
  Term t{Connective::Or, {}};
  t.children.emplace_back(Predicate{frame("f", {v("a")})});
  t.children.emplace_back(Predicate{frame("g", {v("a")})});
  Term outer = conj({frame("h", {v("a")})});
  outer.children.emplace_back(Box<Term>(t));
  EXPECT_EQ(pretty(LambdaExpr{Abstraction{{v("a")}, {}, outer}}), "λa. h(a) ∧ (f(a) ∨ g(a))");
  EXPECT_EQ(pretty(LambdaExpr{BooleanQuery{{}, conj({frame("f", {Const{"x"}})})}}),
            "boolean(f(\"x\"))");
}

TEST(Pretty, Deterministic) {
  LambdaExpr a = before_shape();
  LambdaExpr b = before_shape();
  EXPECT_EQ(pretty(a), pretty(b));
}

TEST(LambdaJson, RoundTripAllForms) {
  std::vector<LambdaExpr> exprs;
  exprs.push_back(before_shape());
  auto min = before_shape();
  min.kind = Extreme::Min;
  min.offset = 2;
  exprs.push_back(min);
  exprs.push_back(Count{before_shape().target});
  exprs.push_back(Extremum{Extreme::Max, before_shape().target, 0, 1});
  Term body = conj({DatePred{iv("en"), {1990, 3, 1, DatePrecision::Month}}, NowPred{iv("ev")},
                    OverlapPred{iv("ev"), iv("en")}, AfterPred{iv("ev"), iv("en")},
                    TeenagerPred{iv("et"), Const{"Douglas Bravo"}},
                    CmpPred{v("x"), v("y"), CmpOp::Less}, CoordinatePred{v("c"), v("x")},
                    SouthPred{v("c"), v("y")}});
  body.children.emplace_back(Box<Term>(Term{Connective::Or, {Predicate{frame("f", {v("x")})}}}));
  exprs.push_back(BooleanQuery{{v("x"), v("y"), v("c")}, body});
  for (const auto& e : exprs) {
    auto j = to_json(e);
    EXPECT_EQ(lambda_from_json(j), e) << j.dump();
    EXPECT_EQ(lambda_from_json(nlohmann::json::parse(j.dump())), e);
  }
}

TEST(LambdaJson, RejectsMalformed) {
  EXPECT_THROW(lambda_from_json(nlohmann::json{{"type", "Nope"}}), FormatError);
  EXPECT_THROW(lambda_from_json(nlohmann::json{{"type", "Count"}}), FormatError);
  EXPECT_THROW(lambda_from_json(nlohmann::json::parse(
                   R"({"type":"Abstraction","bound":[{"var":"a"}],"body":{"children":[{"type":"Bogus"}]}})")),
               FormatError);
}

TEST(CalendarDate, Formatting) {
  EXPECT_EQ(to_string(CalendarDate{1997, 12, 19, DatePrecision::Day}), "19-12-1997");
  EXPECT_EQ(to_string(CalendarDate{1997, 2, 1, DatePrecision::Month}), "02-1997");
  EXPECT_EQ(to_string(CalendarDate{1997, 1, 1, DatePrecision::Year}), "1997");
}

}  // namespace
