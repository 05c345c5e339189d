#include "kbqa/translate.hpp"

#include <gtest/gtest.h>

#include "kbqa/error.hpp"

using namespace kbqa;
using namespace kbqa::translate;

namespace {

TranslateResult run(const std::string& penman, const TranslateOptions& opts = {}) {
  return translate::translate(amr::parse_penman(penman), opts);
}

std::string shape(const std::string& penman, const TranslateOptions& opts = {}) {
  return lambda::pretty(run(penman, opts).expr);
}

std::vector<std::string> names(const TranslateResult& r) {
  std::vector<std::string> out;
  for (const auto& id : r.rule_ids()) out.push_back(id.name);
  return out;
}

// One test per translation rule (the spatial rule is covered by
// Unsupported.SpatialRow).

TEST(RuleTable, BaseFrame) {
  EXPECT_EQ(shape("(v / win-01 :arg0 (v0 / team) :arg1 (v1 / cup :arg1-of (w / win-01 :arg0 (t / team))))"),
            "boolean(win-01(v, v0, v1) ∧ win-01(w, t, v1))");
}

TEST(RuleTable, BaseProjection) {
  EXPECT_EQ(shape("(v / direct-01 :arg0 (a / amr-unknown) :arg1 (m / movie :name (n / name :op1 \"Titanic\")))"),
            "λa. direct-01(v, a, \"Titanic\")");
}

TEST(RuleTable, NumericalCount) {
  EXPECT_EQ(shape("(v / play-01 :arg0 (v0 / team :quant (a / amr-unknown)) :arg1 (g / game))"),
            "count(λv0. play-01(v, v0, g))");
}

TEST(RuleTable, NumericalFirst) {
  EXPECT_EQ(shape("(v / win-01 :arg0 (a / amr-unknown) :arg1 (c / cup) :mod (f / first))"),
            "min(λa. win-01(v, a, c), 0, 1)");
}

TEST(RuleTable, NumericalLast) {
  EXPECT_EQ(shape("(v / win-01 :arg0 (a / amr-unknown) :arg1 (c / cup) :mod (f / last))"),
            "max(λa. win-01(v, a, c), 0, 1)");
}

constexpr const char* kQuant =
    "(v / have-03 :arg0 (v0 / country :mod (a / amr-unknown)) :arg1 (vn / populate-01 "
    ":arg1-of (h2 / have-quant-91 :arg3 (l / %s))))";

std::string with(const char* fmt, const char* word) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, word);
  return buf;
}

TEST(RuleTable, NumericalMost) {
  EXPECT_EQ(shape(with(kQuant, "most")),
            "argmax(λv0. have-03(v, v0, vn) ∧ populate-01(vn), λv0.λvn. have-03(v, v0, vn) ∧ "
            "populate-01(vn), 0, 1)");
}

TEST(RuleTable, NumericalLeast) {
  EXPECT_EQ(shape(with(kQuant, "least")),
            "argmin(λv0. have-03(v, v0, vn) ∧ populate-01(vn), λv0.λvn. have-03(v, v0, vn) ∧ "
            "populate-01(vn), 0, 1)");
}

constexpr const char* kDegree =
    "(v / have-03 :arg0 (a / amr-unknown) :arg1 (vn / height :arg1-of (h2 / have-degree-91 "
    ":arg3 (m / %s) :arg4 (vm / height :arg1-of (n / have-03 :arg0 (e / mountain :name "
    "(nm / name :op1 \"Everest\")))))))";

TEST(RuleTable, NumericalMore) {
  EXPECT_EQ(shape(with(kDegree, "more")),
            "λa. have-03(v, a, vn) ∧ have-03(n, \"Everest\", vm) ∧ cmp(vn, vm, >)");
}

TEST(RuleTable, NumericalLess) {
  EXPECT_EQ(shape(with(kDegree, "less")),
            "λa. have-03(v, a, vn) ∧ have-03(n, \"Everest\", vm) ∧ cmp(vn, vm, <)");
}

TEST(RuleTable, TemporalWhen) {
  EXPECT_EQ(shape("(v / release-01 :arg1 (v0 / movie :name (n / name :op1 \"Titanic\")) :time (a / amr-unknown))"),
            "λev. release-01(v, \"Titanic\") ∧ interval(ev, v)");
}

constexpr const char* kNested =
    "(v / win-01 :arg0 (a / amr-unknown) :arg1 (c / cup) :time (b / %s :op1 (n / die-01 "
    ":arg1 (p / person :name (nm / name :op1 \"X\")))))";

TEST(RuleTable, TemporalBefore) {
  EXPECT_EQ(shape(with(kNested, "before")),
            "argmax(λa. win-01(v, a, c), λa.λev. die-01(n, \"X\") ∧ interval(ev, v) ∧ "
            "interval(en, n) ∧ before(ev, en), 0, 1)");
}

TEST(RuleTable, TemporalAfter) {
  EXPECT_EQ(shape(with(kNested, "after")),
            "argmin(λa. win-01(v, a, c), λa.λev. die-01(n, \"X\") ∧ interval(ev, v) ∧ "
            "interval(en, n) ∧ after(ev, en), 0, 1)");
}

TEST(RuleTable, TemporalOverlap) {
  EXPECT_EQ(shape("(v / win-01 :arg0 (a / amr-unknown) :arg1 (c / cup) :time (n / die-01 "
                  ":arg1 (p / person :name (nm / name :op1 \"X\"))))"),
            "λa. win-01(v, a, c) ∧ die-01(n, \"X\") ∧ interval(ev, v) ∧ interval(en, n) ∧ "
            "overlap(ev, en)");
}

TEST(RuleTable, TemporalOrdinal) {
  auto amr = "(v / win-01 :arg0 (a / amr-unknown) :arg1 (c / cup) :ord (o / ordinal-entity :value 2))";
  EXPECT_EQ(shape(amr), "argmin(λa. win-01(v, a, c), λa.λev. interval(ev, v), 1, 1)");
  TranslateOptions literal;
  literal.ordinal_offset_mode = OrdinalOffsetMode::PaperLiteral;
  EXPECT_EQ(shape(amr, literal), "argmin(λa. win-01(v, a, c), λa.λev. interval(ev, v), 3, 1)");
}

TEST(RuleTable, TemporalOrdinalLast) {
  EXPECT_EQ(shape("(v / win-01 :arg0 (a / amr-unknown) :arg1 (c / cup) :ord (o / ordinal-entity :value -1))"),
            "argmax(λa. win-01(v, a, c), λa.λev. interval(ev, v), 0, 1)");
}

TEST(RuleTable, TemporalNow) {
  EXPECT_EQ(shape("(v / win-01 :arg0 (a / amr-unknown) :arg1 (c / cup) :time (n / now))"),
            "λa. win-01(v, a, c) ∧ interval(ev, v) ∧ interval(en, now()) ∧ overlap(ev, en)");
}

TEST(RuleTable, TemporalDate) {
  EXPECT_EQ(shape("(v / win-01 :arg0 (a / amr-unknown) :arg1 (c / cup) :time (n / date-entity "
                  ":month 12 :day 19 :year 1997))"),
            "λa. win-01(v, a, c) ∧ interval(en, date(\"19-12-1997\")) ∧ interval(ev, v) ∧ "
            "overlap(ev, en)");
}

TEST(RuleTable, TemporalTeenager) {
  EXPECT_EQ(shape("(v / win-01 :arg0 (a / amr-unknown) :arg1 (c / cup) :time (t / teenager "
                  ":domain (n / person :name (nm / name :op1 \"X\"))))"),
            "λa. win-01(v, a, c) ∧ interval(ev, v) ∧ teenager(en, \"X\") ∧ overlap(ev, en)");
}

// ---- behaviour beyond the table ----

TEST(Translate, WorkedExamples) {
  EXPECT_EQ(shape("(h / have-org-role-91 :arg0 (a / amr-unknown) :arg2 (p / president :name (n / name :op1 \"US\" :op2 \"president\")) :time (w / war :name (n2 / name :op1 \"Cold\" :op2 \"War\")))"),
            "λa. have-org-role-91(h, a, \"US president\") ∧ interval(eh, h) ∧ "
            "interval(ew, \"Cold War\") ∧ overlap(eh, ew)");
  EXPECT_EQ(shape("(m / movie :mod (a / amr-unknown) :arg1-of (d / direct-01 :arg0 (p / person :name (n / name :op1 \"James\" :op2 \"Cameron\"))) :arg1-of (s / star-01 :arg0 (p2 / person :name (n2 / name :op1 \"Leonardo\" :op2 \"DiCaprio\"))))"),
            "λm. direct-01(d, \"James Cameron\", m) ∧ star-01(s, \"Leonardo DiCaprio\", m)");
}

TEST(Translate, AppliedRulesInOrder) {
  auto r = run(with(kNested, "before"));
  EXPECT_EQ(names(r), (std::vector<std::string>{"temporal.before", "base.frame", "base.frame",
                                                "base.projection"}));
  EXPECT_EQ(r.applied.front().node, "b");
  EXPECT_EQ(r.applied.front().rule.family, Family::Temporal);
}

TEST(Translate, TraceJsonLines) {
  auto r = run("(v / direct-01 :arg0 (a / amr-unknown))");
  EXPECT_EQ(trace_jsonl(r),
            "{\"family\":\"BASE\",\"node\":\"v\",\"rule\":\"base.frame\"}\n"
            "{\"family\":\"BASE\",\"node\":\"a\",\"rule\":\"base.projection\"}\n");
}

TEST(Translate, SynonymsTriggerBefore) {
  for (const char* word : {"prior", "precede"}) {
    auto r = run(with(kNested, word));
    EXPECT_EQ(r.rule_ids().front().name, "temporal.before") << word;
  }
  TranslateOptions custom;
  custom.teenager_concepts.insert("adolescent");
  EXPECT_EQ(run("(v / win-01 :arg0 (a / amr-unknown) :time (t / adolescent :domain (n / person)))",
                custom)
                .rule_ids()
                .front()
                .name,
            "temporal.teenager");
}

TEST(Translate, BooleanWithoutUnknown) {
  auto r = run("(v / star-01 :arg0 (p / person :name (n / name :op1 \"X\")) :arg1 (m / movie :name (n2 / name :op1 \"Y\")))");
  EXPECT_TRUE(std::holds_alternative<lambda::BooleanQuery>(r.expr));
  EXPECT_EQ(names(r).back(), "base.boolean");
}

TEST(Translate, ExtraUnknownsAreExistential) {
  auto r = run("(v / give-01 :arg0 (a / amr-unknown) :arg1 (b / amr-unknown) :arg2 (c / person))");
  const auto& abs = std::get<lambda::Abstraction>(r.expr);
  EXPECT_EQ(lambda::pretty(r.expr), "λa. give-01(v, a, b, c)");
  EXPECT_EQ(abs.exists, (std::vector<lambda::Var>{{"v"}, {"b"}, {"c"}}));
  EXPECT_TRUE(lambda::free_vars(r.expr).empty());
}

TEST(Translate, InverseWrittenEdgesMatch) {
  // have-quant-91 pointing at vn rather than vn pointing at it.
  auto r = run("(v / have-03 :arg0 (v0 / country :mod (a / amr-unknown)) :arg1 (vn / populate-01)"
               " :mod (h2 / have-quant-91 :arg1 vn :arg3 (l / most)))");
  EXPECT_EQ(r.rule_ids().front().name, "numerical.most");
}

TEST(Translate, IntervalNamesAvoidAmrVariables) {
  EXPECT_EQ(shape("(v / win-01 :arg0 (a / amr-unknown) :arg1 (ev / cup) :time (n / now))"),
            "λa. win-01(v, a, ev) ∧ interval(evi, v) ∧ interval(en, now()) ∧ overlap(evi, en)");
}

TEST(Translate, PartialDates) {
  EXPECT_EQ(shape("(v / win-01 :arg0 (a / amr-unknown) :time (d / date-entity :year 1990))"),
            "λa. win-01(v, a) ∧ interval(ed, date(\"1990\")) ∧ interval(ev, v) ∧ overlap(ev, ed)");
  EXPECT_THROW(run("(v / win-01 :arg0 (a / amr-unknown) :time (d / date-entity :month 2 :day 30 :year 1990))"),
               UnsupportedConstruct);
  EXPECT_THROW(run("(v / win-01 :arg0 (a / amr-unknown) :time (d / date-entity :day 3))"),
               UnsupportedConstruct);
}

TEST(Unsupported, SpatialRow) {
  try {
    run("(b / be-located-at-91 :arg0 (a / amr-unknown) :mod (s / south) :op1 (n / city))");
    FAIL();
  } catch (const UnsupportedConstruct& e) {
    EXPECT_EQ(e.details()["node"], "b");
    EXPECT_EQ(e.details()["concept"], "be-located-at-91");
  }
  for (const auto& r : rule_inventory()) EXPECT_EQ(r.id.name.find("spatial"), std::string::npos);
}

TEST(Unsupported, OtherConstructs) {
  EXPECT_THROW(run("(v / win-01 :arg0 (a / amr-unknown) :ord (o / ordinal-entity :value -2))"),
               UnsupportedConstruct);
  EXPECT_THROW(run("(v / win-01 :arg0 (a / amr-unknown) :time (b / before))"), UnsupportedConstruct);
  EXPECT_THROW(run("(v / win-01 :arg0 (a / amr-unknown) :arg1 (h / have-degree-91 :arg3 (m / more)))"),
               UnsupportedConstruct);
  EXPECT_THROW(run("(v / win-01 :arg0 (a / amr-unknown) :mod (f / first) :mod (l / last))"),
               UnsupportedConstruct);
  EXPECT_THROW(run("(v / win-01 :arg0 (p / person) :mod (f / first))"), UnsupportedConstruct);
  EXPECT_THROW(run("(a / amr-unknown)"), UnsupportedConstruct);
}

TEST(Inventory, OrderAndContents) {
  const auto& inv = rule_inventory();
  auto rank = [](Family f) { return f == Family::Temporal ? 0 : f == Family::Numerical ? 1 : 2; };
  for (std::size_t i = 1; i < inv.size(); ++i)
    EXPECT_LE(rank(inv[i - 1].id.family), rank(inv[i].id.family));
  auto has = [&](const std::string& n) {
    return std::any_of(inv.begin(), inv.end(), [&](const RuleEntry& r) { return r.id.name == n; });
  };
  EXPECT_TRUE(has("temporal.before"));
  EXPECT_TRUE(has("temporal.ordinal.last"));
  EXPECT_TRUE(has("numerical.count"));
  EXPECT_EQ(inv.size(), 19u);
}

TEST(Translate, DeterministicAndValid) {
  std::vector<std::string> corpus = {with(kQuant, "most"), with(kDegree, "less"),
                                     with(kNested, "after"),
                                     "(v / win-01 :arg0 (a / amr-unknown) :time (n / now) :time "
                                     "(d / date-entity :year 2000))"};
  for (const auto& amr : corpus) {
    auto a = run(amr);
    auto b = run(amr);
    EXPECT_EQ(a.expr, b.expr);
    EXPECT_EQ(a.applied, b.applied);
    EXPECT_TRUE(lambda::validate(a.expr).empty()) << amr;
    auto round = translate::translate(amr::parse_penman(amr::serialize_penman(amr::parse_penman(amr))));
    EXPECT_EQ(round.expr, a.expr);
  }
}

}  // namespace
