#pragma once

// Golden rows for the AMR-to-lambda and KB-specific translation rules,
// checked by the acceptance binary.

#include <string>
#include <vector>

#include "kbqa/grounder.hpp"
#include "kbqa/kb.hpp"
#include "kbqa/translate.hpp"

namespace kbqa::test {

struct LambdaGolden {
  std::string rule;
  std::string penman;
  std::string expected;  // lambda::pretty
  translate::OrdinalOffsetMode ordinal = translate::OrdinalOffsetMode::ZeroBased;
};

struct KbGolden {
  std::string rule;
  std::string penman;  // AMR text, or "fixture:<name>" for a worked example
  std::vector<std::string> fragments;  // substrings of the rendered SPARQL
};

inline std::string fill(const std::string& fmt, const std::string& word) {
  auto at = fmt.find("%s");
  return fmt.substr(0, at) + word + fmt.substr(at + 2);
}

inline const std::string kQuantAmr =
    "(v / have-03 :arg0 (v0 / country :mod (a / amr-unknown)) :arg1 (vn / populate-01 "
    ":arg1-of (h2 / have-quant-91 :arg3 (l / %s))))";
inline const std::string kDegreeAmr =
    "(v / have-03 :arg0 (a / amr-unknown) :arg1 (vn / height :arg1-of (h2 / have-degree-91 "
    ":arg3 (m / %s) :arg4 (vm / height :arg1-of (n / have-03 :arg0 (e / mountain :name "
    "(nm / name :op1 \"Everest\")))))))";
inline const std::string kNestedAmr =
    "(v / win-01 :arg0 (a / amr-unknown) :arg1 (c / cup) :time (b / %s :op1 (n / die-01 "
    ":arg1 (p / person :name (nm / name :op1 \"X\")))))";
inline const std::string kOrdinalAmr =
    "(v / win-01 :arg0 (a / amr-unknown) :arg1 (c / cup) :ord (o / ordinal-entity :value %s))";
inline const std::string kNowAmr = "(v / win-01 :arg0 (a / amr-unknown) :arg1 (c / cup) :time (n / now))";
inline const std::string kDateAmr =
    "(v / win-01 :arg0 (a / amr-unknown) :arg1 (c / cup) :time (n / date-entity :month 12 :day 19 "
    ":year 1997))";
inline const std::string kCountAmr = "(v / play-01 :arg0 (v0 / team :quant (a / amr-unknown)) :arg1 (g / game))";
inline const std::string kBooleanAmr =
    "(v / win-01 :arg0 (v0 / team) :arg1 (v1 / cup :arg1-of (w / win-01 :arg0 (t / team))))";

inline std::vector<LambdaGolden> lambda_goldens() {
  using M = translate::OrdinalOffsetMode;
  return {
      {"base/frame", kBooleanAmr, "boolean(win-01(v, v0, v1) ∧ win-01(w, t, v1))"},
      {"base/projection",
       "(v / direct-01 :arg0 (a / amr-unknown) :arg1 (m / movie :name (n / name :op1 \"Titanic\")))",
       "λa. direct-01(v, a, \"Titanic\")"},
      {"numerical/count", kCountAmr, "count(λv0. play-01(v, v0, g))"},
      {"numerical/first", "(v / win-01 :arg0 (a / amr-unknown) :arg1 (c / cup) :mod (f / first))",
       "min(λa. win-01(v, a, c), 0, 1)"},
      {"numerical/last", "(v / win-01 :arg0 (a / amr-unknown) :arg1 (c / cup) :mod (f / last))",
       "max(λa. win-01(v, a, c), 0, 1)"},
      {"numerical/most", fill(kQuantAmr, "most"),
       "argmax(λv0. have-03(v, v0, vn) ∧ populate-01(vn), λv0.λvn. have-03(v, v0, vn) ∧ "
       "populate-01(vn), 0, 1)"},
      {"numerical/least", fill(kQuantAmr, "least"),
       "argmin(λv0. have-03(v, v0, vn) ∧ populate-01(vn), λv0.λvn. have-03(v, v0, vn) ∧ "
       "populate-01(vn), 0, 1)"},
      {"numerical/more", fill(kDegreeAmr, "more"),
       "λa. have-03(v, a, vn) ∧ have-03(n, \"Everest\", vm) ∧ cmp(vn, vm, >)"},
      {"numerical/less", fill(kDegreeAmr, "less"),
       "λa. have-03(v, a, vn) ∧ have-03(n, \"Everest\", vm) ∧ cmp(vn, vm, <)"},
      {"temporal/when",
       "(v / release-01 :arg1 (v0 / movie :name (n / name :op1 \"Titanic\")) :time (a / amr-unknown))",
       "λev. release-01(v, \"Titanic\") ∧ interval(ev, v)"},
      {"temporal/before", fill(kNestedAmr, "before"),
       "argmax(λa. win-01(v, a, c), λa.λev. die-01(n, \"X\") ∧ interval(ev, v) ∧ interval(en, n) ∧ "
       "before(ev, en), 0, 1)"},
      {"temporal/after", fill(kNestedAmr, "after"),
       "argmin(λa. win-01(v, a, c), λa.λev. die-01(n, \"X\") ∧ interval(ev, v) ∧ interval(en, n) ∧ "
       "after(ev, en), 0, 1)"},
      {"temporal/overlap",
       "(v / win-01 :arg0 (a / amr-unknown) :arg1 (c / cup) :time (n / die-01 :arg1 (p / person "
       ":name (nm / name :op1 \"X\"))))",
       "λa. win-01(v, a, c) ∧ die-01(n, \"X\") ∧ interval(ev, v) ∧ interval(en, n) ∧ overlap(ev, en)"},
      {"temporal/ordinal", fill(kOrdinalAmr, "2"), "argmin(λa. win-01(v, a, c), λa.λev. interval(ev, v), 1, 1)"},
      {"temporal/ordinal (literal offset)", fill(kOrdinalAmr, "2"),
       "argmin(λa. win-01(v, a, c), λa.λev. interval(ev, v), 3, 1)", M::PaperLiteral},
      {"temporal/ordinal last", fill(kOrdinalAmr, "-1"),
       "argmax(λa. win-01(v, a, c), λa.λev. interval(ev, v), 0, 1)"},
      {"temporal/now", kNowAmr, "λa. win-01(v, a, c) ∧ interval(ev, v) ∧ interval(en, now()) ∧ overlap(ev, en)"},
      {"temporal/date", kDateAmr,
       "λa. win-01(v, a, c) ∧ interval(en, date(\"19-12-1997\")) ∧ interval(ev, v) ∧ overlap(ev, en)"},
      {"temporal/teenager",
       "(v / win-01 :arg0 (a / amr-unknown) :arg1 (c / cup) :time (t / teenager :domain (n / person "
       ":name (nm / name :op1 \"X\"))))",
       "λa. win-01(v, a, c) ∧ interval(ev, v) ∧ teenager(en, \"X\") ∧ overlap(ev, en)"},
  };
}

// Lexicon for the synthetic rule AMRs: reified award statements,
// point-in-time deaths, a plain counted relation.
inline ground::Lexicon golden_lexicon(const kb::KbProfile& kb) {
  return ground::Lexicon::from_json(
      {{"entities", {{"X", "wd:Q1"}, {"Everest", "wd:Q513"}}},
       {"relations",
        {{"win-01", {{"pid", "P166"}, {"reified", true}, {"qualifiers", "point_in_time"}, {"inverse", false}}},
         {"die-01", {{"pid", "P570"}, {"qualifiers", "point_in_time"}}},
         {"play-01", {{"pid", "P1344"}}},
         {"have-03", {{"pid", "P2044"}}}}}},
      kb);
}

inline std::vector<KbGolden> kb_goldens() {
  return {
      {"direct triple", "fixture:titanic_director", {"SELECT DISTINCT ?a WHERE {\n  wd:Q44578 wdt:P57 ?a.\n}\n"}},
      {"reified statement with qualifiers",
       "fixture:cold_war",
       {"  ?a p:P39 ?h.\n  ?h ps:P39 wd:Q11696.\n", "  ?h pq:P580 ?ehStart.\n  ?h pq:P582 ?ehEnd.\n",
        "  wd:Q8683 wdt:P580 ?ewStart.\n  wd:Q8683 wdt:P582 ?ewEnd.\n"}},
      {"overlap", "fixture:cold_war", {"FILTER(?ehStart<=?ewEnd && ?ewStart<=?ehEnd)"}},
      {"before", fill(kNestedAmr, "before"), {"FILTER(?evEnd<=?enStart)", "} ORDER BY DESC(?evStart) LIMIT 1"}},
      {"after", fill(kNestedAmr, "after"), {"FILTER(?evStart>=?enEnd)", "} ORDER BY (?evStart) LIMIT 1"}},
      {"value interval", "fixture:titanic_release", {"BIND (?r AS ?erStart)", "BIND (?r AS ?erEnd)"}},
      {"now", kNowAmr, {"BIND (now() AS ?enStart)", "BIND (now() AS ?enEnd)"}},
      {"date",
       kDateAmr,
       {"BIND (\"1997-12-19T00:00:00Z\"^^xsd:dateTime AS ?enStart)",
        "BIND (\"1997-12-19T00:00:00Z\"^^xsd:dateTime AS ?enEnd)"}},
      {"point-in-time statement", kNowAmr, {"?v pq:P585 ?evStart.", "BIND (?evStart AS ?evEnd)"}},
      {"ordinal", fill(kOrdinalAmr, "2"), {"} ORDER BY (?evStart) LIMIT 1 OFFSET 1"}},
      {"teenager",
       "fixture:douglas_bravo",
       {"wd:Q4095606 wdt:P569 ?ep2Birth.", "BIND ((?ep2Birth + \"P13Y\"^^xsd:duration) AS ?ep2Start)",
        "BIND ((?ep2Birth + \"P19Y\"^^xsd:duration) AS ?ep2End)"}},
      {"count", kCountAmr, {"SELECT (COUNT(?v0) AS ?c) WHERE {"}},
      {"comparison", fill(kDegreeAmr, "more"), {"FILTER(?vn>?vm)"}},
      {"boolean", kBooleanAmr, {"ASK WHERE {"}},
  };
}

}  // namespace kbqa::test
