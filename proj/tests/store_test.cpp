#include "kbqa/store.hpp"

#include <gtest/gtest.h>

#include "generators.hpp"
#include "kbqa/error.hpp"
#include "kbqa/kb.hpp"
#include "support.hpp"

using namespace kbqa;
using namespace kbqa::store;
using kbqa::test::fixture;

namespace {

const rdf::DateTime kNow{2024, 1, 1};
const std::string kXsdDt = "<http://www.w3.org/2001/XMLSchema#dateTime>";

const TripleStore& wikidata() {
  static const auto s = load_ntriples_file(fixture("wikidata.nt"));
  return s;
}

sparql::Query wq(const std::string& text) {
  return sparql::parse(text, kb::KbProfile::wikidata().prefixes);
}

std::vector<std::string> column(const Results& r, const std::string& var) {
  std::vector<std::string> out;
  for (const auto& row : r.rows) {
    auto it = row.find(var);
    out.push_back(it == row.end() ? "" : it->second.value);
  }
  return out;
}

// ---- loading ----

TEST(LoadNTriples, SingleTypedTriple) {
  auto s = load_ntriples("<http://www.wikidata.org/entity/Q44578> "
                         "<http://www.wikidata.org/prop/direct/P577> "
                         "\"1997-12-19T00:00:00Z\"^^" + kXsdDt + " .\n");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.triples()[0][2], rdf::Term::literal("1997-12-19T00:00:00Z", rdf::xsd("dateTime")));
}

TEST(LoadNTriples, DuplicateLinesCollapse) {
  std::string line = "<http://a> <http://p> <http://b> .\n";
  EXPECT_EQ(load_ntriples(line + line + "# comment\n\n" + line).size(), 1u);
}

TEST(LoadNTriples, MalformedLiteralReportsLine) {
  try {
    load_ntriples("<http://a> <http://p> <http://b> .\n"
                  "<http://a> <http://p> \"1997-13-40T00:00:00Z\"^^" + kXsdDt + " .\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(load_ntriples("<http://a> <http://p> \"x\"^^<http://www.w3.org/2001/XMLSchema#integer> ."),
               ParseError);
  EXPECT_THROW(load_ntriples("\"lit\" <http://p> <http://b> ."), ParseError);
  EXPECT_THROW(load_ntriples("<http://a> <http://p> <http://b>"), ParseError);
}

TEST(LoadNTriples, EscapesLangTagsAndBlankNodes) {
  auto s = load_ntriples("_:b1 <http://p> \"a\\\"b\\u00e9\"@en .\n_:b1 <http://q> \"x\\ty\" .");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(load_ntriples(s.to_ntriples()).triples(), s.triples());
  auto t = s.triples();
  EXPECT_EQ(t[0][2].lang, "en");
  EXPECT_EQ(t[0][2].value, "a\"b\xc3\xa9");
}

TEST(LoadNTriples, FixtureIsDeskScale) {
  EXPECT_GT(wikidata().size(), 0u);
  EXPECT_LE(wikidata().size(), 200u);
}

// ---- evaluation ----

TEST(Eval, TitanicRelease) {
  auto r = eval(wq("SELECT ?a WHERE { wd:Q44578 wdt:P577 ?a }"), wikidata(), kNow);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].at("a"), rdf::Term::literal("1997-12-19T00:00:00Z", rdf::xsd("dateTime")));
}

TEST(Eval, ColdWarSelectsOverlappingPresidents) {
  auto r = eval(wq("SELECT DISTINCT ?a WHERE { ?a wdt:P39 wd:Q11696. ?a p:P39 ?e1. "
                   "?e1 ps:P39 wd:Q11696. ?e1 pq:P580 ?st1. ?e1 pq:P582 ?et1. "
                   "wd:Q8683 wdt:P580 ?st2. wd:Q8683 wdt:P582 ?et2. "
                   "FILTER (?st1 <= ?et2 && ?st2 <= ?et1)}"),
                wikidata(), kNow);
  // Truman (1945-1953) and Reagan (1981-1989); not Roosevelt (to 1945-04-12) or Washington.
  EXPECT_EQ(column(r, "a"), (std::vector<std::string>{"http://www.wikidata.org/entity/Q11613",
                                                      "http://www.wikidata.org/entity/Q9960"}));
}

TEST(Eval, TwoPresidentsOneOverlapping) {
  auto s = load_ntriples(
      "<http://ex/a> <http://ex/held> <http://ex/s1> .\n"
      "<http://ex/s1> <http://ex/start> \"1945-04-12T00:00:00Z\"^^" + kXsdDt + " .\n"
      "<http://ex/s1> <http://ex/end> \"1953-01-20T00:00:00Z\"^^" + kXsdDt + " .\n"
      "<http://ex/b> <http://ex/held> <http://ex/s2> .\n"
      "<http://ex/s2> <http://ex/start> \"1933-03-04T00:00:00Z\"^^" + kXsdDt + " .\n"
      "<http://ex/s2> <http://ex/end> \"1945-04-11T00:00:00Z\"^^" + kXsdDt + " .\n");
  auto q = sparql::parse(
      "PREFIX ex: <http://ex/> PREFIX xsd: <http://www.w3.org/2001/XMLSchema#> "
      "SELECT DISTINCT ?p WHERE { ?p ex:held ?s. ?s ex:start ?st. ?s ex:end ?en. "
      "BIND(\"1947-03-12T00:00:00Z\"^^xsd:dateTime AS ?cs) "
      "BIND(\"1991-12-26T00:00:00Z\"^^xsd:dateTime AS ?ce) "
      "FILTER(?st<=?ce && ?cs<=?en) }");
  auto r = eval(q, s, kNow);
  EXPECT_EQ(column(r, "p"), std::vector<std::string>{"http://ex/a"});
  EXPECT_EQ(r, eval_bruteforce(q, s, kNow));
}

TEST(Eval, AskOnEmptyStoreIsFalse) {
  auto q = sparql::parse("ASK { ?s <http://p> ?o }");
  EXPECT_FALSE(eval(q, TripleStore(), kNow).boolean);
  EXPECT_TRUE(eval(q, load_ntriples("<http://s> <http://p> <http://o> ."), kNow).boolean);
}

TEST(Eval, OffsetBeyondResultsIsEmpty) {
  auto q = wq("SELECT ?a WHERE { ?a wdt:P31 wd:Q5 } OFFSET 1000");
  EXPECT_TRUE(eval(q, wikidata(), kNow).rows.empty());
  EXPECT_TRUE(eval_bruteforce(q, wikidata(), kNow).rows.empty());
}

TEST(Eval, DurationBindClampsLeapDay) {
  auto s = load_ntriples("<http://x> <http://born> \"2000-02-29T00:00:00Z\"^^" + kXsdDt + " .");
  auto q = sparql::parse(
      "PREFIX xsd: <http://www.w3.org/2001/XMLSchema#> SELECT ?t WHERE { <http://x> <http://born> ?b "
      "BIND((?b + \"P13Y\"^^xsd:duration) AS ?t) }");
  for (const auto& r : {eval(q, s, kNow), eval_bruteforce(q, s, kNow)}) {
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_EQ(r.rows[0].at("t").value, "2013-02-28T00:00:00Z");
  }
}

TEST(Eval, NowIsTheInjectedClock) {
  auto q = sparql::parse("SELECT ?t WHERE { ?s <http://p> ?o BIND(now() AS ?t) }");
  auto s = load_ntriples("<http://s> <http://p> <http://o> .");
  auto r = eval(q, s, rdf::DateTime{1999, 12, 31, 23, 59, 59, 0, 0});
  EXPECT_EQ(r.rows.at(0).at("t").value, "1999-12-31T23:59:59Z");
}

TEST(Eval, OrderByComparesInstantsAcrossTimezones) {
  // 10:00+05:00 is 05:00Z, earlier than 06:00Z.
  auto s = load_ntriples("<http://a> <http://t> \"2000-01-01T10:00:00+05:00\"^^" + kXsdDt + " .\n"
                         "<http://b> <http://t> \"2000-01-01T06:00:00Z\"^^" + kXsdDt + " .\n"
                         "<http://c> <http://t> \"2000-01-01T06:00:00Z\"^^" + kXsdDt + " .\n");
  auto q = sparql::parse("SELECT ?x WHERE { ?x <http://t> ?d } ORDER BY (?d)");
  EXPECT_EQ(column(eval(q, s, kNow), "x"),
            (std::vector<std::string>{"http://a", "http://b", "http://c"}));
  q.order->descending = true;
  // Ties keep the canonical order of the row.
  EXPECT_EQ(column(eval(q, s, kNow), "x"),
            (std::vector<std::string>{"http://b", "http://c", "http://a"}));
}

TEST(Eval, CountAndDistinctCount) {
  auto s = load_ntriples("<http://a> <http://p> <http://x> .\n<http://a> <http://p> <http://y> .\n"
                         "<http://b> <http://p> <http://x> .");
  auto all = sparql::parse("SELECT (COUNT(?s) AS ?n) WHERE { ?s <http://p> ?o }");
  auto distinct = sparql::parse("SELECT (COUNT(DISTINCT ?s) AS ?n) WHERE { ?s <http://p> ?o }");
  EXPECT_EQ(eval(all, s, kNow).rows.at(0).at("n"), rdf::Term::integer(3));
  EXPECT_EQ(eval(distinct, s, kNow).rows.at(0).at("n"), rdf::Term::integer(2));
}

TEST(Eval, UnionBranchesContinueWithTheGroup) {
  auto s = load_ntriples("<http://a> <http://p> <http://x> .\n<http://b> <http://q> <http://x> .\n"
                         "<http://x> <http://r> \"1\"^^<http://www.w3.org/2001/XMLSchema#integer> .");
  auto q = sparql::parse(
      "SELECT ?s ?v WHERE { { ?s <http://p> ?o } UNION { ?s <http://q> ?o } ?o <http://r> ?v }");
  auto r = eval(q, s, kNow);
  EXPECT_EQ(column(r, "s"), (std::vector<std::string>{"http://a", "http://b"}));
  EXPECT_EQ(r, eval_bruteforce(q, s, kNow));
}

TEST(Eval, TripleOverBindVariableIsUnsupported) {
  auto q = sparql::parse("SELECT ?x WHERE { BIND(<http://a> AS ?x) ?x <http://p> ?y }");
  EXPECT_THROW(eval(q, TripleStore(), kNow), UnsupportedFeature);
  EXPECT_THROW(eval_bruteforce(q, TripleStore(), kNow), UnsupportedFeature);
}

// ---- results JSON ----

TEST(ResultsJson, RoundTrip) {
  auto r = eval(wq("SELECT ?a ?d WHERE { ?a wdt:P577 ?d }"), wikidata(), kNow);
  auto j = to_json(r);
  EXPECT_EQ(j.at("head").at("vars"), nlohmann::json({"a", "d"}));
  EXPECT_EQ(results_from_json(j), r);
  auto ask = eval(wq("ASK { wd:Q44578 wdt:P57 wd:Q42574 }"), wikidata(), kNow);
  EXPECT_EQ(to_json(ask), nlohmann::json::parse(R"({"head":{},"boolean":true})"));
  EXPECT_EQ(results_from_json(to_json(ask)), ask);
}

TEST(ResultsJson, MalformedDocuments) {
  for (const char* text : {R"([])", R"({"head":{}})", R"({"head":{"vars":[1]},"results":{"bindings":[]}})",
                           R"({"head":{"vars":[]},"results":{"bindings":[{"a":{"type":"weird","value":"x"}}]}})",
                           R"({"boolean":"yes"})"}) {
    EXPECT_THROW(results_from_json(nlohmann::json::parse(text)), MalformedResults) << text;
  }
}

// ---- properties ----

TEST(Oracle, RandomQueriesAgreeWithBruteForce) {
  std::mt19937 rng(20240101);
  auto vocab = test::vocabulary();
  test::QueryGenerator gen(rng, vocab);
  int nonempty = 0;
  for (int i = 0; i < 300; ++i) {
    auto s = test::random_store(rng, vocab, 250);
    auto q = gen();
    auto fast = eval(q, s, kNow);
    auto slow = eval_bruteforce(q, s, kNow);
    ASSERT_EQ(fast, slow) << sparql::render(q) << "\n" << s.to_ntriples();
    if (!fast.rows.empty() || fast.boolean) ++nonempty;
  }
  // The generator must exercise non-trivial answers, not just empty joins.
  EXPECT_GT(nonempty, 100);
}

TEST(Oracle, FixtureWorkedQueriesAgree) {
  for (const char* text : {
           "SELECT ?a WHERE { wd:Q44578 wdt:P577 ?a }",
           "select distinct ?a where {?a wdt:P57 wd:Q42574. ?a wdt:P161 wd:Q38111. }",
           "SELECT DISTINCT ?a WHERE { ?a p:P39 ?e. ?e ps:P39 wd:Q11696. ?e pq:P580 ?st1. "
           "?e pq:P582 ?et1. wd:Q4095606 wdt:P569 ?x. "
           "bind ((?x + \"P13Y\"^^xsd:duration) as ?st2) bind ((?x + \"P19Y\"^^xsd:duration) as ?et2) "
           "FILTER (?st1<=?et2 && ?st2<=?et1) }",
       }) {
    auto q = wq(text);
    EXPECT_EQ(eval(q, wikidata(), kNow), eval_bruteforce(q, wikidata(), kNow)) << text;
  }
}

TEST(Property, AskIsMonotoneUnderAddedTriples) {
  std::mt19937 rng(7);
  auto vocab = test::vocabulary();
  test::QueryGenerator gen(rng, vocab);
  int checked = 0;
  while (checked < 150) {
    auto q = gen();
    if (q.form != sparql::Form::Ask) continue;
    // The subset has no negation or optional parts, so added triples can
    // only add solutions.
    auto base = test::random_store(rng, vocab, 60);
    auto grown = base.triples();
    auto extra = test::random_store(rng, vocab, 60).triples();
    grown.insert(grown.end(), extra.begin(), extra.end());
    if (eval(q, base, kNow).boolean) {
      EXPECT_TRUE(eval(q, TripleStore(grown), kNow).boolean) << sparql::render(q);
    }
    ++checked;
  }
}

// Temporal algebra, evaluated through FILTERs on the store.
struct Interval {
  std::string start, end;
};

bool filter_holds(const std::string& condition, const Interval& i, const Interval& j) {
  auto lit = [](const std::string& d) { return "\"" + d + "T00:00:00Z\"^^xsd:dateTime"; };
  auto q = sparql::parse("PREFIX xsd: <http://www.w3.org/2001/XMLSchema#> ASK { ?s <http://p> ?o "
                         "BIND(" + lit(i.start) + " AS ?iStart) BIND(" + lit(i.end) + " AS ?iEnd) "
                         "BIND(" + lit(j.start) + " AS ?jStart) BIND(" + lit(j.end) + " AS ?jEnd) "
                         "FILTER(" + condition + ") }");
  static const auto s = load_ntriples("<http://s> <http://p> <http://o> .");
  return eval(q, s, kNow).boolean;
}

const char* kOverlapIJ = "?iStart<=?jEnd && ?jStart<=?iEnd";
const char* kOverlapJI = "?jStart<=?iEnd && ?iStart<=?jEnd";
const char* kBeforeIJ = "?iEnd<=?jStart";
const char* kAfterJI = "?jStart>=?iEnd";

Interval random_interval(std::mt19937& rng) {
  auto day = [&] {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", test::uniform(rng, 1990, 1995),
                  test::uniform(rng, 1, 12), test::uniform(rng, 1, 28));
    return std::string(buf);
  };
  auto a = day(), b = day();
  if (b < a) std::swap(a, b);
  return {a, b};
}

TEST(TemporalAlgebra, OverlapIsReflexiveAndSymmetric) {
  std::mt19937 rng(11);
  for (int n = 0; n < 100; ++n) {
    auto i = random_interval(rng), j = random_interval(rng);
    EXPECT_TRUE(filter_holds(kOverlapIJ, i, i));
    EXPECT_EQ(filter_holds(kOverlapIJ, i, j), filter_holds(kOverlapJI, i, j));
    EXPECT_EQ(filter_holds(kOverlapIJ, i, j), filter_holds(kOverlapIJ, j, i));
  }
}

TEST(TemporalAlgebra, BeforeAndAfterAreConverses) {
  std::mt19937 rng(12);
  for (int n = 0; n < 100; ++n) {
    auto i = random_interval(rng), j = random_interval(rng);
    EXPECT_EQ(filter_holds(kBeforeIJ, i, j), filter_holds(kAfterJI, i, j));
    // A strict gap rules out overlap.
    if (i.end < j.start) EXPECT_FALSE(filter_holds(kOverlapIJ, i, j));
  }
}

TEST(TemporalAlgebra, TouchingIntervalsAreBeforeAndOverlapping) {
  Interval i{"1990-01-01", "1990-06-01"}, j{"1990-06-01", "1991-01-01"};
  EXPECT_TRUE(filter_holds(kBeforeIJ, i, j));
  EXPECT_TRUE(filter_holds(kOverlapIJ, i, j));
}

}  // namespace
