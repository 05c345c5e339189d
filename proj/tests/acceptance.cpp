// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances are exact unless a runtime budget is stated.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "generators.hpp"
#include "kbqa/evaluation.hpp"
#include "kbqa/sparql_gen.hpp"
#include "rule_goldens.hpp"
#include "support.hpp"

using namespace kbqa;
using test::fixture;

namespace {

constexpr double kWorkedExampleBudgetSeconds = 1.0;
constexpr double kOracleBudgetSeconds = 60.0;
constexpr int kOracleInstances = 120;
constexpr int kOracleMaxTriples = 1000;
const rdf::DateTime kNow{2024, 1, 1};
const std::string kNowText = "2024-01-01T00:00:00Z";

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

const kb::KbProfile& wd() {
  static const auto k = kb::KbProfile::wikidata();
  return k;
}

const store::TripleStore& fixture_store() {
  static const auto s = store::load_ntriples_file(fixture("wikidata.nt"));
  return s;
}

const std::vector<eval::DatasetRecord>& dataset() {
  static const auto d = eval::load_dataset(fixture("dataset.jsonl"));
  return d;
}

sparql::Query emit_with_gold(const eval::DatasetRecord& r) {
  auto lambda = translate::translate(amr::parse_penman(*r.gold_amr)).expr;
  return sparql::emit(ground::ground_with_gold(lambda, *r.gold_grounding, r.profile()), r.profile());
}

Verdict worked_examples() {
  Verdict v;
  auto t0 = Clock::now();
  const auto& s = fixture_store();
  int checked = 0;
  for (const auto& r : dataset()) {
    auto emitted = store::eval(emit_with_gold(r), s, kNow);
    auto gold = store::eval(sparql::parse(r.gold_sparql, r.profile().prefixes), s, kNow);
    auto got = store::answer_terms(emitted), want = store::answer_terms(gold);
    if (std::set<rdf::Term>(got.begin(), got.end()) != std::set<rdf::Term>(want.begin(), want.end()))
      v.fail(r.id + ": result sets differ");
    if (want.empty()) v.fail(r.id + ": gold result set is empty on the fixture");
    ++checked;
  }
  double elapsed = seconds_since(t0);
  if (checked != 5) v.fail("expected 5 worked examples, found " + std::to_string(checked));
  if (s.size() > 200) v.fail("fixture store exceeds 200 triples");
  if (elapsed >= kWorkedExampleBudgetSeconds) v.fail("took " + std::to_string(elapsed) + " s");
  if (v.pass) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d examples, %zu triples, %.3f s", checked, s.size(), elapsed);
    v.detail = buf;
  }
  return v;
}

eval::PipelineContext context(const ground::Lexicon& lex) {
  return {&lex, {}, eval::store_executor(fixture_store(), kNow)};
}

Verdict gt_sparql_row() {
  Verdict v;
  auto report = eval::evaluate(dataset(), {eval::Stage::GtSparql}, {nullptr, {}, eval::store_executor(fixture_store(), kNow)});
  const auto& m = report.macro;
  if (!(m.precision == 1.0 && m.recall == 1.0 && m.f1 == 1.0)) v.fail("macro differs from 1.0");
  char buf[96];
  std::snprintf(buf, sizeof buf, "P=%.4f R=%.4f F1=%.4f", m.precision, m.recall, m.f1);
  if (v.pass) v.detail = buf;
  else v.detail += std::string(" (") + buf + ")";
  return v;
}

Verdict ablation_monotone() {
  Verdict v;
  auto lex = ground::Lexicon::load(fixture("lexicon_corrupted.json"), wd());
  using eval::Stage;
  std::vector<std::set<Stage>> chain{{},
                                     {Stage::GtEl},
                                     {Stage::GtEl, Stage::GtRl},
                                     {Stage::GtEl, Stage::GtRl, Stage::GtKbLambda},
                                     {Stage::GtEl, Stage::GtRl, Stage::GtKbLambda, Stage::GtSparql}};
  std::vector<double> f1;
  for (const auto& overrides : chain) f1.push_back(eval::evaluate(dataset(), overrides, context(lex)).macro.f1);
  std::string trail;
  for (std::size_t i = 0; i < f1.size(); ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%s%.4f", i ? " -> " : "", f1[i]);
    trail += buf;
    if (i > 0 && f1[i] < f1[i - 1]) v.fail("F1 decreases at step " + std::to_string(i));
  }
  if (f1.front() >= 1.0) v.fail("corrupted lexicon does not lower F1");
  v.detail = v.pass ? trail : v.detail + " (" + trail + ")";
  return v;
}

Verdict rule_goldens() {
  Verdict v;
  int rows = 0;
  for (const auto& g : test::lambda_goldens()) {
    translate::TranslateOptions opts;
    opts.ordinal_offset_mode = g.ordinal;
    auto got = lambda::pretty(translate::translate(amr::parse_penman(g.penman), opts).expr);
    if (got != g.expected) v.fail("lambda " + g.rule + ": " + got);
    ++rows;
  }
  auto lex = test::golden_lexicon(wd());
  auto fixture_lex = ground::Lexicon::load(fixture("lexicon.json"), wd());
  for (const auto& g : test::kb_goldens()) {
    std::string rendered;
    if (g.penman.rfind("fixture:", 0) == 0) {
      rendered = sparql::render(
          sparql::emit(ground::ground(test::lambda_of(g.penman.substr(8)), fixture_lex, wd()), wd()));
    } else {
      rendered = sparql::render(sparql::emit(ground::ground(test::lambda_of_text(g.penman), lex, wd()), wd()));
    }
    for (const auto& frag : g.fragments)
      if (rendered.find(frag) == std::string::npos) v.fail("kb " + g.rule + ": missing " + frag);
    ++rows;
  }
  if (v.pass) v.detail = std::to_string(rows) + " rows";
  return v;
}

Verdict oracle_equivalence() {
  Verdict v;
  auto t0 = Clock::now();
  std::mt19937 rng(20240101);
  auto vocab = test::vocabulary();
  test::QueryGenerator gen(rng, vocab);
  int instances = 0, nonempty = 0;
  for (; instances < kOracleInstances && v.pass; ++instances) {
    auto s = test::random_store(rng, vocab, kOracleMaxTriples);
    auto q = gen();
    auto fast = store::eval(q, s, kNow);
    if (fast != store::eval_bruteforce(q, s, kNow)) v.fail("disagree on:\n" + sparql::render(q));
    if (!fast.rows.empty() || fast.boolean) ++nonempty;
  }
  // The emitted queries of the worked examples on the fixture store.
  for (const auto& r : dataset()) {
    auto q = emit_with_gold(r);
    if (store::eval(q, fixture_store(), kNow) != store::eval_bruteforce(q, fixture_store(), kNow))
      v.fail(r.id + ": disagree");
    ++instances;
  }
  double elapsed = seconds_since(t0);
  if (instances < 100) v.fail("only " + std::to_string(instances) + " instances");
  if (nonempty < instances / 4) v.fail("too few non-empty answers: " + std::to_string(nonempty));
  if (elapsed >= kOracleBudgetSeconds) v.fail("took " + std::to_string(elapsed) + " s");
  if (v.pass) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d instances, %d non-empty, %.2f s", instances, nonempty, elapsed);
    v.detail = buf;
  }
  return v;
}

struct Interval {
  std::string start, end;
};

bool filter_holds(const std::string& condition, const Interval& i, const Interval& j) {
  auto lit = [](const std::string& d) { return "\"" + d + "T00:00:00Z\"^^xsd:dateTime"; };
  auto q = sparql::parse("PREFIX xsd: <http://www.w3.org/2001/XMLSchema#> ASK { ?s <http://p> ?o "
                         "BIND(" + lit(i.start) + " AS ?iStart) BIND(" + lit(i.end) + " AS ?iEnd) "
                         "BIND(" + lit(j.start) + " AS ?jStart) BIND(" + lit(j.end) + " AS ?jEnd) "
                         "FILTER(" + condition + ") }");
  static const auto s = store::load_ntriples("<http://s> <http://p> <http://o> .");
  return store::eval(q, s, kNow).boolean;
}

Verdict temporal_algebra() {
  Verdict v;
  const std::string overlap_ij = "?iStart<=?jEnd && ?jStart<=?iEnd";
  const std::string overlap_ji = "?jStart<=?iEnd && ?iStart<=?jEnd";
  const std::string before_ij = "?iEnd<=?jStart";
  const std::string after_ji = "?jStart>=?iEnd";
  std::mt19937 rng(11);
  auto interval = [&] {
    auto day = [&] {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", test::uniform(rng, 1990, 1993), test::uniform(rng, 1, 12),
                    test::uniform(rng, 1, 28));
      return std::string(buf);
    };
    auto a = day(), b = day();
    if (b < a) std::swap(a, b);
    return Interval{a, b};
  };
  int pairs = 0;
  for (; pairs < 200; ++pairs) {
    auto i = interval(), j = interval();
    if (!filter_holds(overlap_ij, i, i)) v.fail("overlap not reflexive");
    if (filter_holds(overlap_ij, i, j) != filter_holds(overlap_ij, j, i)) v.fail("overlap not symmetric");
    if (filter_holds(overlap_ij, i, j) != filter_holds(overlap_ji, i, j)) v.fail("overlap operand order");
    if (filter_holds(before_ij, i, j) != filter_holds(after_ji, i, j)) v.fail("before/after not converse");
  }
  auto leap = *rdf::parse_datetime("2000-02-29T00:00:00Z");
  auto clamped = rdf::format_datetime(rdf::add(leap, *rdf::parse_duration("P13Y")));
  if (clamped != "2013-02-28T00:00:00Z") v.fail("P13Y from 2000-02-29 gave " + clamped);
  auto q = sparql::parse("PREFIX xsd: <http://www.w3.org/2001/XMLSchema#> SELECT ?e WHERE { ?s <http://p> ?o "
                         "BIND((\"2000-02-29T00:00:00Z\"^^xsd:dateTime + \"P13Y\"^^xsd:duration) AS ?e) }");
  auto r = store::eval(q, store::load_ntriples("<http://s> <http://p> <http://o> ."), kNow);
  if (r.rows.size() != 1 || r.rows[0].at("e").value != "2013-02-28T00:00:00Z")
    v.fail("store BIND does not clamp 2000-02-29 + P13Y");
  if (v.pass) v.detail = std::to_string(pairs) + " interval pairs, leap-day clamp";
  return v;
}

Verdict categorizer() {
  Verdict v;
  int labeled = 0;
  for (const auto& r : dataset()) {
    if (r.category == eval::Category::Unlabeled) continue;
    ++labeled;
    auto gold = eval::categorize(sparql::parse(r.gold_sparql, r.profile().prefixes), r.profile());
    auto emitted = eval::categorize(emit_with_gold(r), r.profile());
    if (gold != r.category) v.fail(r.id + ": gold query is " + eval::to_string(gold));
    if (emitted != r.category) v.fail(r.id + ": emitted query is " + eval::to_string(emitted));
  }
  if (labeled != 3) v.fail("expected 3 labeled examples, found " + std::to_string(labeled));
  if (v.pass) v.detail = "SIMPLE/MEDIUM/COMPLEX on gold and emitted queries";
  return v;
}

Verdict determinism() {
  Verdict v;
  auto invoke = [](const std::vector<std::string>& args, const std::string& in_text) {
    std::istringstream in(in_text);
    std::ostringstream out, err;
    int code = cli::run(args, in, out, err);
    return std::make_tuple(code, out.str(), err.str());
  };
  auto amr = fixture("amr/douglas_bravo.amr");
  auto store = fixture("wikidata.nt");
  auto gold_sparql = dataset().back().gold_sparql;
  int runs = 0;
  for (const char* format : {"text", "json"}) {
    std::vector<std::pair<std::vector<std::string>, std::string>> invocations{
        {{"parse", "--amr", amr}, ""},
        {{"translate", "--amr", amr}, ""},
        {{"ground", "--amr", amr, "--lexicon", fixture("lexicon.json")}, ""},
        {{"emit", "--amr", amr, "--lexicon", fixture("lexicon.json")}, ""},
        {{"run", "--amr", amr, "--lexicon", fixture("lexicon.json"), "--store", store}, ""},
        {{"eval", "--gold", fixture("dataset.jsonl"), "--lexicon", fixture("lexicon.json"), "--store", store}, ""},
        {{"categorize"}, gold_sparql},
    };
    for (auto& [args, in_text] : invocations) {
      for (const char* a : {"--now", kNowText.c_str(), "--format", format}) args.push_back(a);
      auto first = invoke(args, in_text), second = invoke(args, in_text);
      if (std::get<0>(first) != 0) v.fail(args[0] + " exited " + std::to_string(std::get<0>(first)) + ": " + std::get<2>(first));
      if (first != second) v.fail(args[0] + " --format " + format + " differs between runs");
      ++runs;
    }
  }
  if (v.pass) v.detail = std::to_string(runs) + " subcommand/format pairs";
  return v;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"worked-example equivalence", worked_examples},
      {"GT_SPARQL ablation row", gt_sparql_row},
      {"ablation monotonicity", ablation_monotone},
      {"rule-table goldens", rule_goldens},
      {"oracle equivalence", oracle_equivalence},
      {"temporal algebra properties", temporal_algebra},
      {"categorizer", categorizer},
      {"CLI determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    if (!v.pass) ++failures;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << "\n";
  }
  return failures == 0 ? 0 : 1;
}
