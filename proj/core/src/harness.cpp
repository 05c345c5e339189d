#include <sstream>

#include "kbqa/amr.hpp"
#include "kbqa/error.hpp"
#include "kbqa/evaluation.hpp"
#include "kbqa/sparql_gen.hpp"

namespace kbqa::eval {

namespace {

const Stage kAllStages[] = {Stage::GtAmr, Stage::GtLambda, Stage::GtEl,
                            Stage::GtRl,  Stage::GtKbLambda, Stage::GtSparql};

const ground::GoldGrounding& gold_grounding(const DatasetRecord& r, Stage stage) {
  if (!r.gold_grounding) throw MissingGoldStage(to_string(stage), r.id);
  const auto& g = *r.gold_grounding;
  if (stage == Stage::GtEl && g.entities.empty()) throw MissingGoldStage(to_string(stage), r.id);
  if (stage == Stage::GtRl && g.relations.empty()) throw MissingGoldStage(to_string(stage), r.id);
  return g;
}

const ground::Lexicon& lexicon(const PipelineContext& ctx) {
  if (!ctx.lexicon) throw InvalidValue("grounding with the lexicon needs a lexicon");
  return *ctx.lexicon;
}

}  // namespace

std::string to_string(Stage s) {
  switch (s) {
    case Stage::GtAmr: return "GT_AMR";
    case Stage::GtLambda: return "GT_LAMBDA";
    case Stage::GtEl: return "GT_EL";
    case Stage::GtRl: return "GT_RL";
    case Stage::GtKbLambda: return "GT_KB_LAMBDA";
    case Stage::GtSparql: return "GT_SPARQL";
  }
  return "";
}

Stage stage_from_string(const std::string& s) {
  for (auto st : kAllStages)
    if (to_string(st) == s) return st;
  throw InvalidValue("unknown stage override '" + s + "'");
}

std::set<Stage> parse_overrides(const std::string& csv) {
  std::set<Stage> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(' ');
    if (b == std::string::npos) continue;
    out.insert(stage_from_string(item.substr(b, item.find_last_not_of(' ') - b + 1)));
  }
  return out;
}

Executor store_executor(const store::TripleStore& s, rdf::DateTime now) {
  return [&s, now](const sparql::Query& q) { return store::eval(q, s, now); };
}

nlohmann::json Trace::to_json() const {
  nlohmann::json j{{"overrides", overrides}};
  if (amr) j["amr"] = *amr;
  if (lambda) j["lambda"] = *lambda;
  if (rules) j["rules"] = *rules;
  if (kb_lambda) j["kb_lambda"] = *kb_lambda;
  if (sparql) j["sparql"] = *sparql;
  if (results) j["results"] = *results;
  return j;
}

PipelineResult run_pipeline(const DatasetRecord& r, const std::set<Stage>& overrides,
                            const PipelineContext& ctx) {
  const auto& kb = r.profile();
  auto has = [&](Stage s) { return overrides.count(s) > 0; };
  PipelineResult out;
  for (auto s : overrides) out.trace.overrides.push_back(to_string(s));

  auto gold_lambda = [&](Stage stage) {
    if (!r.gold_lambda) throw MissingGoldStage(to_string(stage), r.id);
    return lambda::lambda_from_json(*r.gold_lambda);
  };

  auto lambda_stage = [&]() -> lambda::LambdaExpr {
    if (has(Stage::GtLambda)) return gold_lambda(Stage::GtLambda);
    const std::optional<std::string>& penman =
        has(Stage::GtAmr) || !r.amr ? r.gold_amr : r.amr;
    if (!penman) throw MissingGoldStage(to_string(Stage::GtAmr), r.id);
    auto graph = amr::parse_penman(*penman);
    out.trace.amr = amr::to_json(graph);
    auto t = translate::translate(graph, ctx.translate_options);
    out.trace.rules = nlohmann::json::array();
    for (const auto& a : t.applied)
      out.trace.rules->push_back(
          {{"family", translate::to_string(a.rule.family)}, {"rule", a.rule.name}, {"node", a.node}});
    return std::move(t.expr);
  };

  auto kb_lambda_stage = [&]() -> ground::KbLambdaExpr {
    if (has(Stage::GtKbLambda)) {
      auto e = gold_lambda(Stage::GtKbLambda);
      out.trace.lambda = lambda::to_json(e);
      return ground::ground_with_gold(e, gold_grounding(r, Stage::GtKbLambda), kb);
    }
    auto e = lambda_stage();
    out.trace.lambda = lambda::to_json(e);
    ground::Linker link;
    if (has(Stage::GtEl) && has(Stage::GtRl)) {
      gold_grounding(r, Stage::GtEl);
      link = ground::gold_linker(gold_grounding(r, Stage::GtRl));
    } else if (has(Stage::GtEl)) {
      link = {ground::gold_linker(gold_grounding(r, Stage::GtEl)).entity,
              ground::lexicon_linker(lexicon(ctx)).relation};
    } else if (has(Stage::GtRl)) {
      link = {ground::lexicon_linker(lexicon(ctx)).entity,
              ground::gold_linker(gold_grounding(r, Stage::GtRl)).relation};
    } else {
      link = ground::lexicon_linker(lexicon(ctx));
    }
    return ground::ground_with(e, link, kb);
  };

  sparql::Query query;
  if (has(Stage::GtSparql)) {
    query = sparql::parse(r.gold_sparql, kb.prefixes);
  } else {
    auto kbe = kb_lambda_stage();
    out.trace.kb_lambda = ground::to_json(kbe);
    query = sparql::emit(kbe, kb);
  }
  out.trace.sparql = sparql::render(query);
  if (!ctx.execute) throw InvalidValue("no query executor configured");
  auto results = ctx.execute(query);
  out.trace.results = store::to_json(results);
  out.answers = store::answer_terms(results);
  return out;
}

ScoreReport evaluate(const std::vector<DatasetRecord>& records, const std::set<Stage>& overrides,
                     const PipelineContext& ctx) {
  std::vector<QuestionScore> scores;
  for (const auto& r : records) {
    QuestionScore q{r.id, r.category, {}, std::nullopt};
    std::vector<rdf::Term> answers;
    try {
      answers = run_pipeline(r, overrides, ctx).answers;
    } catch (const MissingGoldStage&) {
      throw;
    } catch (const Error& e) {
      q.error = e.to_json();
    }
    bool day = day_granular(r.gold_answers);
    q.scores = score(answer_keys(r.gold_answers, r.profile(), day),
                     answer_keys(answers, r.profile(), day));
    scores.push_back(std::move(q));
  }
  return make_report(std::move(scores));
}

}  // namespace kbqa::eval
