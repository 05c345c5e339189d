#pragma once

// Datasets, answer-set metrics, the stage-override pipeline harness and the
// Simple/Medium/Complex query categorizer.

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbqa/grounder.hpp"
#include "kbqa/kb.hpp"
#include "kbqa/rdf.hpp"
#include "kbqa/sparql.hpp"
#include "kbqa/store.hpp"
#include "kbqa/translate.hpp"

namespace kbqa::eval {

enum class Category { Simple, Medium, Complex, Unlabeled };

std::string to_string(Category c);  // "SIMPLE", "MEDIUM", "COMPLEX", "UNLABELED"
Category category_from_string(const std::string& s);  // InvalidValue

// ---- dataset ----

struct DatasetRecord {
  std::string id;
  std::string question;
  // Output of an external AMR parser, when the dataset carries one. Without
  // it the pipeline's AMR stage falls back to the gold AMR.
  std::optional<std::string> amr;
  std::optional<std::string> gold_amr;  // PENMAN
  std::optional<nlohmann::json> gold_lambda;
  std::optional<ground::GoldGrounding> gold_grounding;
  std::string gold_sparql;
  std::vector<rdf::Term> gold_answers;
  Category category = Category::Unlabeled;
  std::string kb = "wikidata";

  const kb::KbProfile& profile() const { return kb::KbProfile::by_name(kb); }
};

// Gold answers are strings (IRI or CURIE) or {"value", "datatype"|"lang"}
// objects; FormatError on malformed records.
DatasetRecord record_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DatasetRecord& r);

// JSON Lines; FormatError names the offending line.
std::vector<DatasetRecord> parse_dataset(std::string_view jsonl);
std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path);

// ---- metrics ----

struct Scores {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  friend bool operator==(const Scores&, const Scores&) = default;
};

// Both empty: (1, 1, 1). Gold empty, system not: (0, 1, 0). Gold nonempty,
// system empty: (0, 0, 0).
Scores score(const std::set<std::string>& gold, const std::set<std::string>& sys);

// Comparison keys: IRIs in the profile's compact form, numbers and date-times
// in canonical form. With `day_granular` date-times compare by UTC date.
std::string answer_key(const rdf::Term& t, const kb::KbProfile& kb, bool day_granular);
// True when every date-valued gold answer is a date or a midnight date-time.
bool day_granular(const std::vector<rdf::Term>& gold);
std::set<std::string> answer_keys(const std::vector<rdf::Term>& terms, const kb::KbProfile& kb,
                                  bool day_granular);

struct QuestionScore {
  std::string id;
  Category category = Category::Unlabeled;
  Scores scores;
  std::optional<nlohmann::json> error;  // the pipeline error, scored as no answers
};

struct ScoreReport {
  std::vector<QuestionScore> questions;
  Scores macro;
  std::map<Category, Scores> macro_by_category;
  std::map<Category, int> counts;

  nlohmann::json to_json() const;
  std::string to_table() const;  // aligned P / R / F1 columns
};

// Macro averages are arithmetic means over the questions (zero when empty).
ScoreReport make_report(std::vector<QuestionScore> questions);

// ---- pipeline ----

enum class Stage { GtAmr, GtLambda, GtEl, GtRl, GtKbLambda, GtSparql };

std::string to_string(Stage s);  // "GT_AMR", ...
Stage stage_from_string(const std::string& s);  // InvalidValue
std::set<Stage> parse_overrides(const std::string& csv);  // "GT_EL,GT_RL"; "" -> {}

using Executor = std::function<store::Results(const sparql::Query&)>;

Executor store_executor(const store::TripleStore& s, rdf::DateTime now);

struct PipelineContext {
  const ground::Lexicon* lexicon = nullptr;  // needed unless both links are gold
  translate::TranslateOptions translate_options;
  Executor execute;
};

// Every intermediate representation the run produced, as JSON.
struct Trace {
  std::vector<std::string> overrides;
  std::optional<nlohmann::json> amr;
  std::optional<nlohmann::json> lambda;
  std::optional<nlohmann::json> rules;
  std::optional<nlohmann::json> kb_lambda;
  std::optional<std::string> sparql;
  std::optional<nlohmann::json> results;

  nlohmann::json to_json() const;
};

struct PipelineResult {
  std::vector<rdf::Term> answers;
  Trace trace;
};

// Stages are computed only as far upstream as the overrides require:
// GT_SPARQL executes the gold query, GT_KB_LAMBDA grounds the gold lambda
// with the gold maps, GT_EL / GT_RL swap the lexicon for the gold entity /
// relation map, GT_LAMBDA and GT_AMR replace translation / parsing.
// MissingGoldStage when an override's gold artifact is absent.
PipelineResult run_pipeline(const DatasetRecord& r, const std::set<Stage>& overrides,
                            const PipelineContext& ctx);

// Runs every record; domain errors other than MissingGoldStage score the
// question as unanswered.
ScoreReport evaluate(const std::vector<DatasetRecord>& records, const std::set<Stage>& overrides,
                     const PipelineContext& ctx);

// ---- categorizer ----

struct QueryFeatures {
  int intervals = 0;          // distinct temporal events the query refers to
  bool temporal_filter = false;  // a comparison relating two temporal events
  bool duration_arithmetic = false;
  bool aggregation = false;   // COUNT or ORDER BY
};

QueryFeatures features(const sparql::Query& q, const kb::KbProfile& kb);

// SIMPLE: at most one temporal event and no temporal filter.
// MEDIUM: a temporal filter relating two events, or aggregation over temporal
// values.
// COMPLEX: two or more events related by a temporal filter plus duration
// arithmetic, aggregation or a third event.
Category categorize(const sparql::Query& q, const kb::KbProfile& kb = kb::KbProfile::wikidata());

}  // namespace kbqa::eval
