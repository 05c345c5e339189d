#include <benchmark/benchmark.h>

#include "kbqa/amr.hpp"
#include "kbqa/evaluation.hpp"
#include "kbqa/sparql_gen.hpp"
#include "support.hpp"

using namespace kbqa;
using test::fixture;

namespace {

const char* kExamples[] = {"titanic_release", "titanic_director", "cameron_dicaprio", "cold_war",
                           "douglas_bravo"};

const kb::KbProfile& wd() {
  static const auto k = kb::KbProfile::wikidata();
  return k;
}

const ground::Lexicon& lexicon() {
  static const auto l = ground::Lexicon::load(fixture("lexicon.json"), wd());
  return l;
}

std::string penman(int i) { return test::slurp(fixture(std::string("amr/") + kExamples[i] + ".amr")); }

void BM_ParsePenman(benchmark::State& state) {
  auto text = penman(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(amr::parse_penman(text));
  state.SetLabel(kExamples[state.range(0)]);
}
BENCHMARK(BM_ParsePenman)->DenseRange(0, 4);

void BM_Translate(benchmark::State& state) {
  auto g = amr::parse_penman(penman(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(translate::translate(g));
  state.SetLabel(kExamples[state.range(0)]);
}
BENCHMARK(BM_Translate)->DenseRange(0, 4);

void BM_GroundAndEmit(benchmark::State& state) {
  auto expr = translate::translate(amr::parse_penman(penman(static_cast<int>(state.range(0))))).expr;
  for (auto _ : state)
    benchmark::DoNotOptimize(sparql::render(sparql::emit(ground::ground(expr, lexicon(), wd()), wd())));
  state.SetLabel(kExamples[state.range(0)]);
}
BENCHMARK(BM_GroundAndEmit)->DenseRange(0, 4);

void BM_EvaluateDataset(benchmark::State& state) {
  auto records = eval::load_dataset(fixture("dataset.jsonl"));
  auto s = store::load_ntriples_file(fixture("wikidata.nt"));
  eval::PipelineContext ctx{&lexicon(), {}, eval::store_executor(s, {2024, 1, 1})};
  for (auto _ : state) benchmark::DoNotOptimize(eval::evaluate(records, {}, ctx));
}
BENCHMARK(BM_EvaluateDataset);

}  // namespace

BENCHMARK_MAIN();
