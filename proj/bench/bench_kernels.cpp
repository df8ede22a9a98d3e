// Serial reference vs OpenMP path for each parallel kernel.
#include <benchmark/benchmark.h>

#include "req2tc/corpus.hpp"
#include "req2tc/eval.hpp"
#include "req2tc/ner.hpp"

using namespace req2tc;

namespace {

const corpus::Corpus& bench_corpus() {
  static const corpus::Corpus c = corpus::generate_corpus(corpus::CorpusConfig{});
  return c;
}

Execution exec_of(const benchmark::State& state) {
  return state.range(0) ? Execution::Parallel : Execution::Serial;
}

void BM_PredictBatch(benchmark::State& state) {
  const auto& c = bench_corpus();
  std::vector<std::string> sentences;
  for (int rep = 0; rep < 20; ++rep) {
    for (const auto& d : c.documents) sentences.insert(sentences.end(), d.requirement_sentences.begin(), d.requirement_sentences.end());
  }
  const auto model = ner::train(ner::Backend::RANDOM_FOREST, c.annotations, 1);
  for (auto _ : state) benchmark::DoNotOptimize(ner::predict_labels_batch(model, sentences, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sentences.size()));
}

void BM_TrainForest(benchmark::State& state) {
  const auto& c = bench_corpus();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ner::train(ner::Backend::RANDOM_FOREST, c.annotations, 1, {}, exec_of(state)));
  }
}

void BM_CrossValidate(benchmark::State& state) {
  const auto& c = bench_corpus();
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval::cross_validate(ner::Backend::SVM, c.annotations, 10, 42, {}, exec_of(state)));
  }
}

}  // namespace

// Arg 0 = serial reference, 1 = OpenMP.
BENCHMARK(BM_PredictBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainForest)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrossValidate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
