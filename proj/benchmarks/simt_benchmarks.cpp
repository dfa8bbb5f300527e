#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "simt/corpus.hpp"
#include "simt/imitation.hpp"
#include "simt/metrics.hpp"
#include "simt/oracle.hpp"
#include "simt/program.hpp"
#include "simt/simulate.hpp"

using namespace simt;

namespace {

ParallelCorpus corpus(std::size_t n) {
  SyntheticTaskConfig cfg;
  cfg.reorderRule = ReorderRule::FinalToSecond;
  return genSynthetic(cfg, n);
}

void BM_OracleCorpus(benchmark::State& state) {
  const auto c = corpus(1000);
  for (auto _ : state) {
    for (const auto& p : c.pairs) {
      benchmark::DoNotOptimize(generateOracle(*p.alignment, p.source.size(), p.target.size()));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(c.pairs.size()));
}
BENCHMARK(BM_OracleCorpus);

void BM_DelayReport(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = waitK(3, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(delayReport(p, n, n));
}
BENCHMARK(BM_DelayReport)->Arg(10)->Arg(100)->Arg(1000);

void BM_CorpusBleu(benchmark::State& state) {
  const auto c = corpus(1000);
  std::vector<std::vector<TokenId>> refs, hyps;
  for (const auto& p : c.pairs) {
    refs.push_back(p.target);
    auto h = p.target;
    h.front() = h.back();
    hyps.push_back(std::move(h));
  }
  for (auto _ : state) benchmark::DoNotOptimize(corpusBleu(hyps, refs));
}
BENCHMARK(BM_CorpusBleu);

void BM_Episode(benchmark::State& state) {
  const auto set = oracleTrainingSet(corpus(200));
  PolicyPair pair(set.sourceVocab, set.targetVocab, meanLengthRatio(set.examples));
  LinearProgrammer programmer(pair);
  LinearInterpreter interpreter(pair);
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& ex = set.examples[k++ % set.examples.size()];
    benchmark::DoNotOptimize(runEpisode(programmer, interpreter, ex.source));
  }
}
BENCHMARK(BM_Episode);

void BM_CloneStep(benchmark::State& state) {
  const auto set = oracleTrainingSet(corpus(200));
  CoupledTrainer trainer(PolicyPair(set.sourceVocab, set.targetVocab, meanLengthRatio(set.examples)), TrainConfig{});
  Rng rng(1);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(trainer.cloneStep(set.examples[k++ % set.examples.size()], rng));
  }
}
BENCHMARK(BM_CloneStep);

}  // namespace

BENCHMARK_MAIN();
