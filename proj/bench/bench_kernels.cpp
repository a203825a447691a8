// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "argexp/counting.hpp"
#include "argexp/evaluation.hpp"
#include "argexp/weighting.hpp"
#include "support/model.hpp"
#include "support/synthetic.hpp"

using namespace argexp;
using namespace argexp::testing;

namespace {

struct Corpus {
  std::vector<Sentence> sentences;
  Vocabulary vocab;
};

const Corpus& corpus() {
  static const Corpus c = [] {
    Corpus out;
    out.sentences = parse_synthetic(random_corpus(20000, 1, 400, 80));
    out.vocab = Vocabulary::build(out.sentences, {});
    return out;
  }();
  return c;
}

const CooccurrenceTensor& dependency_tensor() {
  static const auto t = count_dependencies(corpus().sentences, corpus().vocab, CountingOptions{});
  return t;
}

void BM_CountDependencies(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(count_dependencies(corpus().sentences, corpus().vocab, {}));
}

void BM_CountDependenciesParallel(benchmark::State& state) {
  const auto shards = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(count_dependencies_parallel(corpus().sentences, corpus().vocab, {}, shards));
}

void BM_CountWindow(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(count_window(corpus().sentences, corpus().vocab, {}));
}

void BM_CountWindowParallel(benchmark::State& state) {
  const auto shards = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(count_window_parallel(corpus().sentences, corpus().vocab, {}, shards));
}

void BM_Weight(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(weight_tensor(dependency_tensor()));
}

void BM_WeightParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(weight_tensor_parallel(dependency_tensor()));
}

void evaluate(benchmark::State& state, ExecPolicy policy) {
  static const auto built = library_spaces(random_corpus(3000, 2, 60, 12));
  static const auto items = random_chow_items(400, 3, 60, 12);
  const auto spaces = built.spaces.view(BoaVectors::dependency);
  for (auto _ : state)
    benchmark::DoNotOptimize(run_chow(spaces, {ModelKind::deps, 20, Composition::sum}, items,
                                      default_chow_slots(ModelKind::deps), policy));
}

void BM_EvaluateSerial(benchmark::State& state) { evaluate(state, ExecPolicy::serial); }
void BM_EvaluateParallel(benchmark::State& state) { evaluate(state, ExecPolicy::parallel); }

}  // namespace

BENCHMARK(BM_CountDependencies)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountDependenciesParallel)->Arg(1)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountWindow)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountWindowParallel)->Arg(1)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Weight)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WeightParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
