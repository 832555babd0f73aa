#include <benchmark/benchmark.h>

#include <random>

#include "sacre/mining/learner.hpp"

using namespace sacre::mining;

namespace {

Dataset synthetic_dataset(std::size_t rows, std::uint64_t seed) {
  Dataset ds("bench",
             {Attribute::numeric("perclos"), Attribute::numeric("facePosition"),
              Attribute::numeric("heartBeatsPerMinute"),
              Attribute::numeric("handsOnSteeringWheel"),
              Attribute::nominal("class", {kClassActive, kClassInactive})});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (std::size_t i = 0; i < rows; ++i) {
    double perclos = uni(rng);
    double face = rng() % 2 ? 1.0 : 0.0;
    double hbpm = uni(rng);
    double hosw = uni(rng);
    bool active = perclos >= 0.15 && face == 1.0 && hbpm >= 0.56 && hbpm <= 0.60;
    ds.append({perclos, face, hbpm, hosw,
               active ? kClassActive : kClassInactive});
  }
  return ds;
}

void BM_LearnRuleset(benchmark::State& state) {
  auto ds = synthetic_dataset(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) {
    auto rs = learn_ruleset(ds, 42);
    benchmark::DoNotOptimize(rs);
  }
  state.SetComplexityN(state.range(0));
}

void BM_CrossValidate(benchmark::State& state) {
  auto ds = synthetic_dataset(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) {
    auto m = cross_validate(ds, 10, 42);
    benchmark::DoNotOptimize(m);
  }
  state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(BM_LearnRuleset)->Arg(200)->Arg(500)->Arg(1000)->Arg(2000)->Complexity();
BENCHMARK(BM_CrossValidate)->Arg(200)->Arg(500)->Arg(1000)->Complexity();

BENCHMARK_MAIN();
