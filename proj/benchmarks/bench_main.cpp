#include <benchmark/benchmark.h>

#include <map>
#include <string>

#include "xslab/econometrics.hpp"
#include "xslab/portfolio.hpp"
#include "xslab/rng.hpp"
#include "xslab/signals.hpp"
#include "xslab/synthgen.hpp"

using namespace xslab;

namespace {

Dataset bench_dataset(long firms, int months) {
  GeneratorConfig cfg;
  cfg.n_firms = firms;
  cfg.n_months = months;
  cfg.seed = 1;
  cfg.quality_premium = 0.003;
  return generate(cfg);
}

void BM_RankNormalize(benchmark::State& state) {
  RandomStream rng(77, 1, 0);
  std::map<FirmId, double> values;
  for (long i = 0; i < state.range(0); ++i)
    values["F" + std::to_string(i)] = rng.uniform(-1.0, 1.0);
  for (auto _ : state) {
    auto ranks = rank_normalize(values);
    benchmark::DoNotOptimize(ranks);
  }
}
BENCHMARK(BM_RankNormalize)->Arg(500)->Arg(1500);

void BM_Generate(benchmark::State& state) {
  for (auto _ : state) {
    Dataset data = bench_dataset(state.range(0), 120);
    benchmark::DoNotOptimize(data);
  }
}
BENCHMARK(BM_Generate)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_HedgedStrategy(benchmark::State& state) {
  Dataset data = bench_dataset(state.range(0), 266);
  SignalEngine engine(data, 1500);
  auto frames = engine.frames(SignalKind::ocf_at);
  for (auto _ : state) {
    StrategyResult res = hedged_strategy(frames, data.prices, 24);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_HedgedStrategy)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_SignalFrames(benchmark::State& state) {
  Dataset data = bench_dataset(500, 120);
  SignalEngine engine(data, 1500);
  for (auto _ : state) {
    auto frames = engine.frames(SignalKind::ocf_at);
    benchmark::DoNotOptimize(frames);
  }
}
BENCHMARK(BM_SignalFrames)->Unit(benchmark::kMillisecond);

void BM_BuildBiasPanel(benchmark::State& state) {
  Dataset data = bench_dataset(state.range(0), 120);
  for (auto _ : state) {
    auto panel = build_bias_panel(data, {});
    benchmark::DoNotOptimize(panel);
  }
}
BENCHMARK(BM_BuildBiasPanel)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_PanelOls(benchmark::State& state) {
  Dataset data = bench_dataset(state.range(0), 120);
  auto panel = build_bias_panel(data, {});
  RegressionSpec spec{Dependent::mistake,
                      {Regressor::quality, Regressor::btm, Regressor::vol}};
  for (auto _ : state) {
    auto res = panel_ols(spec, panel);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_PanelOls)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
