#include <benchmark/benchmark.h>

#include <cmath>
#include <sstream>

#include "rvkit/analysis.hpp"
#include "rvkit/fitting.hpp"
#include "rvkit/moments.hpp"
#include "rvkit/random.hpp"
#include "rvkit/synthsim.hpp"

using namespace rvkit;

namespace {

TickSeries simulated_ticks(int days, int tick_seconds) {
  SimConfig cfg;
  cfg.days = days;
  cfg.tick_interval_seconds = tick_seconds;
  std::stringstream csv;
  generate_dataset(cfg, csv, nullptr, 1);
  return parse_ticks(csv);
}

void BM_Philox(benchmark::State& state) {
  CounterRng rng(42, 1);
  for (auto _ : state) benchmark::DoNotOptimize(rng.next_u64());
}
BENCHMARK(BM_Philox);

void BM_Normal(benchmark::State& state) {
  CounterRng rng(42, 2);
  for (auto _ : state) benchmark::DoNotOptimize(rng.normal());
}
BENCHMARK(BM_Normal);

void BM_SampleAndRv(benchmark::State& state) {
  const auto ticks = simulated_ticks(1, static_cast<int>(state.range(0)));
  const auto split = split_sessions(ticks, SessionCalendar::tokyo({}).with_days_from(ticks));
  const auto& ms = split.slices.front();
  for (auto _ : state) {
    benchmark::DoNotOptimize(realized_volatility(intraday_returns(sample_grid_prices(ms, 1))).rv);
  }
  state.counters["ticks"] = static_cast<double>(ms.ticks.size());
}
BENCHMARK(BM_SampleAndRv)->Arg(60)->Arg(5)->Arg(1);

void BM_Density(benchmark::State& state) {
  const FiniteSampleLaw law(state.range(0));
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(law.density(x));
    x = x > 1.0 ? 0.0 : x + 1e-3;
  }
}
BENCHMARK(BM_Density)->Arg(4)->Arg(120)->Arg(100000);

void BM_FitKurtosis(benchmark::State& state) {
  std::vector<CurvePoint> pts;
  for (int d = 1; d <= 40; ++d) {
    pts.push_back({double(d), kurt_model(d, 2.86, 216.7) + 0.01 * std::sin(d)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_curve(pts, CurveModel::Kurt4).params);
}
BENCHMARK(BM_FitKurtosis);

void BM_SimulateDays(benchmark::State& state) {
  SimConfig cfg;
  cfg.days = static_cast<int>(state.range(0));
  for (auto _ : state) {
    std::size_t ticks = 0;
    Simulator(cfg).run([&](const SimulatedDay& d) { ticks += d.ticks.size(); }, 1);
    benchmark::DoNotOptimize(ticks);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateDays)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_Analysis(benchmark::State& state) {
  const auto ticks = simulated_ticks(static_cast<int>(state.range(0)), 60);
  const auto cal = SessionCalendar::tokyo({}).with_days_from(ticks);
  AnalysisOptions opts;
  opts.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_analysis(ticks, cal, opts).fits.size());
}
BENCHMARK(BM_Analysis)->Arg(250)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
