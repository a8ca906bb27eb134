#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "lack/control.hpp"
#include "lack/duration.hpp"
#include "lack/sim.hpp"
#include "lack/warden.hpp"

using namespace lack;

static void BM_MeanResidualLife(benchmark::State& state) {
  const auto model = duration::calibrate_scale(static_cast<double>(state.range(0)) / 10.0, 117.31);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(duration::mean_residual_life(model, t));
    t = t >= 600.0 ? 0.0 : t + 1.0;
  }
}
BENCHMARK(BM_MeanResidualLife)->Arg(5)->Arg(10)->Arg(34);

static void BM_SimulateCurve(benchmark::State& state) {
  const auto model = duration::calibrate_scale(0.5, 117.31);
  control::ControllerConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(control::simulate_curve(config, model, 1000, 600.0, 0.1));
  }
}
BENCHMARK(BM_SimulateCurve)->Unit(benchmark::kMillisecond);

static void BM_RunCall(benchmark::State& state) {
  sim::Scenario s;
  s.fixed_duration_s = 120.0;
  s.network.loss_schedule = {{0.0, 0.01}};
  s.steganogram_bits = 10000;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    s.seed = seed++;
    benchmark::DoNotOptimize(sim::run_call(s));
  }
}
BENCHMARK(BM_RunCall)->Unit(benchmark::kMillisecond);

static void BM_DurationTest(benchmark::State& state) {
  const auto model = duration::calibrate_scale(1.2, 117.31);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> sample(static_cast<std::size_t>(state.range(0)));
  for (auto& d : sample) d = duration::sample_duration(model, 1.0 - unit(rng));
  for (auto _ : state) {
    benchmark::DoNotOptimize(warden::duration_distribution_test(sample, model, 0.05));
  }
}
BENCHMARK(BM_DurationTest)->Arg(100)->Arg(10000);

BENCHMARK_MAIN();
