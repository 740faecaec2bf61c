#include <benchmark/benchmark.h>

#include <vector>

#include "spde/experiments.hpp"
#include "spde/noise.hpp"

namespace {

std::vector<double> ramp(std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = 1.0 / static_cast<double>(i + 1);
  return out;
}

void BM_Synthesize1D(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const spde::SineTransform transform(spde::Dimension::one, n);
  const auto coeffs = ramp(n);
  std::vector<double> values(n);
  for (auto _ : state) {
    transform.synthesize(coeffs, values);
    benchmark::DoNotOptimize(values.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Synthesize1D)->RangeMultiplier(4)->Range(16, 4096)->Complexity(benchmark::oNLogN);

void BM_Synthesize2D(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const spde::SineTransform transform(spde::Dimension::two, n);
  const auto coeffs = ramp(n * n);
  std::vector<double> values(n * n);
  for (auto _ : state) {
    transform.synthesize(coeffs, values);
    benchmark::DoNotOptimize(values.data());
  }
}
BENCHMARK(BM_Synthesize2D)->RangeMultiplier(2)->Range(8, 128);

void BM_Step(benchmark::State& state, spde::Scheme scheme) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto model = spde::builtin_model("reaction-diffusion-1d");
  spde::Stepper stepper(model, n, 1.0 / static_cast<double>(n), scheme);
  const auto init = spde::initial_field(model, n);
  std::vector<double> y(init.coefficients().begin(), init.coefficients().end());
  const std::vector<double> noise(n, 0.0);
  for (auto _ : state) {
    stepper.step(y, noise, 0);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK_CAPTURE(BM_Step, exp_euler, spde::Scheme::exp_euler)->RangeMultiplier(4)->Range(16, 4096);
BENCHMARK_CAPTURE(BM_Step, implicit_euler, spde::Scheme::implicit_euler)->RangeMultiplier(4)->Range(16, 4096);

void BM_SampleIncrements(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const spde::SineBasis basis(spde::Dimension::one, 0.01, n);
  std::uint64_t realization = 0;
  for (auto _ : state) {
    auto block = spde::sample_joint_increments({1, realization++}, basis, n, 1.0);
    benchmark::DoNotOptimize(block);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_SampleIncrements)->RangeMultiplier(2)->Range(16, 256);

void BM_ConvergenceStudy(benchmark::State& state) {
  spde::StudyConfig config;
  config.model = spde::builtin_model("reaction-diffusion-1d");
  config.levels = {{4, 4, spde::Scheme::exp_euler}, {8, 8, spde::Scheme::exp_euler}, {16, 16, spde::Scheme::exp_euler}};
  config.reference = {64, 64, spde::Scheme::exp_euler};
  config.realizations = 8;
  for (auto _ : state) {
    auto table = spde::run_convergence_study(config);
    benchmark::DoNotOptimize(table);
  }
}
BENCHMARK(BM_ConvergenceStudy)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
