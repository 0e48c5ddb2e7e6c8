#include <benchmark/benchmark.h>

#include "segi/correlation.hpp"
#include "segi/filters.hpp"
#include "segi/forward_model.hpp"
#include "segi/ga.hpp"
#include "segi/metrics.hpp"
#include "segi/scenes.hpp"

using namespace segi;

namespace {

Image ring(int side) {
  const int c = side / 2;
  return make_primitive(RingShape{c, c, side * 0.22, side * 0.31}, {side, side});
}

void BM_MeasureBucket(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  Rng rng(1);
  const Image object = ring(side);
  const Image pattern = random_pattern(object.dims(), PixelMode::binary, rng);
  for (auto _ : state) benchmark::DoNotOptimize(measure_bucket(pattern, object).value);
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_MeasureBucket)->Arg(48)->Arg(64)->Arg(128);

void BM_Mutate(benchmark::State& state) {
  Rng rng(2);
  const Image pattern = random_pattern({64, 64}, PixelMode::binary, rng);
  const double rate = static_cast<double>(state.range(0)) / 1000.0;
  for (auto _ : state) benchmark::DoNotOptimize(mutate(pattern, rate, PixelMode::binary, rng));
}
BENCHMARK(BM_Mutate)->Arg(5)->Arg(40)->Arg(100);

void BM_StepGeneration(benchmark::State& state) {
  GaConfig cfg = GaConfig::defaults(static_cast<int>(state.range(0)));
  const Image object = ring(64);
  Rng rng(3);
  GaState ga = start_state(cfg, object, NoiseModel::none(), rng);
  for (auto _ : state) step_generation(ga, object, NoiseModel::none(), cfg, rng);
  state.counters["measurements"] = static_cast<double>(ga.total_measurements);
}
BENCHMARK(BM_StepGeneration)->Arg(30)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_Correlation(benchmark::State& state) {
  const Image object = ring(32);
  for (auto _ : state) {
    Rng rng(4);
    benchmark::DoNotOptimize(run_traditional_gi(object, 10240, NoiseModel::none(), rng, false));
  }
}
BENCHMARK(BM_Correlation)->Unit(benchmark::kMillisecond);

void BM_Median3x3(benchmark::State& state) {
  Rng rng(5);
  const Image img = random_pattern({64, 64}, PixelMode::grayscale, rng);
  for (auto _ : state) benchmark::DoNotOptimize(median_filter_3x3(img));
}
BENCHMARK(BM_Median3x3)->Unit(benchmark::kMicrosecond);

void BM_GaussianBlur(benchmark::State& state) {
  Rng rng(6);
  const Image img = random_pattern({64, 64}, PixelMode::grayscale, rng);
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_blur(img, 1.0));
}
BENCHMARK(BM_GaussianBlur)->Unit(benchmark::kMicrosecond);

void BM_Ssim(benchmark::State& state) {
  Rng rng(7);
  const Image a = random_pattern({64, 64}, PixelMode::grayscale, rng);
  const Image b = random_pattern({64, 64}, PixelMode::grayscale, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ssim(a, b));
}
BENCHMARK(BM_Ssim)->Unit(benchmark::kMicrosecond);

void BM_RotateFrame(benchmark::State& state) {
  const Image base = ring(64);
  for (auto _ : state) benchmark::DoNotOptimize(transform_frame(base, Rotate{7.0, 31.5, 31.5}));
}
BENCHMARK(BM_RotateFrame)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
