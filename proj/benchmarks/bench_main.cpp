#include <benchmark/benchmark.h>

#include <random>

#include "stylebasis/latent.hpp"
#include "stylebasis/spectral.hpp"
#include "stylebasis/transfer.hpp"

using namespace stylebasis;

namespace {

std::vector<float> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::vector<float> v(n);
  for (auto& x : v) x = u(gen);
  return v;
}

FeatureMap random_map(std::size_t side, std::size_t channels) {
  return FeatureMap(side, side, channels, noise(side * side * channels, 7));
}

void BM_FftForward(benchmark::State& state) {
  const auto f = random_map(static_cast<std::size_t>(state.range(0)), 64);
  for (auto _ : state) benchmark::DoNotOptimize(fft_forward(f));
}
BENCHMARK(BM_FftForward)->Arg(16)->Arg(32)->Arg(64);

void BM_DctForward(benchmark::State& state) {
  const auto f = random_map(static_cast<std::size_t>(state.range(0)), 64);
  for (auto _ : state) benchmark::DoNotOptimize(dct_forward(f));
}
BENCHMARK(BM_DctForward)->Arg(16)->Arg(32)->Arg(64);

void BM_IcaDecompose(benchmark::State& state) {
  const auto f = random_map(32, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ica_decompose(f));
}
BENCHMARK(BM_IcaDecompose)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_ObjectiveEvaluate(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto ex = Extractor::builtin();
  const ImageTensor content(side, side, noise(side * side * 3, 1));
  const ImageTensor style(side, side, noise(side * side * 3, 2));
  LossConfig cfg;
  cfg.content_layer = "relu2_1";
  cfg.style_layers = {"relu1_1", "relu2_1"};
  const TransferObjective obj(content, style_features(ex, style, cfg.style_layers), ex, cfg);
  const std::vector<double> x(content.data().begin(), content.data().end());
  for (auto _ : state) benchmark::DoNotOptimize(obj.evaluate(x));
}
BENCHMARK(BM_ObjectiveEvaluate)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
