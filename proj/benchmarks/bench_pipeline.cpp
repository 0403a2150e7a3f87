#include <benchmark/benchmark.h>

#include <random>

#include "eigensal/imagekit.hpp"
#include "eigensal/methods.hpp"
#include "eigensal/mpcnn.hpp"
#include "eigensal/wavelet.hpp"

namespace {

using namespace eigensal;

Plane noise(std::size_t h, std::size_t w, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  Plane p(h, w);
  for (double& v : p.values()) v = d(rng);
  return p;
}

RgbImage noise_image(std::size_t h, std::size_t w) {
  Plane c[3] = {noise(h, w, 1), noise(h, w, 2), noise(h, w, 3)};
  for (Plane& p : c) {
    for (double& v : p.values()) v *= 255.0;
  }
  return RgbImage(c[0], c[1], c[2]);
}

void BM_GaussianBlur(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Plane p = noise(n, n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_blur(p, 5.0));
}
BENCHMARK(BM_GaussianBlur)->Arg(128)->Arg(256)->Arg(512);

void BM_Dwt2RoundTrip(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Plane p = noise(n, n, 5);
  const WaveletBasis basis = WaveletBasis::make(WaveletKind::Db4);
  for (auto _ : state) benchmark::DoNotOptimize(idwt2(dwt2(p, max_levels(n, n), basis)));
}
BENCHMARK(BM_Dwt2RoundTrip)->Arg(128)->Arg(256)->Arg(512);

void BM_ConspicuityMap(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Plane p = noise(n, n, 6);
  const WaveletBasis basis = WaveletBasis::make(WaveletKind::Db4);
  for (auto _ : state) benchmark::DoNotOptimize(conspicuity_map(p, basis));
}
BENCHMARK(BM_ConspicuityMap)->Arg(128)->Arg(256);

void BM_LinkingField(benchmark::State& state) {
  const LinkingField field(linking_kernel(static_cast<std::size_t>(state.range(0))));
  const Plane p = noise(256, 256, 7);
  BinaryMap fired(256, 256);
  for (std::size_t r = 0; r < 256; ++r) {
    for (std::size_t c = 0; c < 256; ++c) fired.set(r, c, p(r, c) > 0.5);
  }
  for (auto _ : state) benchmark::DoNotOptimize(field.apply(fired));
}
BENCHMARK(BM_LinkingField)->Arg(3)->Arg(17);

void BM_MpcnnFuse(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::vector<Plane> inputs{noise(n, n, 8), noise(n, n, 9), noise(n, n, 10)};
  const std::vector<double> betas{0.6, 0.3, 0.1};
  const PcnnParams params;
  for (auto _ : state) benchmark::DoNotOptimize(mpcnn_fuse(inputs, betas, params));
}
BENCHMARK(BM_MpcnnFuse)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Method(benchmark::State& state) {
  const auto id = all_methods()[static_cast<std::size_t>(state.range(0))];
  const RgbImage img = noise_image(256, 256);
  const MethodConfig cfg;
  state.SetLabel(std::string(to_string(id)));
  for (auto _ : state) benchmark::DoNotOptimize(run_method(id, img, cfg));
}
BENCHMARK(BM_Method)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
