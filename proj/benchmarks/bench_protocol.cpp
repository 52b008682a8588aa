#include <benchmark/benchmark.h>

#include "qlink/protocol/analysis.hpp"
#include "qlink/protocol/protocols.hpp"
#include "qlink/tomography/tomography.hpp"

using namespace qlink;

namespace {

const auto kNoise = protocol::NoiseConfig::paper_defaults();

void BM_EntangleRemote(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(protocol::entangle_remote(kNoise));
}
BENCHMARK(BM_EntangleRemote);

void BM_TeleportProcess(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(protocol::teleport_process(protocol::TeleportMode::FeedForward, kNoise));
  }
}
BENCHMARK(BM_TeleportProcess)->Unit(benchmark::kMillisecond);

void BM_CnotProcess(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(protocol::cnot_process(kNoise));
}
BENCHMARK(BM_CnotProcess)->Unit(benchmark::kMillisecond);

void BM_SampledTeleport(benchmark::State& state) {
  Rng rng(7);
  const int shots = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(protocol::sampled_teleport_fidelity(protocol::TeleportMode::FeedForward, kNoise, shots, rng));
  }
}
BENCHMARK(BM_SampledTeleport)->Arg(1024)->Arg(4096)->Arg(65536)->Unit(benchmark::kMillisecond);

void BM_Measure(benchmark::State& state) {
  const auto rho = protocol::entangle_remote(kNoise);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(protocol::measure(rho, {0, 1}, kNoise.joint12, state.range(0), ++seed));
  }
}
BENCHMARK(BM_Measure)->Arg(4096)->Arg(65536);

void BM_QptTwoQubit(benchmark::State& state) {
  const auto inputs = tomography::standard_input_states(2);
  const auto outputs = protocol::cnot_process(protocol::NoiseConfig::ideal()).outputs;
  std::vector<tomography::Matrix> outs;
  for (const auto& o : outputs) outs.push_back(o.matrix());
  for (auto _ : state) benchmark::DoNotOptimize(tomography::qpt(inputs, outs));
}
BENCHMARK(BM_QptTwoQubit)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
