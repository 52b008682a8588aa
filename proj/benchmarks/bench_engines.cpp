#include <benchmark/benchmark.h>

#include "qlink/device/device_params.hpp"
#include "qlink/iosim/pitch_catch.hpp"
#include "qlink/multimode/multimode.hpp"
#include "qlink/pulse/schedule.hpp"
#include "qlink/units.hpp"

using namespace qlink;

namespace {

const auto kCable = device::cable_derived_params(device::DeviceParams::defaults().cable);

std::vector<double> grid(double end, int n) {
  std::vector<double> t;
  for (int i = 0; i < n; ++i) t.push_back(end * i / (n - 1));
  return t;
}

// Ladder of 2*half+1 modes, 300 time points.
void BM_ResonantLadder(benchmark::State& state) {
  const int half = static_cast<int>(state.range(0));
  const auto t = grid(1.2e-6, 300);
  for (auto _ : state) {
    benchmark::DoNotOptimize(multimode::resonant_ladder(hz_to_angular(1.63e6), kCable.omega_fsr, half, t));
  }
  state.SetComplexityN(2 * half + 1);
}
BENCHMARK(BM_ResonantLadder)->Arg(25)->Arg(50)->Arg(100)->Complexity()->Unit(benchmark::kMillisecond);

// One detuning row of a chevron map is one of these per pixel row.
void BM_ChevronRows(benchmark::State& state) {
  multimode::ChevronConfig cfg;
  cfg.g = hz_to_angular(0.08e6);
  cfg.omega_fsr = kCable.omega_fsr;
  cfg.half_width = 100;
  for (int i = 0; i < state.range(0); ++i) cfg.detunings.push_back(hz_to_angular(-5e6 + 10e6 * i / 9.0));
  cfg.times = grid(5e-6, 300);
  for (auto _ : state) benchmark::DoNotOptimize(multimode::chevron_scan(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ChevronRows)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ShapedTransfer(benchmark::State& state) {
  iosim::PitchCatchSetup s;
  s.channel.tau_st = kCable.tau_st;
  const double kc = 1.0 / 22e-9;
  const double dt = iosim::aligned_step(s.channel.tau_st, state.range(0) * 1e-12);
  const auto p = pulse::shaped_schedules(kc, s.channel.tau_st, pulse::shaped_window(kc, s.channel.tau_st), dt);
  s.a.schedule = p.sender;
  s.b.schedule = p.receiver;
  for (auto _ : state) benchmark::DoNotOptimize(iosim::transfer_efficiency(iosim::simulate_pitch_catch(s)));
  state.counters["samples"] = static_cast<double>(p.sender.size());
}
BENCHMARK(BM_ShapedTransfer)->Arg(200)->Arg(100)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_FixedCouplingOptimum(benchmark::State& state) {
  iosim::ChannelParams ch;
  ch.tau_st = kCable.tau_st;
  const auto kappas = iosim::flying_kappa_grid(ch.tau_st, 5, 100, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(iosim::fixed_coupling_optimum(ch, kappas));
}
BENCHMARK(BM_FixedCouplingOptimum)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
