#include <benchmark/benchmark.h>

#include "flame/config.hpp"
#include "flame/mb_solver.hpp"
#include "flame/pulse_shaping.hpp"
#include "flame/velocity_grid.hpp"

namespace {

void BM_GaussHermiteGrid(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto grid = flame::VelocityGrid::gauss_hermite(n, 180.0);
    benchmark::DoNotOptimize(grid.nodes().data());
  }
}
BENCHMARK(BM_GaussHermiteGrid)->Arg(16)->Arg(64)->Arg(256);

void BM_ControlEnvelope(benchmark::State& state) {
  flame::ControlPulse pulse;
  pulse.center = 0.0;
  pulse.fwhm = 4e-9;
  double t = -10e-9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(flame::control_intensity_profile(pulse, t));
    t += 1e-12;
    if (t > 10e-9) t = -10e-9;
  }
}
BENCHMARK(BM_ControlEnvelope);

void BM_Propagate(benchmark::State& state) {
  auto cfg = flame::load_scenario("flame2_on_res");
  cfg.scenario.solver.n_z = static_cast<std::size_t>(state.range(0));
  cfg.scenario.solver.n_v = 8;
  cfg.scenario.solver.dt = 20e-12;
  cfg.scenario.timing.storage_time = 10e-9;
  for (auto _ : state) {
    auto rec = flame::propagate(cfg.scenario);
    benchmark::DoNotOptimize(rec.energy.transmitted);
  }
}
BENCHMARK(BM_Propagate)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
