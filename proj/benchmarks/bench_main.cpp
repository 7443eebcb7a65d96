#include <benchmark/benchmark.h>

#include "exdyn/harness.hpp"

using namespace exdyn;

namespace {

// Streams n states of the orbit and folds them into block maxima.
void orbit_maxima(benchmark::State& state, const SystemSpec& system, const ObservableSpec& obs) {
  ExperimentConfig c;
  c.system = system;
  c.observable = obs;
  c.N_blocklen = static_cast<std::size_t>(state.range(0));
  c.N_bmax = 100;
  c.N_samp = 10;
  c.transient = 0;
  for (auto _ : state) benchmark::DoNotOptimize(experiment_maxima(c));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 100);
}

void BM_ThomPowerSum(benchmark::State& s) {
  orbit_maxima(s, SystemSpec::thom(), ObservableSpec::power_sum({0.510001, 0.5090001}, 2.0, 1.0));
}
void BM_HenonPlane(benchmark::State& s) { orbit_maxima(s, SystemSpec::henon(), ObservableSpec::plane_theta_2d(0.0)); }
void BM_SolenoidPlane(benchmark::State& s) {
  orbit_maxima(s, SystemSpec::solenoid(), ObservableSpec::plane_theta_xy(0.0));
}
void BM_Lorenz63Flat(benchmark::State& s) { orbit_maxima(s, SystemSpec::lorenz63(), ObservableSpec::flat_x()); }
void BM_Lorenz84Flat(benchmark::State& s) { orbit_maxima(s, SystemSpec::lorenz84(), ObservableSpec::flat_x()); }

void BM_FitGev(benchmark::State& state) {
  const auto v = sample_gev({0.0, 1.0, -0.5}, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(fit_gev(v));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SolveXi(benchmark::State& state) {
  double t = -0.9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_xi(t));
    t = t > 0.9 ? -0.9 : t + 0.01;
  }
}

void BM_FitWithUncertainty(benchmark::State& state) {
  const auto v = sample_gev({0.0, 1.0, -0.5}, 10000, 2);
  const BlockMaxima bm{v, 1, v.size()};
  for (auto _ : state) benchmark::DoNotOptimize(fit_with_uncertainty(bm, 100));
}

void BM_LyapunovHenon(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(lyapunov_spectrum(SystemSpec::henon(), 100000, 1000, 1));
  state.SetItemsProcessed(state.iterations() * 100000);
}

}  // namespace

BENCHMARK(BM_ThomPowerSum)->Arg(1000)->Arg(10000);
BENCHMARK(BM_HenonPlane)->Arg(1000)->Arg(10000);
BENCHMARK(BM_SolenoidPlane)->Arg(1000);
BENCHMARK(BM_Lorenz63Flat)->Arg(1000);
BENCHMARK(BM_Lorenz84Flat)->Arg(1000);
BENCHMARK(BM_FitGev)->Arg(100)->Arg(10000)->Arg(100000);
BENCHMARK(BM_SolveXi);
BENCHMARK(BM_FitWithUncertainty);
BENCHMARK(BM_LyapunovHenon);

BENCHMARK_MAIN();
