#include <benchmark/benchmark.h>

#include "ptosc/chain.hpp"
#include "ptosc/dynamics.hpp"
#include "ptosc/hamiltonian.hpp"
#include "ptosc/impurity.hpp"
#include "ptosc/region.hpp"
#include "ptosc/spectral.hpp"
#include "ptosc/trio.hpp"

using namespace ptosc;

static void BM_AnalyticSpectrum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(analytic_spectrum(n, 1.0, 0.05, 0.4));
}
BENCHMARK(BM_AnalyticSpectrum)->Arg(1)->Arg(4)->Arg(16)->Arg(40);

static void BM_QepSpectrum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ChainSpec c = build_uniform_chain(n, 1.0, 0.05, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(qep_spectrum(c));
}
BENCHMARK(BM_QepSpectrum)->Arg(1)->Arg(4)->Arg(16)->Arg(40);

static void BM_CharPolyEvaluate(benchmark::State& state) {
  CharPoly p = charpoly(static_cast<int>(state.range(0)));
  double chi = 3.7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p.evaluate(chi, 0.9));
    chi += 1e-9;  // defeat value caching without changing the cost
  }
}
BENCHMARK(BM_CharPolyEvaluate)->Arg(5)->Arg(20)->Arg(45);

static void BM_ClosedFormProduct(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  double chi = 9.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(charpoly_product_form(n, chi, 0.9));
    chi += 1e-9;
  }
}
BENCHMARK(BM_ClosedFormProduct)->Arg(5)->Arg(20)->Arg(45);

static void BM_ScanEpsilon(benchmark::State& state) {
  ChainSpec tmpl = build_uniform_chain(static_cast<int>(state.range(0)), 1.0, 0.1, 0.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        scan_epsilon(tmpl, GammaProfile::uniform(0.1), 0.0, 1.2, 200));
}
BENCHMARK(BM_ScanEpsilon)->Arg(1)->Arg(3);

static void BM_TrioDiagram(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(trio_phase_diagram(0.8, 0.1, 0.0, 0.7, 0.0, 0.7, res));
}
BENCHMARK(BM_TrioDiagram)->Arg(32)->Arg(64);

static void BM_Rk4Step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ChainSpec c = build_uniform_chain(n, 1.0, 0.05, 0.3);
  PhaseState s0 = make_state(Eigen::VectorXd::Unit(2 * n, 0),
                             Eigen::VectorXd::Zero(2 * n));
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate(c, HamiltonianRep::sum(), s0, 1.0, 1e-3));
}
BENCHMARK(BM_Rk4Step)->Arg(1)->Arg(4)->Arg(16);

static void BM_FdWaveStep(benchmark::State& state) {
  ContinuumParams p;
  p.epsilon = 0.3;
  p.gamma = 0.2;
  const int nx = static_cast<int>(state.range(0));
  FdConfig cfg;
  cfg.grid = {-20.0, 20.0, nx};
  cfg.dt = 0.4 * (40.0 / nx);
  cfg.t_end = 1.0;
  cfg.boundary = Boundary::Absorbing;
  Eigen::VectorXcd z = Eigen::VectorXcd::Ones(nx);
  auto g = [](double x) { return 0.2 * std::exp(-x * x); };
  for (auto _ : state)
    benchmark::DoNotOptimize(fd_wave_solver(p, g, z, z, z, z, cfg));
}
BENCHMARK(BM_FdWaveStep)->Arg(512)->Arg(2048);

BENCHMARK_MAIN();
