#include <molspin/algorithms.hpp>
#include <molspin/open_system.hpp>
#include <molspin/pulse.hpp>
#include <molspin/qec.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace molspin;

namespace {

Operator random_hermitian(int d) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> n;
  Operator a(d, d);
  for (int i = 0; i < d * d; ++i) a.data()[i] = cplx(n(rng), n(rng));
  return 0.5 * (a + a.adjoint());
}

void BM_MatexpUnitary(benchmark::State& state) {
  const Operator h = random_hermitian(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(matexp_unitary(h, 0.37));
}
BENCHMARK(BM_MatexpUnitary)->RangeMultiplier(2)->Range(2, 128);

void BM_Expm(benchmark::State& state) {
  const Operator a = random_hermitian(static_cast<int>(state.range(0))) * cplx(0.0, -0.3);
  for (auto _ : state) benchmark::DoNotOptimize(expm(a));
}
BENCHMARK(BM_Expm)->RangeMultiplier(2)->Range(2, 128);

void BM_LindbladEvolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SpinRegister reg;
  for (int k = 0; k < n; ++k) reg.add(SpinSite::electron(0.5, "q" + std::to_string(k)));
  NoiseModel noise;
  noise.T1 = 100.0;
  noise.T2 = 50.0;
  const Operator h = random_hermitian(reg.total_dim());
  const DensityMatrix rho0 = density_from_state(basis_state(reg.total_dim(), 0));
  LindbladOptions opts;
  opts.dt = 0.01;
  for (auto _ : state) benchmark::DoNotOptimize(lindblad_evolve(h, noise.terms(reg), rho0, 1.0, opts));
}
BENCHMARK(BM_LindbladEvolve)->DenseRange(1, 4);

void BM_SwitchCzSimulation(benchmark::State& state) {
  const TrimerSpec spec = cr7ni_co_trimer(5.0);
  HardwareCalibration hw;
  hw.rabi_ghz = 0.05;
  const SwitchGateReport rep = compile_cz_switch(spec, hw);
  const DrivenSystem sys(trimer_register(), build_trimer(spec), rep.schedule, hw);
  for (auto _ : state) benchmark::DoNotOptimize(sys.interaction_frame_unitary());
}
BENCHMARK(BM_SwitchCzSimulation)->Unit(benchmark::kMillisecond);

void BM_TrotterError(benchmark::State& state) {
  const TrotterPlan plan{tfim_terms({1.0, 1.0, static_cast<int>(state.range(0))}), 1.0, 32};
  for (auto _ : state) benchmark::DoNotOptimize(trotter_error(plan));
}
BENCHMARK(BM_TrotterError)->DenseRange(2, 6, 2);

void BM_WorstBathRate(benchmark::State& state) {
  const SpinRegister reg = double_tetrahedron_register();
  Eigen::MatrixXd C = Eigen::MatrixXd::Constant(7, 7, 0.5e-3);
  C.diagonal().setConstant(1e-3);
  const Operator h = double_tetrahedron(1.0, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(worst_bath_rate(h, reg, 8, C));
}
BENCHMARK(BM_WorstBathRate)->Unit(benchmark::kMillisecond);

void BM_QecMemoryPoint(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(qec_memory_point(2000.0, 50000.0));
}
BENCHMARK(BM_QecMemoryPoint)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
