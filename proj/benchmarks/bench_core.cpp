#include <compcomp/apps.hpp>
#include <compcomp/hardinstance.hpp>
#include <compcomp/regularizers.hpp>
#include <compcomp/solver.hpp>
#include <compcomp/spaces.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace compcomp;

namespace {

Matrix gaussian(std::mt19937_64 &rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> N;
  Matrix M(r, c);
  for (Eigen::Index i = 0; i < M.size(); ++i)
    M.data()[i] = N(rng);
  return M;
}

void BM_DualityMap(benchmark::State &state) {
  std::mt19937_64 rng(1);
  const Vector x = gaussian(rng, state.range(0), 1).col(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(duality_map(x, 1.5, 2.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DualityMap)->RangeMultiplier(8)->Range(8, 4096);

void BM_InverseDualityMap(benchmark::State &state) {
  std::mt19937_64 rng(2);
  const NormedSpace space = NormedSpace::lp(state.range(0), 3.0);
  const Vector g = gaussian(rng, state.range(0), 1).col(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(space.inverse_duality_map(g, 3.0));
}
BENCHMARK(BM_InverseDualityMap)->RangeMultiplier(8)->Range(8, 4096);

void BM_JacobiSvd(benchmark::State &state) {
  std::mt19937_64 rng(3);
  const Matrix X = gaussian(rng, state.range(0), state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(jacobi_svd(X));
}
BENCHMARK(BM_JacobiSvd)->Arg(4)->Arg(16)->Arg(64);

void BM_CompositeProx(benchmark::State &state) {
  std::mt19937_64 rng(4);
  const Eigen::Index d = state.range(0);
  const Regularizer reg = Regularizer::power_of_norm(NormedSpace::lp(d, 1.5), 0.5);
  const ScaffoldFunction phi = make_scaffold(reg, Vector::Zero(d));
  const Vector z = gaussian(rng, d, 1).col(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(composite_prox(reg, phi, z, 3.0, 1.0));
}
BENCHMARK(BM_CompositeProx)->RangeMultiplier(8)->Range(8, 4096);

void BM_SchattenProx(benchmark::State &state) {
  std::mt19937_64 rng(5);
  const Eigen::Index n = state.range(0);
  const NormedSpace space = NormedSpace::schatten(n, n, 1.5);
  const Regularizer reg = Regularizer::schatten_power(space, 0.5, Vector::Zero(n * n));
  const ScaffoldFunction phi = make_scaffold(reg);
  const Vector z = gaussian(rng, n * n, 1).col(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(composite_prox(reg, phi, z, 3.0, 1.0));
}
BENCHMARK(BM_SchattenProx)->Arg(4)->Arg(16);

void BM_AgdPlusBridge(benchmark::State &state) {
  std::mt19937_64 rng(6);
  const Eigen::Index d = state.range(0);
  const ProblemSpec s = build_bridge(gaussian(rng, 2 * d, d) / std::sqrt(2.0 * d),
                                     gaussian(rng, 2 * d, 1).col(0), 0.1, 1.5);
  SolverConfig cfg;
  cfg.max_iters = 100;
  for (auto _ : state)
    benchmark::DoNotOptimize(agd_plus(*s.oracle, s.reg, s.scaffold, s.start(), cfg));
  state.SetItemsProcessed(state.iterations() * cfg.max_iters);
}
BENCHMARK(BM_AgdPlusBridge)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_HardInstanceSmoothing(benchmark::State &state) {
  std::mt19937_64 rng(7);
  HardInstanceParams P;
  P.d = 64;
  P.M = static_cast<int>(state.range(0));
  P.p = 3;
  HardInstance h(P);
  for (int t = 0; t < P.M; ++t)
    h.resisting_query(gaussian(rng, P.d, 1).col(0));
  const Vector x = gaussian(rng, P.d, 1).col(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(h.smoothed_eval(x));
}
BENCHMARK(BM_HardInstanceSmoothing)->Arg(4)->Arg(16)->Arg(64);

} // namespace

BENCHMARK_MAIN();
