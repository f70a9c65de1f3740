#include <benchmark/benchmark.h>

#include <random>

#include "gl0/cd.hpp"
#include "gl0/duality.hpp"
#include "gl0/regularizers.hpp"

using namespace gl0;

namespace {

ProblemInstance make_instance(int n, int p, double l0, double l2, double M) {
  std::mt19937 rng(42);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd X(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = g(rng);
  return load_instance(X, l0, l2, M, false);
}

PairSet all_pairs(int p) {
  PairSet out;
  for (int j = 0; j < p; ++j)
    for (int i = j + 1; i < p; ++i) out.insert(make_pair_sorted(i, j));
  return out;
}

void BM_ProxPsi(benchmark::State& state) {
  double t = 0.0;
  for (auto _ : state) {
    t += 1e-6;
    benchmark::DoNotOptimize(reg::prox_psi(3.0 + t, 1.0, 1.0, 10.0));
  }
}
BENCHMARK(BM_ProxPsi);

void BM_ProxL0L2(benchmark::State& state) {
  double t = 0.0;
  for (auto _ : state) {
    t += 1e-6;
    benchmark::DoNotOptimize(reg::prox_l0l2(1.0 + t, 0.5, 0.2, 2.0));
  }
}
BENCHMARK(BM_ProxL0L2);

void BM_CdSweep(benchmark::State& state) {
  int p = static_cast<int>(state.range(0));
  auto inst = make_instance(200, p, 0.3, 0.1, 2.0);
  PenaltySpec pen = NodeState{}.penalties(inst);
  auto est = SymmetricEstimate::diagonal(inst);
  PairSet all = all_pairs(p);
  for (auto _ : state) benchmark::DoNotOptimize(cd::cd_sweep(inst, est, pen, all));
  state.SetComplexityN(p);
}
BENCHMARK(BM_CdSweep)->Arg(25)->Arg(50)->Arg(100)->Complexity();

void BM_ActiveSetSolve(benchmark::State& state) {
  int p = static_cast<int>(state.range(0));
  auto inst = make_instance(200, p, 0.3, 0.1, 2.0);
  PenaltySpec pen = NodeState{}.penalties(inst);
  for (auto _ : state) {
    auto res = cd::active_set_solve(inst, pen,
                                    SymmetricEstimate::diagonal(inst), {});
    benchmark::DoNotOptimize(res.objective);
  }
}
BENCHMARK(BM_ActiveSetSolve)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_NodeBound(benchmark::State& state) {
  int p = static_cast<int>(state.range(0));
  auto inst = make_instance(200, p, 0.3, 0.1, 2.0);
  for (auto _ : state) {
    auto bound = dual::certified_node_bound(inst, NodeState{});
    benchmark::DoNotOptimize(bound.lower_bound);
  }
}
BENCHMARK(BM_NodeBound)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
