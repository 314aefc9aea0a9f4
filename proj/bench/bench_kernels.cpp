#include <benchmark/benchmark.h>

#include <random>

#include "sbpairs/harness.hpp"
#include "sbpairs/oracle.hpp"
#include "sbpairs/qubo.hpp"
#include "sbpairs/sbm.hpp"

#ifdef SBPAIRS_HAVE_OPENMP
#include <omp.h>
#endif

using namespace sbpairs;

namespace {

QuboProblem instance(int n) {
  std::mt19937_64 rng(7);
  auto q = make_problem(random_instance(n, InstanceKind::market, rng), TabuList(n));
  q.m_p = penalty_weight(EngineConfig{}, q.graph);
  return q;
}

int set_threads(int t) {
#ifdef SBPAIRS_HAVE_OPENMP
  const int prev = omp_get_max_threads();
  omp_set_num_threads(t > 0 ? t : omp_get_num_procs());
  return prev;
#else
  (void)t;
  return 1;
#endif
}

void BM_SbDenseReference(benchmark::State& state) {
  const auto q = instance(static_cast<int>(state.range(0)));
  const auto model = to_ising(q);
  const auto params = EngineConfig::default_sb();
  XorshiftRng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(reference::sb_run(model, params, init_state(rng, params.machine_size)));
}
BENCHMARK(BM_SbDenseReference)->Arg(5)->Arg(10)->Arg(15)->Unit(benchmark::kMicrosecond);

void BM_SbStructured(benchmark::State& state) {
  const auto q = instance(static_cast<int>(state.range(0)));
  const auto params = EngineConfig::default_sb();
  XorshiftRng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sb_run(q, params, init_state(rng, params.machine_size)));
}
BENCHMARK(BM_SbStructured)->Arg(5)->Arg(10)->Arg(15)->Unit(benchmark::kMicrosecond);

// range(0) = threads (0 = all cores), 100 restarts at N = 15.
void BM_SolveBestOf(benchmark::State& state) {
  const int prev = set_threads(static_cast<int>(state.range(0)));
  const auto q = instance(15);
  const auto params = EngineConfig::default_sb();
  XorshiftRng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_best_of(q, params, rng, 100));
  set_threads(prev);
}
BENCHMARK(BM_SolveBestOf)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_OracleEnumerate(benchmark::State& state) {
  const int prev = set_threads(static_cast<int>(state.range(0)));
  const auto q = instance(9);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_cycles(q.graph, q.tabu, 0, 3));
  set_threads(prev);
}
BENCHMARK(BM_OracleEnumerate)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_BuildSimilarity(benchmark::State& state) {
  const int prev = set_threads(static_cast<int>(state.range(0)));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> step(0.0, 0.001);
  std::vector<DailySequences> hist(15, DailySequences(5, std::vector<double>(330)));
  for (auto& stock : hist)
    for (auto& day : stock) {
      double v = 1.0;
      for (auto& x : day) x = (v += step(rng));
    }
  for (auto _ : state) benchmark::DoNotOptimize(build_similarity(hist));
  set_threads(prev);
}
BENCHMARK(BM_BuildSimilarity)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
