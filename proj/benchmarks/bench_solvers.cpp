#include "netref/equilibrium.hpp"
#include "netref/instances.hpp"
#include "netref/leader_value.hpp"
#include "netref/oracle.hpp"

#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

using namespace netref;

namespace {

// Line of n customers with singleton parts: the deepest recursion for its size.
struct Line {
  ComprehensiveNetwork g;
  CustomerSequence seq;
  MarketParams params;
};

Line line(Index n) {
  return {build_comprehensive(referral_line(n), 1.0), CustomerSequence::singletons(n),
          MarketParams::uniform(n, 1.0, 5.0)};
}

void BM_SolveSimultaneous(benchmark::State& state) {
  const Line l = line(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_simultaneous(l.g, l.params));
}
BENCHMARK(BM_SolveSimultaneous)->RangeMultiplier(2)->Range(4, 64);

void BM_SolveSequential(benchmark::State& state) {
  const Line l = line(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_sequential(l.g, l.seq, l.params));
}
BENCHMARK(BM_SolveSequential)->RangeMultiplier(2)->Range(4, 64);

void BM_LeadingValues(benchmark::State& state) {
  const Line l = line(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(leading_values(l.g, l.seq, l.params));
}
BENCHMARK(BM_LeadingValues)->RangeMultiplier(2)->Range(4, 32);

void BM_NewcomerDeltas(benchmark::State& state) {
  const Index n = state.range(0);
  const auto params = MarketParams::uniform(n, 1.0, 5.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(newcomer_deltas(referral_line(n), CustomerSequence::singletons(n), params, n - 1));
  }
}
BENCHMARK(BM_NewcomerDeltas)->RangeMultiplier(2)->Range(4, 16);

void BM_OracleCompare(benchmark::State& state) {
  std::mt19937_64 rng(7);
  InstanceSpec spec;
  spec.min_customers = spec.max_customers = state.range(0);
  const auto inst = random_instance(rng, spec);
  for (auto _ : state) benchmark::DoNotOptimize(oracle_compare(inst.network, inst.sequence, inst.params));
}
BENCHMARK(BM_OracleCompare)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
