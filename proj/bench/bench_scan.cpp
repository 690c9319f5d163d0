// Serial vs OpenMP free-set scans.
#include <benchmark/benchmark.h>

#include "fisherwit/freesets.hpp"

using namespace fisherwit;

namespace {

EstimationTask worked_task() {
  ComplexMatrix m0 = ComplexMatrix::Zero(2, 2), m1 = ComplexMatrix::Zero(2, 2);
  m0(0, 0) = 1.0;
  m0(1, 1) = 0.5;
  m1(1, 1) = 0.5;
  return EstimationTask(unitary_family(0.5 * pauli::y()), Povm({m0, m1}));
}

void BM_HemisphereCfi(benchmark::State& state) {
  const EstimationTask task = worked_task();
  const FreeSet h = hemisphere_free_set(static_cast<int>(state.range(0)));
  const ScanOptions opts{state.range(1) != 0, 0};
  for (auto _ : state) benchmark::DoNotOptimize(max_cfi_over_free(task, h, opts).value.value);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BlochBallQfi(benchmark::State& state) {
  const ChannelFamily fam = unitary_family(0.5 * pauli::x());
  const FreeSet ball = FreeSet::bloch_ball(0.5);
  const ScanOptions opts{state.range(0) != 0, 0};
  for (auto _ : state) benchmark::DoNotOptimize(max_qfi_over_free(fam, ball, 0.0, opts).value.value);
}

void BM_RawEvaluation(benchmark::State& state) {
  const EstimationTask task = worked_task();
  const auto candidates = scan_candidates(FreeSet::bloch_ball(0.5));
  const StateFunctional f = [&](const DensityMatrix& s) { return classical_fisher(task, s); };
  for (auto _ : state) {
    auto v = state.range(0) != 0 ? evaluate_parallel(candidates, f) : evaluate_serial(candidates, f);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(candidates.size()));
}

}  // namespace

BENCHMARK(BM_HemisphereCfi)->ArgsProduct({{720, 4000}, {0, 1}})->ArgNames({"points", "parallel"});
BENCHMARK(BM_BlochBallQfi)->Arg(0)->Arg(1)->ArgName("parallel");
BENCHMARK(BM_RawEvaluation)->Arg(0)->Arg(1)->ArgName("parallel");

BENCHMARK_MAIN();
