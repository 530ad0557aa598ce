#include <benchmark/benchmark.h>

#include "flab/classical.hpp"
#include "flab/distinguishers.hpp"
#include "flab/gf2.hpp"

namespace {

using namespace flab;

void BM_SimonTrial(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  AlgorithmConfig config;
  config.algorithm = Algorithm::kAlg2;
  config.params = {n, 2, 1};
  config.q = 1;
  const auto oracle = OracleInstance::build(OracleKind::kFeistel, {n, 2, 4}, 1);
  const OracleView view(oracle);
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(simon_trial(view, config, rng));
  state.counters["queries"] = 2.0 * (n + 5);
}
BENCHMARK(BM_SimonTrial)->DenseRange(4, 10, 2)->Unit(benchmark::kMicrosecond);

void BM_GkTrial(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  AlgorithmConfig config;
  config.algorithm = Algorithm::kKPlus1;
  config.params = {n, 4, 1};
  config.q = 1;
  const auto oracle = OracleInstance::build(OracleKind::kUnbalanced, {n, 4, 5}, 1);
  const OracleView view(oracle);
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(simon_trial(view, config, rng));
}
BENCHMARK(BM_GkTrial)->Arg(4)->Arg(6)->Unit(benchmark::kMicrosecond);

void BM_RandomPermutation(benchmark::State& state) {
  const auto bits = static_cast<unsigned>(state.range(0));
  Rng rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(random_permutation_table(bits, rng));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << bits));
}
BENCHMARK(BM_RandomPermutation)->Arg(12)->Arg(16)->Arg(20)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_Nullspace(benchmark::State& state) {
  const auto cols = static_cast<unsigned>(state.range(0));
  Rng rng(5);
  gf2::BitMatrix m(cols);
  for (unsigned i = 0; i < cols + 5; ++i) m.append_row(rng.bits(cols));
  for (auto _ : state) benchmark::DoNotOptimize(gf2::nullspace_basis(m));
}
BENCHMARK(BM_Nullspace)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_HadamardRegister(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  const auto prepared = SparseState::uniform(RegisterLayout::uniform(4, n), 0);
  for (auto _ : state) {
    SparseState s = prepared;
    s.hadamard_register(0);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_HadamardRegister)->DenseRange(6, 12, 2);

void BM_ClassicalFs4(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  const auto oracle = OracleInstance::build(OracleKind::kFeistel, {n, 2, 4}, 6);
  for (auto _ : state) benchmark::DoNotOptimize(count_pairs_fs4(oracle));
}
BENCHMARK(BM_ClassicalFs4)->Arg(8)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
