#include <benchmark/benchmark.h>

#include "muhfl/fromdisj.hpp"
#include "muhfl/ops.hpp"
#include "muhfl/parser.hpp"
#include "muhfl/printer.hpp"
#include "muhfl/semantics.hpp"
#include "muhfl/todisj.hpp"
#include "testutil.hpp"

using namespace muhfl;

static void BM_ParseSystem(benchmark::State& state) {
  std::string text = print_system(testing::d_sum_system(3));
  for (auto _ : state) benchmark::DoNotOptimize(parse_system(text));
}
BENCHMARK(BM_ParseSystem);

static void BM_Raise(benchmark::State& state) {
  FormulaPtr f = testing::phi_sum(3);
  for (auto _ : state) benchmark::DoNotOptimize(raise_top(f));
}
BENCHMARK(BM_Raise);

static void BM_Normalize(benchmark::State& state) {
  FormulaPtr f = testing::phi_sum(3);
  for (auto _ : state) benchmark::DoNotOptimize(normalize(f));
}
BENCHMARK(BM_Normalize);

static void BM_LowerDSum(benchmark::State& state) {
  EquationSystem es = testing::d_sum_system(3);
  for (auto _ : state) benchmark::DoNotOptimize(lower_system(es));
}
BENCHMARK(BM_LowerDSum);

static void BM_LowerOrder2(benchmark::State& state) {
  EquationSystem es = testing::sum_plus_system(3);
  for (auto _ : state) benchmark::DoNotOptimize(lower_system(es));
}
BENCHMARK(BM_LowerOrder2);

static void BM_SearchSum(benchmark::State& state) {
  long n = state.range(0);
  FormulaPtr f = testing::phi_sum(n);
  for (auto _ : state) benchmark::DoNotOptimize(search_valid(f));
}
BENCHMARK(BM_SearchSum)->Arg(-1)->Arg(3);

static void BM_KleeneLowered(benchmark::State& state) {
  EquationSystem low = lower_system(testing::d_sum_system(3));
  for (auto _ : state) benchmark::DoNotOptimize(kleene_eval(low, 16));
}
BENCHMARK(BM_KleeneLowered);

BENCHMARK_MAIN();
