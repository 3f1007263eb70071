#include <benchmark/benchmark.h>

#include "twistforge/twist.hpp"
#include "twistforge/uncertainty.hpp"

using namespace twistforge;

namespace {

struct Dense {
  GridRep rep;
  GridOperator op;
  DenseState state;
};

Dense make_dense(int rank, int n) {
  std::vector<int> dims{0, 1, 2};
  dims.resize(static_cast<std::size_t>(rank));
  GridRep rep(dims, {n, 12.0}, {{Param::hbar, 1.0}, {Param::alpha, 0.3}});
  GridState s = rep.gaussian({});
  GridOperator op = rep.lower(WeylExpression::position(rank - 1));
  DenseState dense = to_dense(rep, s.amplitudes);
  return {std::move(rep), std::move(op), std::move(dense)};
}

void axis_kernel(benchmark::State& st, bool parallel) {
  Dense d = make_dense(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(apply_dense(d.rep, d.op, d.state, parallel));
}

void BM_AxisSerial(benchmark::State& st) { axis_kernel(st, false); }
void BM_AxisParallel(benchmark::State& st) { axis_kernel(st, true); }

void suite(benchmark::State& st, bool parallel) {
  StateSampler sm;
  sm.count = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(uncertainty_suite("iso2", 0.1, 1.0, {}, sm, parallel));
}

void BM_SuiteSerial(benchmark::State& st) { suite(st, false); }
void BM_SuiteParallel(benchmark::State& st) { suite(st, true); }

void coassoc(benchmark::State& st, bool parallel) {
  Twist f = build_twist(TwistSpec::simplified(TwistCase::i, 4));
  for (auto _ : st) benchmark::DoNotOptimize(check_coassoc_all(f, parallel));
}

void BM_CoassocSerial(benchmark::State& st) { coassoc(st, false); }
void BM_CoassocParallel(benchmark::State& st) { coassoc(st, true); }

}  // namespace

BENCHMARK(BM_AxisSerial)->Args({2, 256})->Args({3, 64})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AxisParallel)->Args({2, 256})->Args({3, 64})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SuiteSerial)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SuiteParallel)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoassocSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoassocParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
