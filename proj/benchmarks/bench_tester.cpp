#include <benchmark/benchmark.h>

#include "causalbench/sdp.hpp"
#include "causalbench/tester.hpp"

using namespace causalbench;
namespace tst = causalbench::tester;

static void BM_finite_payoff(benchmark::State& state) {
    const int g = int(state.range(0));
    const auto trunc = fock::truncation_order(20.0);
    tst::PayoffGrids grids{g, g, g, g};
    for (auto _ : state)
        benchmark::DoNotOptimize(tst::finite_payoff(20.0, grids, trunc));
}
BENCHMARK(BM_finite_payoff)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_haar_average(benchmark::State& state) {
    const auto ideal = tst::ideal_payoff();
    for (auto _ : state)
        benchmark::DoNotOptimize(tst::haar_average_oracle(ideal, int(state.range(0)), 5));
}
BENCHMARK(BM_haar_average)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_optimize_fco_ideal(benchmark::State& state) {
    const auto ideal = tst::ideal_payoff();
    const bool iso = state.range(0) != 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            sdp::optimize_fco(ideal, tst::Order::a_before_b, iso, 1e-6, 200000));
}
BENCHMARK(BM_optimize_fco_ideal)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_tester_from_circuit(benchmark::State& state) {
    const auto circuit = tst::perfect_discrimination_circuit();
    for (auto _ : state)
        benchmark::DoNotOptimize(tst::tester_from_circuit(circuit));
}
BENCHMARK(BM_tester_from_circuit)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
