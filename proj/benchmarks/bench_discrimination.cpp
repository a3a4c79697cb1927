#include <benchmark/benchmark.h>

#include "causalbench/discrimination.hpp"

using namespace causalbench;
namespace disc = causalbench::discrimination;

namespace {

disc::PairSample sample_pair() {
    disc::PairSample p;
    p.tag = disc::SetTag::commuting;
    p.phi = 0.4;
    p.theta_a = 1.9;
    p.theta_b = -0.8;
    p.weight = 1.0;
    return p;
}

}  // namespace

static void BM_switch_overlap(benchmark::State& state) {
    const double nbar = double(state.range(0));
    const auto trunc = fock::truncation_order(nbar);
    const auto p = sample_pair();
    const Matrix2 rho = 0.5 * Matrix2::Identity();
    for (auto _ : state)
        benchmark::DoNotOptimize(disc::switch_overlap(p, nbar, rho, trunc));
}
BENCHMARK(BM_switch_overlap)->Arg(5)->Arg(20)->Arg(200);

static void BM_four_box_overlap(benchmark::State& state) {
    const double nbar = double(state.range(0));
    const auto trunc = fock::truncation_order(nbar / 2.0);
    const auto p = sample_pair();
    const Matrix2 rho = 0.5 * Matrix2::Identity();
    for (auto _ : state)
        benchmark::DoNotOptimize(disc::four_box_overlap(p, nbar, rho, trunc));
}
BENCHMARK(BM_four_box_overlap)->Arg(5)->Arg(20)->Arg(200);

static void BM_average_success_grid(benchmark::State& state) {
    disc::TaskConfig cfg;
    cfg.setup = disc::Setup::quantum_switch;
    cfg.nbar = 20.0;
    const int g = int(state.range(0));
    cfg.grid = {g, g, g, g, g};
    for (auto _ : state)
        benchmark::DoNotOptimize(disc::average_success(cfg));
}
BENCHMARK(BM_average_success_grid)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_statevector_oracle_qs(benchmark::State& state) {
    const double nbar = double(state.range(0));
    const auto trunc = fock::truncation_order(nbar);
    const auto p = sample_pair();
    const Matrix2 rho = 0.5 * Matrix2::Identity();
    for (auto _ : state)
        benchmark::DoNotOptimize(
            disc::statevector_oracle(disc::Setup::quantum_switch, p, nbar, rho, trunc));
}
BENCHMARK(BM_statevector_oracle_qs)->Arg(20)->Arg(200);

BENCHMARK_MAIN();
