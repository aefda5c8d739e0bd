// Compares the OpenMP operator kernels against their serial references on a
// production-sized model. Run with --benchmark_min_time=... as needed.

#include <benchmark/benchmark.h>

#include "qtdp/models.hpp"
#include "qtdp/risk_sensitive.hpp"

namespace {

using namespace qtdp;

const DynamicProgram& savings_large() {
    static const DynamicProgram dp = [] {
        SavingsConfig cfg;
        cfg.utility = {2.0};
        cfg.beta = 0.95;
        cfg.wealth = {300, 0.1, 30.0, true};
        cfg.consumption = {120, 0.05, 30.0, true};
        cfg.chain = MarkovChain{3,
                                {0.85, 0.1, 0.05, 0.1, 0.8, 0.1, 0.05, 0.15, 0.8},
                                {0.5, 1.0, 1.8}};
        cfg.income_shock = lognormal_quadrature(0.0, 0.2, 5);
        cfg.gross_return = 1.02;
        return build_optimal_savings(cfg);
    }();
    return dp;
}

const BuiltGrowthModel& growth_large() {
    static const BuiltGrowthModel m = [] {
        GrowthConfig cfg;
        cfg.utility = {1.0};
        cfg.beta = 0.8;
        cfg.eta = 1.2;
        cfg.capital = {400, 0.7, 6.0, true};
        cfg.investment_floor = 0.5;
        cfg.shock_nodes = 11;
        cfg.gamma_risk = 2.0;
        return build_rs_growth(cfg);
    }();
    return m;
}

QFunction seed_q(const DynamicProgram& dp) {
    QFunction g = QFunction::zeros(dp);
    for (std::size_t i = 0; i < g.values.size(); ++i)
        g.values[i] = 0.01 * static_cast<double>(i % 17);
    return g;
}

void bm_apply_parallel(benchmark::State& state) {
    const DynamicProgram& dp = savings_large();
    const QFunction g = seed_q(dp);
    for (auto _ : state) benchmark::DoNotOptimize(apply_S(dp, g));
}

void bm_apply_serial(benchmark::State& state) {
    const DynamicProgram& dp = savings_large();
    const QFunction g = seed_q(dp);
    for (auto _ : state) benchmark::DoNotOptimize(apply_S_serial(dp, g));
}

void bm_apply_rs_parallel(benchmark::State& state) {
    const BuiltGrowthModel& m = growth_large();
    const QFunction g = seed_q(m.dp);
    for (auto _ : state) benchmark::DoNotOptimize(apply_S_rs(m.dp, g, m.risk));
}

void bm_apply_rs_serial(benchmark::State& state) {
    const BuiltGrowthModel& m = growth_large();
    const QFunction g = seed_q(m.dp);
    for (auto _ : state) benchmark::DoNotOptimize(apply_S_rs_serial(m.dp, g, m.risk));
}

BENCHMARK(bm_apply_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_apply_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_apply_rs_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_apply_rs_serial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
