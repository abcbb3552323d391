#include <benchmark/benchmark.h>

#include "openavg/bounds.hpp"
#include "openavg/infection.hpp"

using namespace openavg;

namespace {

SystemParams make_params(int n, double ratio) {
    SystemParams p;
    p.n_agents = n;
    p.lambda_r = 1.0;
    p.lambda_c = ratio;
    return p;
}

void BM_InfectionBoundMatrix(benchmark::State& state) {
    const auto params = make_params(static_cast<int>(state.range(0)), 10.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(infection_bound_matrix(params).value);
    }
    state.SetComplexityN(state.range(0));
}

void BM_InfectionBoundAlgebraic(benchmark::State& state) {
    const auto params = make_params(static_cast<int>(state.range(0)), 10.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(infection_bound_algebraic(params).value);
    }
    state.SetComplexityN(state.range(0));
}

void BM_PingBoundQuadrature(benchmark::State& state) {
    const auto params = make_params(static_cast<int>(state.range(0)), 10.0);
    const auto age = ping_age_distribution(params);
    for (auto _ : state) {
        benchmark::DoNotOptimize(general_bound(params, age).value);
    }
}

void BM_InfectionCdfSolve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto chain = make_infection_chain(n, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_pk(chain, 1.0));
    }
}

}  // namespace

BENCHMARK(BM_InfectionBoundMatrix)->RangeMultiplier(10)->Range(10, 10000)->Complexity(benchmark::oN);
BENCHMARK(BM_InfectionBoundAlgebraic)->RangeMultiplier(10)->Range(10, 10000)->Complexity(benchmark::oN);
BENCHMARK(BM_PingBoundQuadrature)->Arg(10)->Arg(100);
BENCHMARK(BM_InfectionCdfSolve)->Arg(10)->Arg(50);
