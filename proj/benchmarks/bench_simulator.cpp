#include <benchmark/benchmark.h>

#include "openavg/simulator.hpp"

using namespace openavg;

namespace {

SystemParams make_params(int n, double ratio) {
    SystemParams p;
    p.n_agents = n;
    p.lambda_r = 1.0;
    p.lambda_c = ratio;
    return p;
}

void BM_ReplicationGossip(benchmark::State& state) {
    const auto params = make_params(static_cast<int>(state.range(0)), 1.0);
    SimOptions opts;
    opts.threads = 1;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            steady_state_mse(params, Algorithm::gossip, 1, 200, ++seed, opts).mean);
    }
    state.SetItemsProcessed(state.iterations() * 200);
}

void BM_ReplicationOptimal(benchmark::State& state) {
    const auto params = make_params(static_cast<int>(state.range(0)), 1.0);
    SimOptions opts;
    opts.threads = 1;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            steady_state_mse(params, Algorithm::optimal, 1, 200, ++seed, opts).mean);
    }
    state.SetItemsProcessed(state.iterations() * 200);
}

void BM_EventGeneration(benchmark::State& state) {
    const auto params = make_params(static_cast<int>(state.range(0)), 2.0);
    RngStream rng(1, 0);
    double t = 0.0;
    for (auto _ : state) {
        t = next_event(params, rng, t).time;
        benchmark::DoNotOptimize(t);
    }
    state.SetItemsProcessed(state.iterations());
}

}  // namespace

BENCHMARK(BM_ReplicationGossip)->Arg(10)->Arg(100);
BENCHMARK(BM_ReplicationOptimal)->Arg(10)->Arg(100);
BENCHMARK(BM_EventGeneration)->Arg(10)->Arg(100)->Arg(1000);

BENCHMARK_MAIN();
