#include "openavg/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace openavg {

namespace {

constexpr double kNeverHeard = -std::numeric_limits<double>::infinity();

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs body(r) for r in [0, count) across the requested number of threads.
/// Work is split by index, so any schedule produces the same per-index output.
template <class Body>
void parallel_for_index(int count, int threads, const Body& body) {
    threads = std::min(resolve_threads(threads), std::max(count, 1));
    if (threads <= 1) {
        for (int r = 0; r < count; ++r) body(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (int r = t; r < count; r += threads) body(r);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

const char* to_string(Algorithm algorithm) noexcept {
    return algorithm == Algorithm::gossip ? "gossip" : "optimal";
}

bool SimState::knows(int i, int j) const {
    return knowledge[i][j].timestamp != kNeverHeard;
}

double SimState::age_of(int i, int j) const {
    return clock - knowledge[i][j].timestamp;
}

SimState make_initial_state(const SystemParams& params, RngStream& rng) {
    params.validate();
    const int n = params.n_agents;
    SimState state;
    state.clock = 0.0;
    state.values.resize(n);
    state.gossip_estimates.resize(n);
    state.knowledge.assign(n, std::vector<KnowledgeEntry>(n, {0.0, kNeverHeard}));
    for (int i = 0; i < n; ++i) {
        state.values[i] = sample_value(params, rng);
        state.gossip_estimates[i] = state.values[i];
        state.knowledge[i][i] = {state.values[i], 0.0};
    }
    return state;
}

SimEvent next_event(const SystemParams& params, RngStream& rng, double now) {
    params.validate();
    const int n = params.n_agents;
    const double replacement_rate = n * params.lambda_r;
    const double n_pairs = 0.5 * n * (n - 1);
    const double communication_rate = n_pairs * params.lambda_c;
    const double total_rate = replacement_rate + communication_rate;
    if (total_rate <= 0.0) throw std::invalid_argument("next_event: no dynamics (all rates zero)");

    SimEvent event;
    event.time = now + rng.exponential(total_rate);
    if (rng.uniform01() * total_rate < replacement_rate) {
        event.kind = SimEvent::Kind::replacement;
        event.agent = static_cast<int>(rng.uniform_int(n));
        event.peer = -1;
    } else {
        event.kind = SimEvent::Kind::communication;
        // unrank a uniform pair index into (i, j), i < j
        auto pair_index = static_cast<long>(rng.uniform_int(static_cast<std::uint64_t>(n_pairs)));
        int i = 0;
        while (pair_index >= n - 1 - i) {
            pair_index -= n - 1 - i;
            ++i;
        }
        event.agent = i;
        event.peer = i + 1 + static_cast<int>(pair_index);
    }
    return event;
}

void apply_replacement(SimState& state, int agent, const SystemParams& params, RngStream& rng) {
    const double fresh = sample_value(params, rng);
    state.values[agent] = fresh;
    state.gossip_estimates[agent] = fresh;
    auto& table = state.knowledge[agent];
    std::fill(table.begin(), table.end(), KnowledgeEntry{0.0, kNeverHeard});
    table[agent] = {fresh, state.clock};
}

void apply_communication_gossip(SimState& state, int i, int j) {
    const double mean = 0.5 * (state.gossip_estimates[i] + state.gossip_estimates[j]);
    state.gossip_estimates[i] = mean;
    state.gossip_estimates[j] = mean;
}

void apply_communication_optimal(SimState& state, int i, int j, double now) {
    state.clock = now;
    auto& table_i = state.knowledge[i];
    auto& table_j = state.knowledge[j];
    const int n = static_cast<int>(table_i.size());
    for (int k = 0; k < n; ++k) {
        const KnowledgeEntry& best =
            table_i[k].timestamp >= table_j[k].timestamp ? table_i[k] : table_j[k];
        table_i[k] = best;
        table_j[k] = best;
    }
    table_i[i] = table_j[i] = {state.values[i], now};
    table_i[j] = table_j[j] = {state.values[j], now};
}

double optimal_estimate(const SimState& state, int i, double now, const SystemParams& params) {
    const auto& table = state.knowledge[i];
    const int n = static_cast<int>(table.size());
    double acc = state.values[i];  // self entry is exact, age 0
    for (int j = 0; j < n; ++j) {
        if (j == i || table[j].timestamp == kNeverHeard) continue;  // absent contributes 0
        acc += std::exp(-params.lambda_r * (now - table[j].timestamp)) * table[j].value;
    }
    return acc / n;
}

double mse_snapshot(const SimState& state, Algorithm algorithm, const SystemParams& params) {
    const int n = static_cast<int>(state.values.size());
    const double average =
        std::accumulate(state.values.begin(), state.values.end(), 0.0) / n;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const double estimate = algorithm == Algorithm::gossip
                                    ? state.gossip_estimates[j]
                                    : optimal_estimate(state, j, state.clock, params);
        const double err = average - estimate;
        acc += err * err;
    }
    return acc / n;
}

namespace {

void step(SimState& state, const SimEvent& event, const SystemParams& params, RngStream& rng) {
    if (event.kind == SimEvent::Kind::replacement) {
        state.clock = event.time;
        apply_replacement(state, event.agent, params, rng);
    } else {
        apply_communication_gossip(state, event.agent, event.peer);
        apply_communication_optimal(state, event.agent, event.peer, event.time);
    }
}

double run_replication(const SystemParams& params, Algorithm algorithm, int n_events,
                       RngStream rng, bool time_averaged) {
    SimState state = make_initial_state(params, rng);
    for (int e = 0; e < n_events; ++e) step(state, next_event(params, rng, state.clock), params, rng);
    if (!time_averaged) return mse_snapshot(state, algorithm, params);

    // time-weighted average of the piecewise-constant C(t) over a second
    // window of n_events
    const double window_start = state.clock;
    double weighted = 0.0;
    for (int e = 0; e < n_events; ++e) {
        const double c = mse_snapshot(state, algorithm, params);
        const SimEvent event = next_event(params, rng, state.clock);
        weighted += c * (event.time - state.clock);
        step(state, event, params, rng);
    }
    const double window = state.clock - window_start;
    return window > 0.0 ? weighted / window : mse_snapshot(state, algorithm, params);
}

MseEstimate reduce_replications(const std::vector<double>& samples, Algorithm algorithm,
                                const SystemParams& params) {
    MseEstimate estimate;
    estimate.algorithm = algorithm;
    estimate.params = params;
    estimate.n_replications = static_cast<int>(samples.size());
    const double n = static_cast<double>(samples.size());
    estimate.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    if (samples.size() > 1) {
        double ss = 0.0;
        for (double x : samples) ss += (x - estimate.mean) * (x - estimate.mean);
        estimate.std_error = std::sqrt(ss / (n - 1.0) / n);
    }
    return estimate;
}

}  // namespace

MseEstimate steady_state_mse(const SystemParams& params, Algorithm algorithm, int n_replications,
                             int n_events, std::uint64_t master_seed, const SimOptions& opts) {
    params.validate();
    if (n_replications < 1) throw std::invalid_argument("steady_state_mse: n_replications >= 1");
    if (n_events < 1) throw std::invalid_argument("steady_state_mse: n_events >= 1");

    std::vector<double> samples(n_replications);
    parallel_for_index(n_replications, opts.threads, [&](int r) {
        samples[r] = run_replication(params, algorithm, n_events,
                                     RngStream(master_seed, static_cast<std::uint64_t>(r)),
                                     opts.time_averaged);
    });
    return reduce_replications(samples, algorithm, params);
}

int default_event_count(const SystemParams& params) {
    params.validate();
    const double n = static_cast<double>(params.n_agents);
    double scale;
    if (params.lambda_r == 0.0) {
        scale = n * (n - 1.0) / 90.0;  // communication-dominated limit of the ratio below
    } else {
        const double ratio = params.lambda_c / params.lambda_r;
        // anchored at 200 events for N = 10 at the same ratio
        scale = n * (1.0 + 0.5 * (n - 1.0) * ratio) / (10.0 * (1.0 + 4.5 * ratio));
    }
    return std::max(1, static_cast<int>(std::lround(200.0 * scale)));
}

double EmpiricalAgeCdf::std_error(std::size_t k) const {
    const double p = cdf[k];
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
}

AgeDistribution EmpiricalAgeCdf::as_age_distribution() const {
    AgeDistribution age;
    age.cdf = [grid = grid, values = cdf](double s) {
        const auto it = std::upper_bound(grid.begin(), grid.end(), s);
        return it == grid.begin() ? 0.0 : values[static_cast<std::size_t>(it - grid.begin()) - 1];
    };
    age.tail_cutoff = grid.empty() ? 0.0 : grid.back();
    age.mass_at_infinity = cdf.empty() ? 1.0 : 1.0 - cdf.back();
    return age;
}

EmpiricalAgeCdf empirical_age_cdf(const SystemParams& params, int n_replications, int n_events,
                                  std::vector<double> grid, std::uint64_t master_seed,
                                  const SimOptions& opts) {
    params.validate();
    if (n_replications < 1) throw std::invalid_argument("empirical_age_cdf: n_replications >= 1");
    if (!std::is_sorted(grid.begin(), grid.end()))
        std::sort(grid.begin(), grid.end());

    const int n = params.n_agents;
    const std::size_t n_bins = grid.size();
    // per-replication histograms of "first grid point >= age"; integer counts
    // reduce exactly regardless of order
    std::vector<std::vector<std::int64_t>> counts(n_replications,
                                                  std::vector<std::int64_t>(n_bins, 0));
    parallel_for_index(n_replications, opts.threads, [&](int r) {
        RngStream rng(master_seed, static_cast<std::uint64_t>(r));
        SimState state = make_initial_state(params, rng);
        for (int e = 0; e < n_events; ++e)
            step(state, next_event(params, rng, state.clock), params, rng);
        // sample at the arrival time of the next event *without* applying it:
        // a state observed just after an event is biased fresh (the event's
        // own refresh), whereas a Poisson arrival sees the stationary state
        state.clock = next_event(params, rng, state.clock).time;
        auto& hist = counts[r];
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j || !state.knows(i, j)) continue;  // infinite ages exceed the grid
                const double age = state.age_of(i, j);
                const auto bin = std::lower_bound(grid.begin(), grid.end(), age) - grid.begin();
                if (static_cast<std::size_t>(bin) < n_bins) ++hist[bin];
            }
        }
    });

    EmpiricalAgeCdf result;
    result.grid = std::move(grid);
    result.cdf.assign(n_bins, 0.0);
    result.n_samples =
        static_cast<std::int64_t>(n_replications) * static_cast<std::int64_t>(n) *
        static_cast<std::int64_t>(n - 1);
    std::vector<std::int64_t> total(n_bins, 0);
    for (const auto& hist : counts)
        for (std::size_t k = 0; k < n_bins; ++k) total[k] += hist[k];
    std::int64_t running = 0;
    for (std::size_t k = 0; k < n_bins; ++k) {
        running += total[k];
        result.cdf[k] = static_cast<double>(running) / static_cast<double>(result.n_samples);
    }
    return result;
}

}  // namespace openavg
