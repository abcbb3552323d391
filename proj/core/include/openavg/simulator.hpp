#pragma once

#include <cstdint>
#include <vector>

#include "openavg/age_distribution.hpp"
#include "openavg/params.hpp"
#include "openavg/rng.hpp"

namespace openavg {

enum class Algorithm : std::uint8_t { gossip, optimal };

const char* to_string(Algorithm algorithm) noexcept;

struct SimEvent {
    enum class Kind : std::uint8_t { replacement, communication };

    double time = 0.0;
    Kind kind = Kind::replacement;
    int agent = 0;  ///< replaced agent, or the smaller id of the communicating pair
    int peer = -1;  ///< larger id of the pair; -1 for replacements
};

/// Most recent (value, emission time) an agent holds about a peer.
/// timestamp = -infinity encodes "never heard of" (age +infinity).
struct KnowledgeEntry {
    double value = 0.0;
    double timestamp = 0.0;
};

/// Full simulation state. Gossip estimates and knowledge tables evolve side
/// by side off the same event stream (neither consumes randomness), so one
/// trajectory serves both algorithms.
struct SimState {
    double clock = 0.0;
    std::vector<double> values;             ///< intrinsic values x_i
    std::vector<double> gossip_estimates;   ///< gossip y_i
    std::vector<std::vector<KnowledgeEntry>> knowledge;  ///< knowledge[i][j]

    bool knows(int i, int j) const;
    /// Age of i's information about j at the state clock; +infinity when absent.
    double age_of(int i, int j) const;
};

/// Fresh random start: i.i.d. values, gossip estimates equal to own values,
/// knowledge tables holding only the self entry, clock 0.
SimState make_initial_state(const SystemParams& params, RngStream& rng);

/// Next event of the merged Poisson process after `now`: inter-arrival
/// Exponential(N lambda_r + N(N-1)/2 lambda_c), then kind and target drawn
/// categorically. Throws std::invalid_argument when both rates are zero.
SimEvent next_event(const SystemParams& params, RngStream& rng, double now);

/// Replacement of `agent` at the state clock: fresh value, gossip estimate
/// reset to it, knowledge cleared to the self entry. Nobody else's table is
/// touched; their entries about this agent silently go stale.
void apply_replacement(SimState& state, int agent, const SystemParams& params, RngStream& rng);

/// Pairwise averaging: both estimates become the pre-interaction mean.
void apply_communication_gossip(SimState& state, int i, int j);

/// Knowledge exchange at time `now`: both tables become the entry-wise
/// max-timestamp merge, with the entries for i and j refreshed to their
/// current values at `now`. Advances the state clock to `now`.
void apply_communication_optimal(SimState& state, int i, int j, double now);

/// MSE-optimal estimate of the current average from agent i's table:
/// (1/N) [ x_i + sum over known peers of e^{-lambda_r * age} * value ],
/// unknown peers contributing 0.
double optimal_estimate(const SimState& state, int i, double now, const SystemParams& params);

/// Snapshot criterion C(t) = (1/N) sum_j (xbar - y_j)^2 for the chosen
/// algorithm's estimates at the state clock.
double mse_snapshot(const SimState& state, Algorithm algorithm, const SystemParams& params);

struct MseEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    int n_replications = 0;
    Algorithm algorithm = Algorithm::gossip;
    SystemParams params;
};

struct SimOptions {
    int threads = 1;            ///< <= 0 selects the hardware concurrency
    bool time_averaged = false; ///< average C(t) over a second window of
                                ///< n_events instead of the final snapshot
};

/// Monte Carlo estimate of the steady-state MSE: per replication, run
/// n_events events from a fresh start and record C at the final event time
/// (or the time average over a follow-up window of the same length when
/// opts.time_averaged). Replication r draws from RngStream(master_seed, r)
/// and results reduce in replication order, so the estimate is identical
/// for any thread count.
MseEstimate steady_state_mse(const SystemParams& params, Algorithm algorithm, int n_replications,
                             int n_events, std::uint64_t master_seed, const SimOptions& opts = {});

/// Event count that plays the role of "long enough for steady state" when
/// the caller does not fix one: 200 events at N = 10, scaled by
/// N (1 + (N-1) lambda_c / (2 lambda_r)) relative to that anchor.
int default_event_count(const SystemParams& params);

struct EmpiricalAgeCdf {
    std::vector<double> grid;    ///< sorted query ages
    std::vector<double> cdf;     ///< fraction of sampled ages <= grid point
    std::int64_t n_samples = 0;  ///< ordered pairs sampled (includes infinite ages)

    /// Binomial standard error at grid index k.
    double std_error(std::size_t k) const;
    /// Step-function view for use with general_bound and friends.
    AgeDistribution as_age_distribution() const;
};

/// Ages now - t_j^{(i)} over all ordered pairs i != j at the end of each
/// replication of the optimal-knowledge dynamics; absent entries count as
/// +infinity (they exceed every grid point). Ages are read at the arrival
/// time of the (n_events+1)-th event, before applying it, so the sample sees
/// the time-stationary state rather than a just-refreshed one. Deterministic
/// like steady_state_mse.
EmpiricalAgeCdf empirical_age_cdf(const SystemParams& params, int n_replications, int n_events,
                                  std::vector<double> grid, std::uint64_t master_seed,
                                  const SimOptions& opts = {});

}  // namespace openavg
