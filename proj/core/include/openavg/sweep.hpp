#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "openavg/bounds.hpp"
#include "openavg/params.hpp"
#include "openavg/simulator.hpp"

namespace openavg {

/// Parameter grid for the CLI commands. All sweeps anchor lambda_r and set
/// lambda_c = ratio * lambda_r; the bounds depend on the rates only through
/// the ratio, so the anchor is a pure convention.
struct SweepSpec {
    std::vector<int> n_agents = {10};
    std::vector<double> ratios;          ///< lambda_c / lambda_r values, >= 0
    double lambda_r = 1.0;
    double sigma_sq = 1.0;
    std::vector<BoundMethod> methods = {BoundMethod::ping, BoundMethod::infection_matrix,
                                        BoundMethod::infection_algebraic, BoundMethod::relaxed};
    Algorithm algorithm = Algorithm::gossip;
    int replications = 10000;
    int events = 0;                      ///< 0: default_event_count per point
    std::uint64_t seed = 1;
    int threads = 0;                     ///< <= 0: hardware concurrency
    bool time_averaged = false;

    /// Throws std::invalid_argument on empty lists or out-of-range values.
    void validate() const;
};

/// n log-spaced points over [lo, hi], inclusive of both ends. lo, hi > 0.
std::vector<double> log_spaced(double lo, double hi, int n);

/// Shortest-round-trip decimal formatting; the building block of the
/// byte-identical CSV contract.
std::string format_double(double v);

/// `bounds`: one row per (n_agents, ratio), sorted, with the selected bound
/// methods as columns, values divided by sigma_sq (i.e. in units of sigma^2).
void write_bounds_csv(const SweepSpec& spec, std::ostream& out);

/// `simulate`: one row per (n_agents, ratio), sorted. Each point runs
/// steady_state_mse with a seed derived from (spec.seed, n_agents, ratio),
/// so a row's result does not depend on which other rows are present.
void write_simulate_csv(const SweepSpec& spec, std::ostream& out);

/// `age-cdf`: empirical (optimal-knowledge dynamics), Ping and Infection
/// age CDFs on the given grid of ages for a single (n_agents, ratio) point.
void write_age_cdf_csv(const SweepSpec& spec, const std::vector<double>& age_grid,
                       std::ostream& out);

enum class Figure : std::uint8_t { fig1, fig2, fig3 };

/// Preset sweeps behind the standard comparison figures; overridable knobs
/// (seed, replications, events, threads) are taken from `spec`.
void write_figure_csv(Figure figure, const SweepSpec& spec, std::ostream& out);

/// Writes with the given writer to `path` atomically enough for our purposes
/// (open, write, flush; throws std::runtime_error on failure).
void write_csv_file(const std::string& path, const std::function<void(std::ostream&)>& writer);

}  // namespace openavg
