#include "openavg/sweep.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "openavg/infection.hpp"

namespace openavg {

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

/// Per-point seed: intrinsic to (master seed, N, ratio) so a row's values do
/// not depend on the rest of the grid.
std::uint64_t point_seed(std::uint64_t master, int n_agents, double ratio) {
    std::uint64_t s = mix64(master ^ 0x8000000000000001ULL);
    s = mix64(s ^ static_cast<std::uint64_t>(n_agents));
    s = mix64(s ^ std::bit_cast<std::uint64_t>(ratio));
    return s;
}

template <class T>
std::string join(const std::vector<T>& values, const std::function<std::string(const T&)>& fmt) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += fmt(values[i]);
    }
    return out;
}

std::string format_int(long v) { return std::to_string(v); }

SystemParams point_params(const SweepSpec& spec, int n_agents, double ratio) {
    SystemParams params;
    params.n_agents = n_agents;
    params.lambda_r = spec.lambda_r;
    params.lambda_c = ratio * spec.lambda_r;
    params.sigma_sq = spec.sigma_sq;
    return params;
}

std::vector<int> sorted_agents(const SweepSpec& spec) {
    auto agents = spec.n_agents;
    std::sort(agents.begin(), agents.end());
    return agents;
}

std::vector<double> sorted_ratios(const SweepSpec& spec) {
    auto ratios = spec.ratios;
    std::sort(ratios.begin(), ratios.end());
    return ratios;
}

void write_common_config(std::ostream& out, const char* command, const SweepSpec& spec) {
    out << "# openavg " << command
        << " n_agents=" << join<int>(sorted_agents(spec), [](const int& v) { return std::to_string(v); })
        << " ratios=" << join<double>(sorted_ratios(spec), [](const double& v) { return format_double(v); })
        << " lambda_r=" << format_double(spec.lambda_r)
        << " sigma_sq=" << format_double(spec.sigma_sq);
}

BoundResult evaluate(BoundMethod method, const SystemParams& params) {
    switch (method) {
        case BoundMethod::ping: return ping_bound(params);
        case BoundMethod::infection_matrix: return infection_bound_matrix(params);
        case BoundMethod::infection_algebraic: return infection_bound_algebraic(params);
        case BoundMethod::relaxed: return relaxed_bound(params);
        case BoundMethod::generic_quadrature:
            return general_bound(params, ping_age_distribution(params));
    }
    throw std::logic_error("evaluate: unknown bound method");
}

std::string method_column(BoundMethod method) {
    switch (method) {
        case BoundMethod::ping: return "ping";
        case BoundMethod::infection_matrix: return "infection_matrix";
        case BoundMethod::infection_algebraic: return "infection_algebraic";
        case BoundMethod::relaxed: return "relaxed";
        case BoundMethod::generic_quadrature: return "generic_quadrature";
    }
    return "?";
}

}  // namespace

void SweepSpec::validate() const {
    if (n_agents.empty()) throw std::invalid_argument("SweepSpec: n_agents list is empty");
    for (int n : n_agents)
        if (n < 2) throw std::invalid_argument("SweepSpec: n_agents entries must be >= 2");
    if (ratios.empty()) throw std::invalid_argument("SweepSpec: ratio grid is empty");
    for (double r : ratios)
        if (!(r >= 0.0)) throw std::invalid_argument("SweepSpec: ratios must be >= 0");
    if (!(lambda_r > 0.0)) throw std::invalid_argument("SweepSpec: lambda_r must be > 0");
    if (!(sigma_sq > 0.0)) throw std::invalid_argument("SweepSpec: sigma_sq must be > 0");
    if (methods.empty()) throw std::invalid_argument("SweepSpec: methods list is empty");
    if (replications < 1) throw std::invalid_argument("SweepSpec: replications must be >= 1");
    if (events < 0) throw std::invalid_argument("SweepSpec: events must be >= 0");
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("log_spaced: need 0 < lo < hi");
    if (n < 2) throw std::invalid_argument("log_spaced: need at least 2 points");
    std::vector<double> grid(n);
    const double step = (std::log(hi) - std::log(lo)) / (n - 1);
    for (int i = 0; i < n; ++i) grid[i] = std::exp(std::log(lo) + step * i);
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

std::string format_double(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
    return std::string(buf, end);
}

void write_bounds_csv(const SweepSpec& spec, std::ostream& out) {
    spec.validate();
    write_common_config(out, "bounds", spec);
    out << " methods="
        << join<BoundMethod>(spec.methods,
                             [](const BoundMethod& m) { return method_column(m); })
        << "\n";

    out << "n_agents,ratio";
    for (auto method : spec.methods) out << ',' << method_column(method);
    out << "\n";

    for (int n : sorted_agents(spec)) {
        for (double ratio : sorted_ratios(spec)) {
            const auto params = point_params(spec, n, ratio);
            out << n << ',' << format_double(ratio);
            for (auto method : spec.methods)
                out << ',' << format_double(evaluate(method, params).value / spec.sigma_sq);
            out << "\n";
        }
    }
}

void write_simulate_csv(const SweepSpec& spec, std::ostream& out) {
    spec.validate();
    write_common_config(out, "simulate", spec);
    out << " algorithm=" << to_string(spec.algorithm) << " replications=" << spec.replications
        << " events=" << (spec.events == 0 ? std::string("auto") : format_int(spec.events))
        << " seed=" << spec.seed << " time_averaged=" << (spec.time_averaged ? "1" : "0") << "\n";

    out << "n_agents,ratio,algorithm,mse_mean,mse_stderr,n_replications,n_events,seed\n";

    SimOptions opts;
    opts.threads = spec.threads;
    opts.time_averaged = spec.time_averaged;
    for (int n : sorted_agents(spec)) {
        for (double ratio : sorted_ratios(spec)) {
            const auto params = point_params(spec, n, ratio);
            const int n_events = spec.events > 0 ? spec.events : default_event_count(params);
            const auto estimate =
                steady_state_mse(params, spec.algorithm, spec.replications, n_events,
                                 point_seed(spec.seed, n, ratio), opts);
            out << n << ',' << format_double(ratio) << ',' << to_string(spec.algorithm) << ','
                << format_double(estimate.mean) << ',' << format_double(estimate.std_error) << ','
                << spec.replications << ',' << n_events << ',' << spec.seed << "\n";
        }
    }
}

void write_age_cdf_csv(const SweepSpec& spec, const std::vector<double>& age_grid,
                       std::ostream& out) {
    spec.validate();
    if (spec.n_agents.size() != 1 || spec.ratios.size() != 1)
        throw std::invalid_argument("age-cdf: exactly one n_agents and one ratio required");
    if (age_grid.empty()) throw std::invalid_argument("age-cdf: empty age grid");
    for (double s : age_grid)
        if (!(s >= 0.0)) throw std::invalid_argument("age-cdf: grid ages must be >= 0");

    const auto params = point_params(spec, spec.n_agents.front(), spec.ratios.front());
    const int n_events = spec.events > 0 ? spec.events : default_event_count(params);

    write_common_config(out, "age-cdf", spec);
    out << " replications=" << spec.replications << " events=" << n_events
        << " seed=" << spec.seed << "\n";

    auto grid = age_grid;
    std::sort(grid.begin(), grid.end());

    SimOptions opts;
    opts.threads = spec.threads;
    const auto empirical =
        empirical_age_cdf(params, spec.replications, n_events, grid, spec.seed, opts);
    const auto ping = ping_age_distribution(params);
    const auto infection = infection_age_cdf(make_infection_chain(params.n_agents, params.lambda_c));

    out << "s,empirical,ping,infection\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        out << format_double(grid[k]) << ',' << format_double(empirical.cdf[k]) << ','
            << format_double(ping.cdf(grid[k])) << ',' << format_double(infection.cdf(grid[k]))
            << "\n";
    }
}

void write_figure_csv(Figure figure, const SweepSpec& spec, std::ostream& out) {
    switch (figure) {
        case Figure::fig1: {
            SweepSpec preset = spec;
            preset.n_agents = {3, 10, 100};
            if (preset.ratios.empty()) preset.ratios = log_spaced(1e-2, 1e3, 50);
            preset.sigma_sq = 1.0;
            preset.methods = {BoundMethod::ping};
            write_bounds_csv(preset, out);
            return;
        }
        case Figure::fig2: {
            SweepSpec preset = spec;
            preset.n_agents = {3, 10, 100};
            if (preset.ratios.empty()) preset.ratios = log_spaced(1e-2, 1e3, 50);
            preset.sigma_sq = 1.0;
            preset.methods = {BoundMethod::ping, BoundMethod::infection_matrix,
                              BoundMethod::relaxed};
            write_bounds_csv(preset, out);
            return;
        }
        case Figure::fig3: {
            SweepSpec preset = spec;
            preset.n_agents = {10};
            if (preset.ratios.empty()) preset.ratios = log_spaced(1e-1, 1e2, 13);
            preset.sigma_sq = 1.0;
            preset.algorithm = Algorithm::gossip;
            if (preset.events == 0) preset.events = 200;
            preset.validate();

            write_common_config(out, "reproduce fig3", preset);
            out << " replications=" << preset.replications << " events=" << preset.events
                << " seed=" << preset.seed << "\n";
            out << "n_agents,ratio,infection_bound,gossip_mse_mean,gossip_mse_stderr,"
                   "n_replications,n_events,seed\n";

            SimOptions opts;
            opts.threads = preset.threads;
            for (double ratio : sorted_ratios(preset)) {
                const auto params = point_params(preset, 10, ratio);
                const auto bound = infection_bound_matrix(params);
                const auto estimate =
                    steady_state_mse(params, Algorithm::gossip, preset.replications,
                                     preset.events, point_seed(preset.seed, 10, ratio), opts);
                out << 10 << ',' << format_double(ratio) << ',' << format_double(bound.value)
                    << ',' << format_double(estimate.mean) << ','
                    << format_double(estimate.std_error) << ',' << preset.replications << ','
                    << preset.events << ',' << preset.seed << "\n";
            }
            return;
        }
    }
    throw std::logic_error("write_figure_csv: unknown figure");
}

void write_csv_file(const std::string& path, const std::function<void(std::ostream&)>& writer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    writer(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed for output file: " + path);
}

}  // namespace openavg
