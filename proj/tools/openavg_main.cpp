// openavg CLI: lower bounds and Monte Carlo experiments for intrinsic
// averaging in open multi-agent systems. Emits CSV with a leading `#`
// configuration comment; identical invocations produce byte-identical files.

#include <cstdint>
#include <exception>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "openavg/sweep.hpp"

namespace {

using openavg::Algorithm;
using openavg::BoundMethod;
using openavg::Figure;
using openavg::SweepSpec;

struct RatioRange {
    double lo = 1e-2;
    double hi = 1e3;
    int points = 50;
};

void add_common_flags(CLI::App* cmd, SweepSpec& spec, RatioRange& range, bool& has_range) {
    cmd->add_option("--n-agents", spec.n_agents, "system sizes N (default 10)");
    cmd->add_option("--ratios", spec.ratios, "explicit lambda_c/lambda_r grid (0 allowed)");
    auto* range_opt = cmd->add_option_function<std::vector<double>>(
        "--ratio-range",
        [&range, &has_range](const std::vector<double>& v) {
            range.lo = v[0];
            range.hi = v[1];
            if (v.size() > 2) range.points = static_cast<int>(v[2]);
            has_range = true;
        },
        "log-spaced ratio grid: LO HI [POINTS] (default 1e-2 1e3 50)");
    range_opt->expected(2, 3);
    cmd->add_option("--lambda-r", spec.lambda_r, "replacement-rate anchor (default 1.0)");
    cmd->add_option("--sigma-sq", spec.sigma_sq, "value variance (default 1.0)");
    cmd->add_option("--seed", spec.seed, "master seed (default 1)");
    cmd->add_option("--threads", spec.threads, "worker threads, 0 = hardware (default)");
}

void finalize_ratios(SweepSpec& spec, const RatioRange& range, bool has_range) {
    if (spec.ratios.empty())
        spec.ratios = openavg::log_spaced(range.lo, range.hi, range.points);
    else if (has_range)
        throw CLI::ValidationError("--ratios and --ratio-range are mutually exclusive");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady-state MSE lower bounds and simulation for intrinsic averaging in open "
                 "multi-agent systems"};
    app.require_subcommand(1);

    const std::map<std::string, BoundMethod> method_names{
        {"ping", BoundMethod::ping},
        {"infection-matrix", BoundMethod::infection_matrix},
        {"infection-algebraic", BoundMethod::infection_algebraic},
        {"relaxed", BoundMethod::relaxed},
    };
    const std::map<std::string, Algorithm> algorithm_names{
        {"gossip", Algorithm::gossip},
        {"optimal", Algorithm::optimal},
    };
    const std::map<std::string, Figure> figure_names{
        {"fig1", Figure::fig1},
        {"fig2", Figure::fig2},
        {"fig3", Figure::fig3},
    };

    SweepSpec spec;
    RatioRange range;
    bool has_range = false;
    std::string out_path;

    auto* bounds = app.add_subcommand("bounds", "closed-form and matrix bound sweep to CSV");
    add_common_flags(bounds, spec, range, has_range);
    bounds->add_option("--methods", spec.methods, "bound methods to include")
        ->transform(CLI::CheckedTransformer(method_names, CLI::ignore_case));
    bounds->add_option("--out", out_path, "output CSV path")->required();

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo MSE sweep to CSV");
    add_common_flags(simulate, spec, range, has_range);
    simulate->add_option("--algorithm", spec.algorithm, "gossip (default) or optimal")
        ->transform(CLI::CheckedTransformer(algorithm_names, CLI::ignore_case));
    simulate->add_option("--replications", spec.replications, "replications per point (default 10000)");
    simulate->add_option("--events", spec.events, "events per replication, 0 = auto-scale");
    simulate->add_flag("--time-averaged", spec.time_averaged,
                       "average C(t) over a follow-up window instead of the final snapshot");
    simulate->add_option("--out", out_path, "output CSV path")->required();

    auto* age_cdf = app.add_subcommand(
        "age-cdf", "empirical vs Ping vs Infection age-of-information CDFs to CSV");
    add_common_flags(age_cdf, spec, range, has_range);
    age_cdf->add_option("--replications", spec.replications, "replications (default 10000)");
    age_cdf->add_option("--events", spec.events, "events per replication, 0 = auto-scale");
    double s_max = 0.0;
    int s_points = 50;
    age_cdf->add_option("--s-max", s_max, "largest age on the grid, 0 = auto (6/((N-1)lambda_c))");
    age_cdf->add_option("--s-points", s_points, "grid size including s = 0 (default 50)");
    age_cdf->add_option("--out", out_path, "output CSV path")->required();

    auto* reproduce = app.add_subcommand("reproduce", "emit the CSV behind a preset figure");
    Figure figure = Figure::fig1;
    reproduce->add_option("figure", figure, "fig1, fig2 or fig3")
        ->required()
        ->transform(CLI::CheckedTransformer(figure_names, CLI::ignore_case));
    reproduce->add_option("--replications", spec.replications, "fig3 replications (default 10000)");
    reproduce->add_option("--events", spec.events, "fig3 events per replication (default 200)");
    reproduce->add_option("--seed", spec.seed, "master seed (default 1)");
    reproduce->add_option("--threads", spec.threads, "worker threads, 0 = hardware");
    reproduce->add_option("--out", out_path, "output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (bounds->parsed()) {
            finalize_ratios(spec, range, has_range);
            openavg::write_csv_file(out_path,
                                    [&](std::ostream& out) { write_bounds_csv(spec, out); });
        } else if (simulate->parsed()) {
            finalize_ratios(spec, range, has_range);
            openavg::write_csv_file(out_path,
                                    [&](std::ostream& out) { write_simulate_csv(spec, out); });
        } else if (age_cdf->parsed()) {
            finalize_ratios(spec, range, has_range);
            if (spec.n_agents.size() != 1 || spec.ratios.size() != 1)
                throw std::invalid_argument(
                    "age-cdf: pass exactly one value to --n-agents and --ratios");
            if (s_points < 2) throw std::invalid_argument("age-cdf: --s-points must be >= 2");
            if (s_max <= 0.0) {
                const double lambda_c = spec.ratios.front() * spec.lambda_r;
                if (lambda_c <= 0.0)
                    throw std::invalid_argument("age-cdf: ratio must be > 0 for the auto grid");
                s_max = 6.0 / ((spec.n_agents.front() - 1) * lambda_c);
            }
            std::vector<double> grid(s_points);
            for (int k = 0; k < s_points; ++k) grid[k] = s_max * k / (s_points - 1);
            openavg::write_csv_file(
                out_path, [&](std::ostream& out) { write_age_cdf_csv(spec, grid, out); });
        } else if (reproduce->parsed()) {
            spec.ratios.clear();  // presets pick their own grids
            openavg::write_csv_file(
                out_path, [&](std::ostream& out) { write_figure_csv(figure, spec, out); });
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
