#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "openavg/infection.hpp"
#include "openavg/simulator.hpp"

using namespace openavg;

namespace {

SystemParams make_params(int n, double lambda_r, double lambda_c) {
    SystemParams p;
    p.n_agents = n;
    p.lambda_r = lambda_r;
    p.lambda_c = lambda_c;
    return p;
}

double gossip_sum(const SimState& state) {
    return std::accumulate(state.gossip_estimates.begin(), state.gossip_estimates.end(), 0.0);
}

}  // namespace

TEST_CASE("next_event") {
    SUBCASE("no communications means every event is a replacement") {
        const auto params = make_params(10, 1.0, 0.0);
        RngStream rng(1, 0);
        double t = 0.0;
        for (int e = 0; e < 1000; ++e) {
            const auto ev = next_event(params, rng, t);
            CHECK(ev.kind == SimEvent::Kind::replacement);
            CHECK(ev.time > t);
            t = ev.time;
        }
    }
    SUBCASE("kind frequencies and inter-event times match the merged process") {
        // N=10, lambda_r=1, lambda_c=2: total rate 100, P(replacement) = 0.1
        const auto params = make_params(10, 1.0, 2.0);
        RngStream rng(2, 0);
        const int n = 1'000'000;
        int replacements = 0;
        double t = 0.0;
        for (int e = 0; e < n; ++e) {
            const auto ev = next_event(params, rng, t);
            t = ev.time;
            if (ev.kind == SimEvent::Kind::replacement) ++replacements;
        }
        // 3 sigma bands
        CHECK(std::fabs(replacements / static_cast<double>(n) - 0.1) < 3.0 * 3e-4);
        CHECK(std::fabs(t / n - 0.01) < 3e-5);
    }
    SUBCASE("communication pairs are ordered and cover the grid") {
        const auto params = make_params(5, 0.0, 1.0);
        RngStream rng(3, 0);
        std::vector<int> hits(25, 0);
        for (int e = 0; e < 40'000; ++e) {
            const auto ev = next_event(params, rng, 0.0);
            REQUIRE(ev.kind == SimEvent::Kind::communication);
            REQUIRE(ev.agent < ev.peer);
            REQUIRE(ev.peer < 5);
            ++hits[ev.agent * 5 + ev.peer];
        }
        int nonzero = 0;
        for (int c : hits)
            if (c > 0) ++nonzero;
        CHECK(nonzero == 10);  // all unordered pairs of 5 agents
    }
    SUBCASE("all rates zero is an error") {
        RngStream rng(1, 0);
        CHECK_THROWS_AS(next_event(make_params(4, 0.0, 0.0), rng, 0.0), std::invalid_argument);
    }
}

TEST_CASE("replacement semantics") {
    const auto params = make_params(4, 1.0, 1.0);
    RngStream rng(4, 0);
    auto state = make_initial_state(params, rng);

    // give agent 2 some knowledge first
    apply_communication_optimal(state, 1, 2, 0.5);
    apply_communication_optimal(state, 2, 3, 0.7);
    REQUIRE(state.knows(2, 1));
    const auto before_peer_view = state.knowledge[3][2];

    state.clock = 1.0;
    apply_replacement(state, 2, params, rng);

    int known = 0;
    for (int j = 0; j < 4; ++j)
        if (state.knows(2, j)) ++known;
    CHECK(known == 1);  // memory erased down to the self entry
    CHECK(state.knowledge[2][2].timestamp == 1.0);
    CHECK(state.gossip_estimates[2] == state.values[2]);

    // nobody signals the departure: peer 3 still holds the stale entry
    CHECK(state.knowledge[3][2].value == before_peer_view.value);
    CHECK(state.knowledge[3][2].timestamp == before_peer_view.timestamp);
}

TEST_CASE("gossip averaging") {
    const auto params = make_params(2, 1.0, 1.0);
    RngStream rng(5, 0);
    auto state = make_initial_state(params, rng);

    state.gossip_estimates = {0.0, 1.0};
    apply_communication_gossip(state, 0, 1);
    CHECK(state.gossip_estimates[0] == 0.5);
    CHECK(state.gossip_estimates[1] == 0.5);

    apply_communication_gossip(state, 0, 1);  // fixed point
    CHECK(state.gossip_estimates[0] == 0.5);

    // mass conservation across a run of communication events
    const auto params10 = make_params(10, 1.0, 1.0);
    RngStream rng10(6, 0);
    auto st = make_initial_state(params10, rng10);
    const double sum0 = gossip_sum(st);
    for (int e = 0; e < 500; ++e) {
        const auto i = static_cast<int>(rng10.uniform_int(10));
        auto j = static_cast<int>(rng10.uniform_int(9));
        if (j >= i) ++j;
        apply_communication_gossip(st, std::min(i, j), std::max(i, j));
    }
    CHECK(gossip_sum(st) == doctest::Approx(sum0).epsilon(1e-12));
}

TEST_CASE("knowledge merge") {
    const auto params = make_params(5, 1.0, 1.0);
    RngStream rng(7, 0);
    auto state = make_initial_state(params, rng);

    SUBCASE("disjoint tables union, conflicts resolve to the newer timestamp") {
        state.knowledge[0][3] = {1.5, 0.2};
        state.knowledge[1][4] = {-2.0, 0.3};
        state.knowledge[0][2] = {10.0, 0.5};
        state.knowledge[1][2] = {20.0, 0.7};  // newer, must win
        apply_communication_optimal(state, 0, 1, 1.0);

        for (int agent : {0, 1}) {
            CHECK(state.knowledge[agent][3].value == 1.5);
            CHECK(state.knowledge[agent][4].value == -2.0);
            CHECK(state.knowledge[agent][2].value == 20.0);
            CHECK(state.knowledge[agent][2].timestamp == 0.7);
        }
        // participants refreshed to the current values at the merge time
        CHECK(state.knowledge[0][1].value == state.values[1]);
        CHECK(state.knowledge[0][1].timestamp == 1.0);
        CHECK(state.knowledge[1][0].timestamp == 1.0);
    }

    SUBCASE("tables coincide afterwards; merge is idempotent and symmetric") {
        state.knowledge[0][3] = {1.5, 0.2};
        auto mirror = state;
        apply_communication_optimal(state, 0, 1, 1.0);
        apply_communication_optimal(mirror, 1, 0, 1.0);  // argument order irrelevant
        for (int j = 0; j < 5; ++j) {
            CHECK(state.knowledge[0][j].timestamp == state.knowledge[1][j].timestamp);
            CHECK(state.knowledge[0][j].timestamp == mirror.knowledge[0][j].timestamp);
        }
        const auto once = state.knowledge;
        apply_communication_optimal(state, 0, 1, 1.0);  // applying twice changes nothing
        for (int a = 0; a < 5; ++a)
            for (int j = 0; j < 5; ++j) {
                CHECK(state.knowledge[a][j].value == once[a][j].value);
                CHECK(state.knowledge[a][j].timestamp == once[a][j].timestamp);
            }
    }

    SUBCASE("timestamps never exceed the clock over a random run") {
        auto st = make_initial_state(params, rng);
        double t = 0.0;
        for (int e = 0; e < 2000; ++e) {
            const auto ev = next_event(params, rng, t);
            t = ev.time;
            if (ev.kind == SimEvent::Kind::replacement) {
                st.clock = t;
                apply_replacement(st, ev.agent, params, rng);
            } else {
                apply_communication_optimal(st, ev.agent, ev.peer, t);
            }
            for (const auto& row : st.knowledge)
                for (const auto& entry : row) CHECK(entry.timestamp <= st.clock);
        }
    }
}

TEST_CASE("optimal estimate") {
    const auto params = make_params(2, 2.0, 1.0);
    RngStream rng(8, 0);
    auto state = make_initial_state(params, rng);
    const double v = state.values[0];
    const double u = state.values[1];

    SUBCASE("self knowledge only: v / N") {
        SystemParams p10 = make_params(10, 1.0, 1.0);
        RngStream r10(9, 0);
        auto st = make_initial_state(p10, r10);
        CHECK(optimal_estimate(st, 0, 0.0, p10) ==
              doctest::Approx(st.values[0] / 10.0).epsilon(1e-15));
    }
    SUBCASE("fresh peer information: exact average") {
        apply_communication_optimal(state, 0, 1, 0.0);
        CHECK(optimal_estimate(state, 0, 0.0, params) ==
              doctest::Approx((v + u) / 2.0).epsilon(1e-14));
    }
    SUBCASE("aged peer information decays by e^{-lambda_r T}") {
        apply_communication_optimal(state, 0, 1, 0.0);
        const double age = std::log(2.0) / params.lambda_r;
        CHECK(optimal_estimate(state, 0, age, params) ==
              doctest::Approx((v + u / 2.0) / 2.0).epsilon(1e-14));
    }
}

TEST_CASE("steady-state MSE anchors with no communications") {
    const auto params = make_params(10, 1.0, 0.0);
    const auto gossip = steady_state_mse(params, Algorithm::gossip, 6000, 20, 101);
    CHECK(std::fabs(gossip.mean - 0.9) < 3.0 * gossip.std_error);

    const auto optimal = steady_state_mse(params, Algorithm::optimal, 6000, 20, 102);
    CHECK(std::fabs(optimal.mean - 0.09) < 3.0 * optimal.std_error);
}

TEST_CASE("steady-state MSE determinism") {
    const auto params = make_params(10, 1.0, 1.0);
    SimOptions serial;
    serial.threads = 1;
    SimOptions parallel;
    parallel.threads = 7;

    const auto a = steady_state_mse(params, Algorithm::gossip, 400, 100, 55, serial);
    const auto b = steady_state_mse(params, Algorithm::gossip, 400, 100, 55, serial);
    const auto c = steady_state_mse(params, Algorithm::gossip, 400, 100, 55, parallel);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.mean == c.mean);
    CHECK(a.std_error == c.std_error);

    const auto d = steady_state_mse(params, Algorithm::gossip, 400, 100, 56, serial);
    CHECK(a.mean != d.mean);  // the seed matters
}

TEST_CASE("time-averaged mode") {
    const auto params = make_params(10, 1.0, 0.0);
    SimOptions opts;
    opts.time_averaged = true;
    const auto est = steady_state_mse(params, Algorithm::gossip, 3000, 20, 77, opts);
    CHECK(std::fabs(est.mean - 0.9) < 4.0 * est.std_error);

    const auto again = steady_state_mse(params, Algorithm::gossip, 3000, 20, 77, opts);
    CHECK(est.mean == again.mean);
}

TEST_CASE("default event count scales from the N=10 anchor") {
    CHECK(default_event_count(make_params(10, 1.0, 1.0)) == 200);
    CHECK(default_event_count(make_params(10, 1.0, 37.0)) == 200);
    CHECK(default_event_count(make_params(20, 1.0, 1.0)) > 200);
    CHECK(default_event_count(make_params(3, 1.0, 1.0)) < 200);
}

TEST_CASE("empirical age cdf") {
    const auto params = make_params(10, 1.0, 1.0);
    std::vector<double> grid{0.0, 0.1, 0.3, 0.6, 1.0, 2.0};
    const auto emp = empirical_age_cdf(params, 3000, 200, grid, 202);

    REQUIRE(emp.cdf.size() == grid.size());
    CHECK(emp.n_samples == static_cast<std::int64_t>(3000) * 90);
    CHECK(emp.cdf[0] == 0.0);  // ages are almost surely positive
    for (std::size_t k = 1; k < emp.cdf.size(); ++k) CHECK(emp.cdf[k] >= emp.cdf[k - 1]);
    // replacements leave a persistent never-informed fraction, so the cdf
    // stays clearly below one
    CHECK(emp.cdf.back() < 0.99);

    SUBCASE("dominated by the Ping and Infection relaxations") {
        const auto ping = ping_age_distribution(params);
        const auto inf = infection_age_cdf(make_infection_chain(10, 1.0));
        for (std::size_t k = 1; k < grid.size(); ++k) {
            const double slack = 3.0 * emp.std_error(k);
            CHECK(emp.cdf[k] <= ping.cdf(grid[k]) + slack);
            CHECK(emp.cdf[k] <= inf.cdf(grid[k]) + slack);
        }
    }

    SUBCASE("deterministic under threading") {
        SimOptions serial;
        serial.threads = 1;
        SimOptions parallel;
        parallel.threads = 5;
        const auto a = empirical_age_cdf(params, 500, 100, grid, 3, serial);
        const auto b = empirical_age_cdf(params, 500, 100, grid, 3, parallel);
        CHECK(a.cdf == b.cdf);
    }

    SUBCASE("step-function view") {
        const auto age = emp.as_age_distribution();
        CHECK(age.cdf(-1.0) == 0.0);
        CHECK(age.cdf(0.45) == emp.cdf[2]);
        CHECK(age.cdf(1e9) == emp.cdf.back());
        CHECK(age.mass_at_infinity == doctest::Approx(1.0 - emp.cdf.back()));
    }
}
