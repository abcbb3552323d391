#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "openavg/bounds.hpp"
#include "openavg/quadrature.hpp"

using namespace openavg;

namespace {

SystemParams make_params(int n, double lambda_r, double lambda_c, double sigma_sq = 1.0) {
    SystemParams p;
    p.n_agents = n;
    p.lambda_r = lambda_r;
    p.lambda_c = lambda_c;
    p.sigma_sq = sigma_sq;
    return p;
}

}  // namespace

TEST_CASE("ping age distribution") {
    SUBCASE("cdf at log 2 is a half for N=2, lambda_c=1") {
        const auto age = ping_age_distribution(make_params(2, 1.0, 1.0));
        CHECK(age.cdf(std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("cdf starts at zero") {
        const auto age = ping_age_distribution(make_params(7, 1.0, 0.3));
        CHECK(age.cdf(0.0) == 0.0);
    }
    SUBCASE("pdf(0) equals the rate (N-1)*lambda_c") {
        const auto age = ping_age_distribution(make_params(11, 1.0, 0.1));
        CHECK(age.pdf(0.0) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("lambda_c = 0 degenerates to an almost-surely infinite age") {
        const auto age = ping_age_distribution(make_params(5, 1.0, 0.0));
        CHECK(age.mass_at_infinity == 1.0);
        CHECK(age.cdf(1e9) == 0.0);
    }
    SUBCASE("tail cutoff leaves less than the tolerance of finite mass") {
        const auto age = ping_age_distribution(make_params(4, 1.0, 2.5));
        CHECK(1.0 - age.cdf(age.tail_cutoff) <= kTailTolerance * 1.0001);
    }
    SUBCASE("pdf integrates to the cdf") {
        const auto age = ping_age_distribution(make_params(6, 1.0, 0.7));
        for (double s : {0.05, 0.2, 0.8}) {
            const auto q = integrate_adaptive(age.pdf, 0.0, s);
            CHECK(q.value == doctest::Approx(age.cdf(s)).epsilon(1e-10));
        }
    }
}

TEST_CASE("general bound functional") {
    SUBCASE("point mass at zero age gives zero error") {
        CHECK(general_bound(make_params(10, 1.0, 1.0), fresh_information_age()).value == 0.0);
    }
    SUBCASE("all mass at infinite age gives the ceiling") {
        const auto r = general_bound(make_params(10, 1.0, 1.0), no_information_age());
        CHECK(r.value == doctest::Approx(0.09).epsilon(1e-15));
    }
    SUBCASE("matches the Ping closed form through quadrature") {
        const auto params = make_params(2, 1.0, 2.0);
        const auto r = general_bound(params, ping_age_distribution(params));
        CHECK(r.value == doctest::Approx(0.125).epsilon(1e-8));
        CHECK(r.method == BoundMethod::generic_quadrature);
    }
    SUBCASE("cdf-only route agrees with the pdf route") {
        const auto params = make_params(8, 1.0, 0.5);
        auto age = ping_age_distribution(params);
        const double with_pdf = general_bound(params, age).value;
        age.pdf = nullptr;
        const double with_cdf = general_bound(params, age).value;
        CHECK(with_cdf == doctest::Approx(with_pdf).epsilon(1e-9));
    }
    SUBCASE("pointwise larger cdf never increases the bound") {
        // exponential ages with rates 4 and 1: F_fast >= F_slow everywhere
        const auto fast = ping_age_distribution(make_params(2, 1.0, 4.0));
        const auto slow = ping_age_distribution(make_params(2, 1.0, 1.0));
        for (double s : {0.01, 0.1, 1.0, 5.0}) CHECK(fast.cdf(s) >= slow.cdf(s));
        const auto params = make_params(10, 2.0, 0.0);
        CHECK(general_bound(params, fast).value <= general_bound(params, slow).value);
    }
    SUBCASE("lambda_r = 0 keeps only the infinite-age mass") {
        const auto params = make_params(10, 0.0, 1.0);
        const auto finite = general_bound(params, ping_age_distribution(make_params(10, 1.0, 1.0)));
        CHECK(finite.value == 0.0);
        CHECK(finite.limit_case);
        const auto infinite = general_bound(params, no_information_age());
        CHECK(infinite.value == doctest::Approx(0.09).epsilon(1e-15));
    }
    SUBCASE("hostile pdf raises QuadratureError with the achieved estimate") {
        AgeDistribution noisy;
        noisy.cdf = [](double s) { return std::min(1.0, s); };
        noisy.pdf = [](double s) { return std::sin(4e7 * s) > 0.0 ? 2.0 : 0.0; };
        noisy.tail_cutoff = 1.0;
        try {
            general_bound(make_params(4, 1.0, 1.0), noisy);
            FAIL("expected QuadratureError");
        } catch (const QuadratureError& e) {
            CHECK(std::isfinite(e.achieved_value()));
            CHECK(e.achieved_error() > 0.0);
        }
    }
}

TEST_CASE("ping bound closed form") {
    SUBCASE("hand anchors") {
        CHECK(ping_bound(make_params(2, 1.0, 2.0)).value == doctest::Approx(0.125).epsilon(1e-15));
        CHECK(ping_bound(make_params(10, 1.0, 0.0)).value == doctest::Approx(0.09).epsilon(1e-15));
        CHECK(ping_bound(make_params(10, 1.0, 100.0)).value ==
              doctest::Approx(0.09 / 451.0).epsilon(1e-15));
    }
    SUBCASE("sigma_sq scales the bound") {
        CHECK(ping_bound(make_params(10, 1.0, 1.0, 3.0)).value ==
              doctest::Approx(3.0 * ping_bound(make_params(10, 1.0, 1.0)).value).epsilon(1e-15));
    }
    SUBCASE("lambda_r = 0 limits") {
        const auto r = ping_bound(make_params(5, 0.0, 1.0));
        CHECK(r.value == 0.0);
        CHECK(r.limit_case);
        CHECK_THROWS_AS(ping_bound(make_params(5, 0.0, 0.0)), std::invalid_argument);
    }
    SUBCASE("depends on the rates only through their ratio") {
        for (double c : {0.5, 2.0, 10.0}) {
            const double base = ping_bound(make_params(12, 0.7, 1.3)).value;
            const double scaled = ping_bound(make_params(12, 0.7 * c, 1.3 * c)).value;
            CHECK(scaled == doctest::Approx(base).epsilon(1e-14));
        }
    }
    SUBCASE("monotone decay from the ceiling to zero in the ratio") {
        double prev = no_information_mse(make_params(10, 1.0, 0.0)) + 1e-15;
        for (double ratio : {0.0, 0.01, 0.1, 1.0, 10.0, 1e3, 1e6}) {
            const double v = ping_bound(make_params(10, 1.0, ratio)).value;
            CHECK(v < prev);
            CHECK(v >= 0.0);
            prev = v;
        }
        CHECK(prev < 1e-7);
    }
}

TEST_CASE("relaxed logarithmic bound") {
    SUBCASE("coincides with the Ping bound at N = 2") {
        for (double ratio : {0.3, 1.0, 4.0, 100.0}) {
            const auto params = make_params(2, 1.0, ratio);
            CHECK(relaxed_bound(params).value ==
                  doctest::Approx(ping_bound(params).value).epsilon(1e-15));
        }
    }
    SUBCASE("ratio 0 reduces to the ceiling") {
        CHECK(relaxed_bound(make_params(10, 1.0, 0.0)).value ==
              doctest::Approx(0.09).epsilon(1e-15));
    }
    SUBCASE("frozen anchor at N=10, L=10") {
        // ping closed form times the log factor, evaluated independently
        const double expected = 0.09 / 46.0 * (1.0 + 0.5 * std::log(91.0 / 11.0));
        CHECK(expected == doctest::Approx(0.0040235519677680768).epsilon(1e-15));
        CHECK(relaxed_bound(make_params(10, 1.0, 10.0)).value ==
              doctest::Approx(expected).epsilon(1e-14));
    }
    SUBCASE("lambda_r = 0 limits") {
        const auto r = relaxed_bound(make_params(5, 0.0, 1.0));
        CHECK(r.value == 0.0);
        CHECK(r.limit_case);
        CHECK_THROWS_AS(relaxed_bound(make_params(5, 0.0, 0.0)), std::invalid_argument);
    }
}
