#include "openavg/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "openavg/quadrature.hpp"

namespace openavg {

const char* to_string(BoundMethod method) noexcept {
    switch (method) {
        case BoundMethod::ping: return "ping";
        case BoundMethod::infection_matrix: return "infection-matrix";
        case BoundMethod::infection_algebraic: return "infection-algebraic";
        case BoundMethod::relaxed: return "relaxed";
        case BoundMethod::generic_quadrature: return "generic-quadrature";
    }
    return "?";
}

AgeDistribution ping_age_distribution(const SystemParams& params) {
    params.validate();
    if (params.lambda_c == 0.0) return no_information_age();

    const double rate = (params.n_agents - 1) * params.lambda_c;
    AgeDistribution age;
    age.cdf = [rate](double s) { return s <= 0.0 ? 0.0 : -std::expm1(-rate * s); };
    age.pdf = [rate](double s) { return s < 0.0 ? 0.0 : rate * std::exp(-rate * s); };
    age.tail_cutoff = -std::log(kTailTolerance) / rate;
    age.mass_at_infinity = 0.0;
    return age;
}

BoundResult general_bound(const SystemParams& params, const AgeDistribution& age) {
    params.validate();
    if (!age.cdf) throw std::invalid_argument("general_bound: age distribution has no cdf");

    BoundResult result;
    result.method = BoundMethod::generic_quadrature;
    result.params = params;
    const double factor = no_information_mse(params);

    // lambda_r = 0: surviving values are estimated exactly, only the
    // never-informed mass keeps its full error
    if (params.lambda_r == 0.0) {
        result.value = factor * age.mass_at_infinity;
        result.limit_case = true;
        return result;
    }

    const double two_lr = 2.0 * params.lambda_r;
    const double cutoff = age.tail_cutoff;

    QuadratureResult quad;
    double integral;
    if (age.has_pdf()) {
        quad = integrate_adaptive(
            [&](double t) { return age.pdf(t) * -std::expm1(-two_lr * t); }, 0.0, cutoff, 1e-9,
            1e-14);
        // everything beyond the cutoff (finite tail < kTailTolerance plus the
        // infinite mass) counted at the full weight 1
        integral = quad.value + (1.0 - age.cdf(cutoff));
    } else {
        quad = integrate_adaptive(
            [&](double t) { return two_lr * std::exp(-two_lr * t) * (1.0 - age.cdf(t)); }, 0.0,
            cutoff, 1e-9, 1e-14);
        integral = quad.value + (1.0 - age.cdf(cutoff)) * std::exp(-two_lr * cutoff);
    }

    result.value = factor * integral;
    result.uncertainty = factor * (quad.error_estimate + kTailTolerance);
    if (!quad.converged && quad.error_estimate > 1e-8 * std::fabs(integral) + 1e-14) {
        throw QuadratureError("general_bound: quadrature failed to reach 1e-8 relative tolerance",
                              result.value, factor * quad.error_estimate);
    }
    return result;
}

BoundResult ping_bound(const SystemParams& params) {
    params.validate();
    BoundResult result;
    result.method = BoundMethod::ping;
    result.params = params;

    if (params.lambda_r == 0.0) {
        if (params.lambda_c == 0.0)
            throw std::invalid_argument("ping_bound: indeterminate for lambda_r = lambda_c = 0");
        result.value = 0.0;  // limit of the closed form as lambda_r -> 0
        result.limit_case = true;
        return result;
    }

    const double n = static_cast<double>(params.n_agents);
    const double ratio = params.lambda_c / params.lambda_r;
    result.value = no_information_mse(params) / (1.0 + 0.5 * (n - 1.0) * ratio);
    return result;
}

BoundResult relaxed_bound(const SystemParams& params) {
    params.validate();
    BoundResult result;
    result.method = BoundMethod::relaxed;
    result.params = params;

    if (params.lambda_r == 0.0) {
        if (params.lambda_c == 0.0)
            throw std::invalid_argument(
                "relaxed_bound: indeterminate for lambda_r = lambda_c = 0");
        result.value = 0.0;
        result.limit_case = true;
        return result;
    }

    const double n = static_cast<double>(params.n_agents);
    const double ratio = params.lambda_c / params.lambda_r;
    const double ping_factor = 1.0 / (1.0 + 0.5 * (n - 1.0) * ratio);
    const double log_factor =
        1.0 + 0.5 * std::log((1.0 + (n - 1.0) * ratio) / (1.0 + ratio));
    result.value = no_information_mse(params) * ping_factor * log_factor;
    return result;
}

}  // namespace openavg
