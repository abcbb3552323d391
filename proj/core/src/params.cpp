#include "openavg/params.hpp"

#include <cmath>
#include <stdexcept>

namespace openavg {

const char* to_string(ValueDist dist) noexcept {
    switch (dist) {
        case ValueDist::normal: return "normal";
        case ValueDist::two_point: return "two-point";
        case ValueDist::uniform: return "uniform";
    }
    return "?";
}

void SystemParams::validate() const {
    if (n_agents < 2) throw std::invalid_argument("SystemParams: n_agents must be >= 2");
    if (!(lambda_r >= 0.0)) throw std::invalid_argument("SystemParams: lambda_r must be >= 0");
    if (!(lambda_c >= 0.0)) throw std::invalid_argument("SystemParams: lambda_c must be >= 0");
    if (!(sigma_sq > 0.0)) throw std::invalid_argument("SystemParams: sigma_sq must be > 0");
}

double rate_ratio(const SystemParams& params) {
    params.validate();
    if (params.lambda_r == 0.0)
        throw std::invalid_argument("rate_ratio: undefined for lambda_r = 0");
    return params.lambda_c / params.lambda_r;
}

double sample_value(const SystemParams& params, RngStream& rng) {
    const double sigma = std::sqrt(params.sigma_sq);
    switch (params.value_dist) {
        case ValueDist::normal:
            return sigma * rng.normal01();
        case ValueDist::two_point:
            return rng.next_u64() & 1 ? sigma : -sigma;
        case ValueDist::uniform:
            return sigma * std::sqrt(3.0) * (2.0 * rng.uniform01() - 1.0);
    }
    return 0.0;  // unreachable
}

double no_information_mse(const SystemParams& params) {
    const double n = static_cast<double>(params.n_agents);
    return (n - 1.0) / (n * n) * params.sigma_sq;
}

}  // namespace openavg
