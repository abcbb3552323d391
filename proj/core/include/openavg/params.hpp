#pragma once

#include <cstdint>

#include "openavg/rng.hpp"

namespace openavg {

/// Distribution of the intrinsic agent values. All options are zero-mean
/// with variance sigma_sq; the bounds depend on the variance only, and the
/// alternatives exist to test exactly that.
enum class ValueDist : std::uint8_t {
    normal,     ///< standard normal scaled to variance sigma_sq (default)
    two_point,  ///< symmetric +-sigma
    uniform,    ///< uniform on [-sqrt(3)*sigma, sqrt(3)*sigma]
};

const char* to_string(ValueDist dist) noexcept;

/// Full parameterization of the open system.
struct SystemParams {
    int n_agents = 2;          ///< N >= 2
    double lambda_r = 1.0;     ///< per-agent replacement rate, >= 0
    double lambda_c = 0.0;     ///< per-pair communication rate, >= 0
    double sigma_sq = 1.0;     ///< variance of agent values, > 0
    ValueDist value_dist = ValueDist::normal;

    /// Throws std::invalid_argument if any invariant is violated.
    void validate() const;
};

/// lambda_c / lambda_r. Throws std::invalid_argument when lambda_r == 0
/// (the ratio is undefined, not infinite: lambda_c may also be 0).
double rate_ratio(const SystemParams& params);

/// One draw from the configured value distribution (mean 0, variance sigma_sq).
double sample_value(const SystemParams& params, RngStream& rng);

/// (N-1)/N^2 * sigma^2, the error of an estimator that knows nothing beyond
/// its own value. Every bound and every achievable MSE lives in
/// [0, no_information_mse].
double no_information_mse(const SystemParams& params);

}  // namespace openavg
