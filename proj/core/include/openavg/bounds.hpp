#pragma once

#include <cstdint>

#include "openavg/age_distribution.hpp"
#include "openavg/params.hpp"

namespace openavg {

enum class BoundMethod : std::uint8_t {
    ping,
    infection_matrix,
    infection_algebraic,
    relaxed,
    generic_quadrature,
};

const char* to_string(BoundMethod method) noexcept;

/// Steady-state MSE lower bound, always in [0, no_information_mse(params)].
struct BoundResult {
    double value = 0.0;
    BoundMethod method = BoundMethod::generic_quadrature;
    SystemParams params;

    /// Numerical slack (quadrature error estimate + truncated tail bracket).
    /// Exactly 0 for the closed forms.
    double uncertainty = 0.0;

    /// True when lambda_r = 0 forced the analytic limit of a closed form
    /// instead of a direct evaluation.
    bool limit_case = false;
};

/// Age distribution under the assumption that any communication refreshes
/// an agent's information about everyone: exponential with rate (N-1)*lambda_c.
/// lambda_c = 0 degenerates to an almost-surely infinite age (not an error).
AgeDistribution ping_age_distribution(const SystemParams& params);

/// Generic lower-bound functional over any bounding age distribution:
/// (N-1)/N^2 * sigma^2 * integral of f*(t) (1 - e^{-2 lambda_r t}) dt,
/// with infinite-age mass contributing its full weight analytically.
///
/// Integrates against the pdf when the distribution supplies one, otherwise
/// by parts against the cdf:
///   integral = int_0^c 2 lambda_r e^{-2 lambda_r t} (1 - F(t)) dt
///            + (1 - F(c)) e^{-2 lambda_r c},   c = tail_cutoff,
/// which absorbs the infinite mass exactly and leaves a truncation residual
/// below kTailTolerance (reported via `uncertainty`).
///
/// Throws QuadratureError if the quadrature cannot reach 1e-8 relative error.
BoundResult general_bound(const SystemParams& params, const AgeDistribution& age);

/// Closed form of the Ping-model bound:
/// (N-1)/N^2 * sigma^2 / (1 + (N-1)/2 * lambda_c/lambda_r).
/// lambda_r = 0 with lambda_c > 0 returns the limit 0 (flagged);
/// lambda_r = lambda_c = 0 throws std::invalid_argument.
BoundResult ping_bound(const SystemParams& params);

/// Compact logarithmic lower bound derived from the Infection model:
/// ping_bound * (1 + 1/2 * log((1 + (N-1)L) / (1 + L))), L = lambda_c/lambda_r.
/// Coincides with ping_bound at N = 2 and lies between the Ping and
/// Infection bounds elsewhere.
BoundResult relaxed_bound(const SystemParams& params);

}  // namespace openavg
