#pragma once

#include <functional>
#include <utility>

namespace openavg {

/// Finite-mass tail tolerance used when constructing tail cutoffs:
/// cdf(tail_cutoff) must be within this of its limit 1 - mass_at_infinity.
inline constexpr double kTailTolerance = 1e-12;

/// Distribution of the age of the most recent information an agent holds
/// about a peer.
///
/// Ages may be infinite (an agent that has never heard about a peer), so the
/// cdf limit at infinity is 1 - mass_at_infinity rather than 1. The infinite
/// mass is carried explicitly and handled analytically by consumers; it is
/// never folded into a large finite age.
struct AgeDistribution {
    /// P(age <= s) restricted to finite ages; nondecreasing, limit
    /// 1 - mass_at_infinity.
    std::function<double(double)> cdf;

    /// Density of the finite part. May be empty, in which case consumers
    /// integrate against the cdf instead.
    std::function<double(double)> pdf;

    /// Time beyond which the remaining *finite* mass is below kTailTolerance:
    /// (1 - mass_at_infinity) - cdf(tail_cutoff) < kTailTolerance.
    double tail_cutoff = 0.0;

    /// P(age = +infinity).
    double mass_at_infinity = 0.0;

    bool has_pdf() const noexcept { return static_cast<bool>(pdf); }
};

/// Age identically zero: information is always perfectly fresh.
inline AgeDistribution fresh_information_age() {
    AgeDistribution age;
    age.cdf = [](double) { return 1.0; };
    age.tail_cutoff = 0.0;
    age.mass_at_infinity = 0.0;
    return age;
}

/// Age almost surely infinite: no information ever arrives.
inline AgeDistribution no_information_age() {
    AgeDistribution age;
    age.cdf = [](double) { return 0.0; };
    age.tail_cutoff = 0.0;
    age.mass_at_infinity = 1.0;
    return age;
}

}  // namespace openavg
