#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <type_traits>
#include <utility>
#include <vector>

#include "openavg/errors.hpp"

namespace openavg {

struct OdeOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    long max_steps = 50'000'000;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double kDP_C[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double kDP_A[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// 5th-order solution weights (same as the last A row; FSAL) and the
// difference against the embedded 4th-order solution.
inline constexpr double kDP_B5[7] = {35.0 / 384,    0.0,         500.0 / 1113, 125.0 / 192,
                                     -2187.0 / 6784, 11.0 / 84,   0.0};
inline constexpr double kDP_E[7] = {
    35.0 / 384 - 5179.0 / 57600,      0.0,
    500.0 / 1113 - 7571.0 / 16695,    125.0 / 192 - 393.0 / 640,
    -2187.0 / 6784 + 92097.0 / 339200, 11.0 / 84 - 187.0 / 2100,
    -1.0 / 40};

}  // namespace detail

/// Integrates dy/dt = deriv(t, y) from (t0, y0) to t1 with the adaptive
/// Dormand-Prince 5(4) pair.
///
/// deriv has signature void(double t, const std::vector<double>& y,
/// std::vector<double>& dydt). The optional observer is called after every
/// accepted step (and once for the initial state) and may throw to abort.
/// Throws OdeError when the controller cannot hold the tolerance.
template <class Deriv,
          class Observer = std::nullptr_t>
std::vector<double> integrate_to(Deriv&& deriv, std::vector<double> y, double t0, double t1,
                                 const OdeOptions& opts = {}, Observer observer = nullptr) {
    const std::size_t n = y.size();
    if (!(t1 > t0)) return y;

    constexpr auto notify = [](auto& obs, double t, const std::vector<double>& state) {
        if constexpr (!std::is_same_v<std::decay_t<decltype(obs)>, std::nullptr_t>) obs(t, state);
    };

    std::vector<std::vector<double>> k(7, std::vector<double>(n));
    std::vector<double> y_stage(n), y_new(n), err_vec(n);

    double t = t0;
    deriv(t, y, k[0]);
    notify(observer, t, y);

    // initial step: conservative fraction of the span, refined by the controller
    double h = (t1 - t0) / 100.0;
    long steps = 0;

    while (t < t1) {
        if (++steps > opts.max_steps)
            throw OdeError("ode: step budget exhausted before reaching t1", h);
        h = std::min(h, t1 - t);

        // k[0] always holds deriv(t, y): FSAL after accepted steps, and a
        // rejected step leaves (t, y) untouched
        for (int stage = 1; stage < 7; ++stage) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (int j = 0; j < stage; ++j) acc += detail::kDP_A[stage][j] * k[j][i];
                y_stage[i] = y[i] + h * acc;
            }
            deriv(t + detail::kDP_C[stage] * h, y_stage, k[stage]);
        }

        double err_norm_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double acc5 = 0.0, acc_err = 0.0;
            for (int j = 0; j < 7; ++j) {
                acc5 += detail::kDP_B5[j] * k[j][i];
                acc_err += detail::kDP_E[j] * k[j][i];
            }
            y_new[i] = y[i] + h * acc5;
            const double scale =
                opts.abs_tol + opts.rel_tol * std::max(std::fabs(y[i]), std::fabs(y_new[i]));
            const double e = h * acc_err / scale;
            err_norm_sq += e * e;
        }
        const double err_norm = std::sqrt(err_norm_sq / static_cast<double>(n));

        if (err_norm <= 1.0) {
            t += h;
            y.swap(y_new);
            k[0] = k[6];  // stage 7 was evaluated at (t+h, y_new)
            notify(observer, t, y);
        }

        const double factor =
            err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
        h *= factor;
        if (!(h > 0.0) || t + h == t)
            throw OdeError("ode: step size underflow", err_norm);
    }
    return y;
}

}  // namespace openavg
