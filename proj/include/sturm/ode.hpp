#ifndef STURM_ODE_HPP
#define STURM_ODE_HPP

// Scalar Dormand-Prince 5(4) integrator with PI step-size control
// (Hairer, Norsett & Wanner, Solving ODEs I, II.4).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "sturm/error.hpp"
#include "sturm/expr.hpp"

namespace sturm {

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-10;
    std::int64_t max_steps = 10'000'000;
    /// Initial step; 0 picks one from the slope at the start point.
    double initial_step = 0.0;
};

struct OdeResult {
    double y = 0.0;
    std::int64_t steps = 0;
    std::int64_t rejected_steps = 0;
};

namespace detail {
struct NoObserver {
    void operator()(double, double) const noexcept {}
};
} // namespace detail

/// Integrates y' = f(x, y) from (x0, y0) to x1 > x0. `observe(x, y)` is called
/// after every accepted step.
template <class F, class Observer = detail::NoObserver>
OdeResult integrate_dopri5(F&& f, double x0, double y0, double x1, const OdeOptions& opt,
                           Observer&& observe = {}) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                     a76 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    constexpr double safe = 0.9, beta = 0.04, expo1 = 0.2 - beta * 0.75;
    constexpr double facc1 = 1.0 / 0.2, facc2 = 1.0 / 10.0;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    OdeResult res;
    if (!(x1 > x0)) {
        res.y = y0;
        return res;
    }

    double x = x0, y = y0;
    double k1 = f(x, y);
    double h = opt.initial_step > 0.0 ? opt.initial_step : 0.1 / std::max(std::abs(k1), 1e-300);
    h = std::min(h, x1 - x0);
    double facold = 1e-4;
    bool last_rejected = false;

    while (x < x1) {
        if (res.steps >= opt.max_steps)
            throw ConvergenceError("ODE integration exceeded " + std::to_string(opt.max_steps) +
                                   " steps at x = " + detail::format_number(x));
        if (h < 10.0 * eps * std::max(std::abs(x), 1e-300))
            throw ConvergenceError("ODE step size underflow at x = " + detail::format_number(x));
        const bool final_step = x + h >= x1;
        if (final_step) h = x1 - x;

        const double k2 = f(x + c2 * h, y + h * a21 * k1);
        const double k3 = f(x + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const double k4 = f(x + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const double k5 = f(x + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const double xph = final_step ? x1 : x + h;
        const double k6 = f(xph, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const double ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        const double k7 = f(xph, ynew);

        const double errabs = h * std::abs(e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double sk = opt.atol + opt.rtol * std::max(std::abs(y), std::abs(ynew));
        const double err = errabs / sk;
        if (!std::isfinite(err))
            throw ConvergenceError("ODE integration produced a non-finite value at x = " + detail::format_number(x));

        const double fac11 = std::pow(std::max(err, 1e-300), expo1);
        if (err <= 1.0) {
            double fac = fac11 / std::pow(facold, beta);
            fac = std::max(facc2, std::min(facc1, fac / safe));
            double hnew = h / fac;
            if (last_rejected) hnew = std::min(hnew, h);
            facold = std::max(err, 1e-4);
            ++res.steps;
            x = xph;
            y = ynew;
            k1 = k7;
            observe(x, y);
            if (final_step) break;
            h = hnew;
            last_rejected = false;
        } else {
            ++res.rejected_steps;
            h /= std::min(facc1, fac11 / safe);
            last_rejected = true;
        }
    }
    res.y = y;
    return res;
}

} // namespace sturm

#endif // STURM_ODE_HPP
