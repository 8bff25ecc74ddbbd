#ifndef STURM_QUADRATURE_HPP
#define STURM_QUADRATURE_HPP

#include <cmath>
#include <numbers>

#include "sturm/error.hpp"
#include "sturm/potential.hpp"

namespace sturm {

struct QuadResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    int evaluations = 0;
};

struct TanhSinhOptions {
    int max_level = 12;
    int min_level = 3;
    double max_t = 6.5;
    /// Nodes closer than this to an endpoint are dropped. V ~ d^gamma with
    /// gamma > -2 stays finite there, and the neglected piece of the integral
    /// is of order d^(1 + gamma/2).
    double min_distance = 1e-150;
};

/// Tanh-sinh (double-exponential) quadrature of f over (x0, x1).
///
/// The step is halved level by level, reusing every previous node, until two
/// successive levels differ by less than tol. Nodes are generated from their
/// distance to the nearer endpoint so that integrable endpoint singularities
/// are resolved without ever evaluating f at x0 or x1.
template <class F>
QuadResult tanh_sinh(F&& f, double x0, double x1, double tol, const TanhSinhOptions& opt = {}) {
    if (!(x0 < x1)) throw std::invalid_argument("tanh_sinh requires x0 < x1");
    if (!(tol > 0.0)) throw std::invalid_argument("tanh_sinh requires tol > 0");

    const double half = 0.5 * (x1 - x0);
    const double mid = x0 + half;
    QuadResult r;

    // sum over nodes t = (2j+1)h (odd) or t = jh (level 0)
    auto level_sum = [&](double h, bool odd_only) {
        double sum = 0.0;
        if (!odd_only) {
            sum += std::numbers::pi / 2 * f(mid);
            ++r.evaluations;
        }
        bool left_open = true, right_open = true;
        for (int j = 1;; ++j) {
            if (odd_only && j % 2 == 0) continue;
            const double t = j * h;
            if (t > opt.max_t) break;
            const double u = std::numbers::pi / 2 * std::sinh(t);
            const double cu = std::cosh(u);
            const double w = std::numbers::pi / 2 * std::cosh(t) / (cu * cu);
            const double dist = half * std::exp(-u) / cu;
            if (!(dist > opt.min_distance) || w == 0.0) break;
            const double xl = x0 + dist, xr = x1 - dist;
            if (left_open && xl > x0) {
                sum += w * f(xl);
                ++r.evaluations;
            } else {
                left_open = false;
            }
            if (right_open && xr < x1) {
                sum += w * f(xr);
                ++r.evaluations;
            } else {
                right_open = false;
            }
            if (!left_open && !right_open) break;
        }
        return sum;
    };

    double h = 1.0;
    double estimate = half * h * level_sum(h, false);
    for (int level = 1; level <= opt.max_level; ++level) {
        h *= 0.5;
        const double next = 0.5 * estimate + half * h * level_sum(h, true);
        const double diff = std::abs(next - estimate);
        estimate = next;
        if (!std::isfinite(estimate)) throw ConvergenceError("tanh-sinh: non-finite partial sum");
        if (level >= opt.min_level && diff < tol) {
            r.value = estimate;
            r.abs_error_estimate = diff;
            return r;
        }
    }
    throw ConvergenceError("tanh-sinh did not reach tolerance " + detail::format_number(tol) + " by level " +
                           std::to_string(opt.max_level) + " on (" + detail::format_number(x0) + ", " +
                           detail::format_number(x1) + ")");
}

/// Integral of V^{1/2} over (x0, x1).
inline QuadResult integrate_sqrtV(const Potential& p, double x0, double x1, double tol = 1e-12) {
    if (!(p.a() <= x0 && x0 < x1 && x1 <= p.b()))
        throw std::invalid_argument("integrate_sqrtV requires a <= x0 < x1 <= b");
    return tanh_sinh([&](double x) { return std::sqrt(p.value(x)); }, x0, x1, tol);
}

/// xi(x) = integral of V^{1/2} from a to x; xi(a) = 0.
inline double xi_of_x(const Potential& p, double x, double tol = 1e-12) {
    if (!(p.a() <= x && x <= p.b())) throw std::invalid_argument("xi_of_x requires a <= x <= b");
    if (x == p.a()) return 0.0;
    return integrate_sqrtV(p, p.a(), x, tol).value;
}

/// D = integral of V^{1/2} over the whole interval.
inline double phase_length(const Potential& p, double tol = 1e-12) {
    return integrate_sqrtV(p, p.a(), p.b(), tol).value;
}

} // namespace sturm

#endif // STURM_QUADRATURE_HPP
