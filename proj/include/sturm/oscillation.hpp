#ifndef STURM_OSCILLATION_HPP
#define STURM_OSCILLATION_HPP

// Negative-eigenvalue counting for -d^2/dx^2 - lambda^2 V with Dirichlet
// conditions, via the Prufer phase of u'' = -lambda^2 V u, u(a) = 0.
//
// With u = r sin(theta), u' = s r cos(theta) for a constant scale s > 0,
//   theta' = s cos^2(theta) + (lambda^2 V / s) sin^2(theta),  theta(a) = 0,
// and u vanishes exactly when theta crosses a multiple of pi. By Sturm's
// oscillation theorem the number of interior zeros, ceil(theta(b)/pi) - 1,
// is the number of strictly negative eigenvalues N(lambda).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>

#include "sturm/error.hpp"
#include "sturm/ode.hpp"
#include "sturm/potential.hpp"

namespace sturm {

struct PhaseOptions {
    double rtol = 1e-10;
    /// Bound on lambda^2 V(a+delta) delta^2 when cutting off a singular endpoint.
    double delta_tol = 1e-12;
    std::int64_t max_steps = 10'000'000;
    /// Called with (x, theta) after every accepted step when set.
    std::function<void(double, double)> on_step;
};

struct PhaseResult {
    double lambda = 0.0;
    double theta_b = 0.0;
    std::int64_t count = 0;
    std::int64_t steps = 0;
    std::int64_t rejected_steps = 0;
    /// Interval actually integrated; differs from [a, b] only at singular endpoints.
    double x_start = 0.0;
    double x_end = 0.0;
};

/// Endpoint cut-offs for conjecture-class potentials. Zero means the endpoint itself is used.
struct EndpointCutoff {
    double delta_a = 0.0;
    double delta_b = 0.0;
};

/// Fraction of theta(b)/pi treated as "exactly at a jump" by count_negative.
inline constexpr double kJumpGuard = 1e-7;

inline double prufer_scale(const Potential& p, double lambda) {
    return p.is_theorem_class() ? lambda * std::sqrt(std::max(p.c_lower(), 1.0)) : lambda;
}

namespace detail {

// Largest delta in (0, limit] with lambda^2 V(at(delta)) delta^2 <= tol, by
// bisection in log(delta). Near an endpoint with exponent gamma > -2 the
// left-hand side behaves like delta^(2+gamma) and so is eventually monotone.
template <class At>
double endpoint_delta(const Potential& p, double lambda, double tol, double endpoint, At at) {
    const double limit = 0.125 * (p.b() - p.a());
    auto ok = [&](double d) {
        const double v = p.value(at(d));
        return lambda * lambda * v * d * d <= tol;
    };
    if (ok(limit)) return limit;
    const double ulp = std::nextafter(std::abs(endpoint), std::numeric_limits<double>::infinity()) - std::abs(endpoint);
    double lo = std::max(4.0 * ulp, 1e-150);
    if (lo >= limit || !ok(lo))
        throw ConvergenceError("endpoint cut-off underflows machine precision near x = " +
                               detail::format_number(endpoint));
    double hi = limit;
    for (int it = 0; it < 200 && hi / lo > 1.0 + 1e-3; ++it) {
        const double m = std::sqrt(lo * hi);
        (ok(m) ? lo : hi) = m;
    }
    return lo;
}

} // namespace detail

/// Cut-offs delta_a, delta_b for a conjecture-class potential at this lambda.
/// Near a singular endpoint the regular solution behaves like (x-a); the
/// neglected phase on (a, a+delta) is of order lambda^2 V(a+delta) delta^2.
/// Declared exponent 0 marks a regular endpoint and gets delta = 0.
inline EndpointCutoff endpoint_cutoff(const Potential& p, double lambda, double delta_tol) {
    if (p.is_theorem_class()) return {};
    if (!(delta_tol > 0.0)) throw std::invalid_argument("delta_tol must be positive");
    EndpointCutoff c;
    if (*p.gamma_a() != 0.0)
        c.delta_a = detail::endpoint_delta(p, lambda, delta_tol, p.a(), [&](double d) { return p.a() + d; });
    if (*p.gamma_b() != 0.0)
        c.delta_b = detail::endpoint_delta(p, lambda, delta_tol, p.b(), [&](double d) { return p.b() - d; });
    return c;
}

/// Point a + delta_a where phase integration begins.
inline double start_point(const Potential& p, double lambda, double delta_tol) {
    return p.a() + endpoint_cutoff(p, lambda, delta_tol).delta_a;
}

/// Prufer phase theta(b; lambda).
inline PhaseResult phase(const Potential& p, double lambda, const PhaseOptions& opt = {}) {
    if (!(lambda > 0.0)) throw std::invalid_argument("phase requires lambda > 0");
    if (!(opt.rtol > 0.0)) throw std::invalid_argument("phase requires rtol > 0");

    const double s = prufer_scale(p, lambda);
    const double q = lambda * lambda / s;
    const EndpointCutoff cut = endpoint_cutoff(p, lambda, opt.delta_tol);

    PhaseResult r;
    r.lambda = lambda;
    r.x_start = p.a() + cut.delta_a;
    r.x_end = p.b() - cut.delta_b;

    // free solution u = (x - a), u' = 1 across the cut-off
    const double theta0 = cut.delta_a > 0.0 ? std::atan2(s * cut.delta_a, 1.0) : 0.0;

    // Only the position of theta relative to multiples of pi matters, so the
    // step error is bounded by rtol pi in absolute terms. A tolerance relative
    // to |theta| would let the global error grow like (steps) rtol theta.
    OdeOptions ode;
    ode.rtol = 0.0;
    ode.atol = opt.rtol * std::numbers::pi;
    ode.max_steps = opt.max_steps;
    auto rhs = [&](double x, double theta) {
        const double sn = std::sin(theta), cs = std::cos(theta);
        return s * cs * cs + q * p.value(x) * sn * sn;
    };
    const OdeResult sol = opt.on_step ? integrate_dopri5(rhs, r.x_start, theta0, r.x_end, ode, opt.on_step)
                                      : integrate_dopri5(rhs, r.x_start, theta0, r.x_end, ode);
    double theta = sol.y;

    if (cut.delta_b > 0.0) {
        // mirrored free propagation u(b) = u + delta u', u'(b) = u'
        const double sn = std::sin(theta), cs = std::cos(theta);
        double inc = std::atan2(sn + s * cut.delta_b * cs, cs) - std::atan2(sn, cs);
        if (inc < 0.0) inc += 2.0 * std::numbers::pi;
        if (inc >= std::numbers::pi) inc -= 2.0 * std::numbers::pi;
        theta += inc;
    }

    r.theta_b = theta;
    // a phase within integration tolerance of k pi is read as exactly k pi,
    // where the zero eigenvalue is not counted
    const double t = theta / std::numbers::pi;
    const double k = std::round(t);
    const bool on_integer = std::abs(t - k) <= 10.0 * opt.rtol * std::max(1.0, t);
    r.count = static_cast<std::int64_t>(on_integer ? k : std::ceil(t)) - 1;
    r.steps = sol.steps;
    r.rejected_steps = sol.rejected_steps;
    return r;
}

inline PhaseResult phase(const Potential& p, double lambda, double rtol) {
    PhaseOptions opt;
    opt.rtol = rtol;
    return phase(p, lambda, opt);
}

/// Count from an endpoint phase, throwing AtJumpAmbiguity inside the guard band.
inline std::int64_t count_from_phase(double lambda, double theta_b) {
    const double t = theta_b / std::numbers::pi;
    if (std::abs(t - std::round(t)) < kJumpGuard) throw AtJumpAmbiguity(lambda, theta_b);
    return static_cast<std::int64_t>(std::ceil(t)) - 1;
}

/// N(lambda), the number of strictly negative Dirichlet eigenvalues.
inline std::int64_t count_negative(const Potential& p, double lambda, const PhaseOptions& opt = {}) {
    return count_from_phase(lambda, phase(p, lambda, opt).theta_b);
}

inline std::int64_t count_negative(const Potential& p, double lambda, double rtol) {
    PhaseOptions opt;
    opt.rtol = rtol;
    return count_negative(p, lambda, opt);
}

} // namespace sturm

#endif // STURM_OSCILLATION_HPP
