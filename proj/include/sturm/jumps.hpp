#ifndef STURM_JUMPS_HPP
#define STURM_JUMPS_HPP

// lambda_n = inf{lambda > 0 : N(lambda) >= n} is where the Dirichlet solution
// acquires its n-th zero at x = b, i.e. the root of theta(b; lambda) = n pi.
// theta(b; .) is strictly increasing, so the root is bracketed and refined by
// a secant iteration that falls back to bisection.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "sturm/error.hpp"
#include "sturm/oscillation.hpp"
#include "sturm/parallel.hpp"
#include "sturm/quadrature.hpp"

namespace sturm {

struct JumpRecord {
    std::int64_t n = 0;
    double lambda_n = 0.0;
    /// |theta(b; lambda_n) - n pi|
    double residual = 0.0;
    /// lambda_n D / pi - n
    double e_n = 0.0;
};

struct JumpOptions {
    /// Root tolerance relative in theta: |theta(b) - n pi| <= root_tol * n.
    double root_tol = 1e-10;
    PhaseOptions phase;
    double quad_tol = 1e-12;
    unsigned threads = 1;
};

namespace detail {

struct RootPoint {
    double lambda;
    double f;
};

} // namespace detail

/// lambda_n for a precomputed D.
inline JumpRecord find_jump(const Potential& p, std::int64_t n, double D, const JumpOptions& opt = {}) {
    if (n < 1) throw std::invalid_argument("find_jump requires n >= 1");
    if (!(opt.root_tol > 0.0)) throw std::invalid_argument("find_jump requires tol > 0");
    constexpr double kExpand = 1.25;
    constexpr int kMaxExpansions = 60;
    constexpr int kMaxIterations = 200;

    const double target = static_cast<double>(n) * std::numbers::pi;
    const double ftol = opt.root_tol * static_cast<double>(n);
    auto f = [&](double lambda) { return detail::RootPoint{lambda, phase(p, lambda, opt.phase).theta_b - target}; };
    auto record = [&](const detail::RootPoint& r) {
        return JumpRecord{n, r.lambda, std::abs(r.f), r.lambda * D / std::numbers::pi - static_cast<double>(n)};
    };

    detail::RootPoint guess = f(target / D);
    if (std::abs(guess.f) <= ftol) return record(guess);

    detail::RootPoint lo = guess, hi = guess;
    for (int i = 0;; ++i) {
        if (i == kMaxExpansions)
            throw ConvergenceError("could not bracket lambda_" + std::to_string(n) + " after " +
                                   std::to_string(kMaxExpansions) + " expansions");
        if (guess.f < 0.0) {
            lo = hi;
            hi = f(hi.lambda * kExpand);
            if (hi.f >= 0.0) break;
        } else {
            hi = lo;
            lo = f(lo.lambda / kExpand);
            if (lo.f <= 0.0) break;
        }
    }
    if (std::abs(lo.f) <= ftol) return record(lo);
    if (std::abs(hi.f) <= ftol) return record(hi);

    // secant between the two latest iterates, bisection whenever the candidate
    // leaves the bracket or the bracket fails to halve over two steps
    detail::RootPoint prev = lo, cur = hi;
    double width_two_ago = hi.lambda - lo.lambda, width_one_ago = width_two_ago;
    for (int it = 0; it < kMaxIterations; ++it) {
        const double width = hi.lambda - lo.lambda;
        if (width <= 4.0 * std::numeric_limits<double>::epsilon() * hi.lambda) break;

        double x = cur.lambda - cur.f * (cur.lambda - prev.lambda) / (cur.f - prev.f);
        const double margin = 1e-3 * width;
        const bool stalled = width > 0.5 * width_two_ago;
        if (!std::isfinite(x) || x <= lo.lambda + margin || x >= hi.lambda - margin || (stalled && it >= 2))
            x = 0.5 * (lo.lambda + hi.lambda);

        const detail::RootPoint next = f(x);
        if (std::abs(next.f) <= ftol) return record(next);
        (next.f < 0.0 ? lo : hi) = next;
        prev = cur;
        cur = next;
        width_two_ago = width_one_ago;
        width_one_ago = hi.lambda - lo.lambda;
    }
    // bracket collapsed to rounding level: return the better end
    return record(std::abs(lo.f) < std::abs(hi.f) ? lo : hi);
}

inline JumpRecord find_jump(const Potential& p, std::int64_t n, const JumpOptions& opt = {}) {
    return find_jump(p, n, phase_length(p, opt.quad_tol), opt);
}

/// lambda_n for every n in [n_min, n_max], computed concurrently and returned in order.
inline std::vector<JumpRecord> jump_sequence(const Potential& p, std::int64_t n_min, std::int64_t n_max,
                                             const JumpOptions& opt = {}) {
    if (n_min < 1 || n_min > n_max) throw std::invalid_argument("jump_sequence requires 1 <= n_min <= n_max");
    const double D = phase_length(p, opt.quad_tol);
    std::vector<JumpRecord> out(static_cast<std::size_t>(n_max - n_min + 1));
    parallel_for(out.size(), opt.threads, [&](std::size_t i) {
        out[i] = find_jump(p, n_min + static_cast<std::int64_t>(i), D, opt);
    });
    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i].lambda_n > out[i - 1].lambda_n))
            throw ConvergenceError("non-monotone jump sequence: lambda_" + std::to_string(out[i - 1].n) + " = " +
                                   detail::format_number(out[i - 1].lambda_n) + " >= lambda_" +
                                   std::to_string(out[i].n) + " = " + detail::format_number(out[i].lambda_n));
    return out;
}

} // namespace sturm

#endif // STURM_JUMPS_HPP
