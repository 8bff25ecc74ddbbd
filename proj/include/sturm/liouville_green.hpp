#ifndef STURM_LIOUVILLE_GREEN_HPP
#define STURM_LIOUVILLE_GREEN_HPP

// Liouville-Green change of variable xi = int_a^x V^{1/2}. With
// g(xi) = V^{1/4} f(x) the equation f'' = -lambda^2 V f becomes
// g'' = (-lambda^2 - U(xi)) g on (0, D), where U = V^{-3/4} (V^{-1/4})''.
// A bound |U| <= C brackets N(lambda) between the counts of the two
// constant-coefficient problems on (0, D).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "sturm/error.hpp"
#include "sturm/potential.hpp"
#include "sturm/quadrature.hpp"

namespace sturm {

struct LGSample {
    double x = 0.0;
    double xi = 0.0;
    double u = 0.0;
};

struct LGData {
    double D = 0.0;
    /// Sampled sup |U| times the safety factor.
    double C = 0.0;
    std::vector<LGSample> samples;
};

struct CountBracket {
    std::int64_t lower = 0;
    std::int64_t upper = 0;
};

inline constexpr double kSupSafetyFactor = 1.05;

/// U(x) = -V''/(4 V^2) + 5 V'^2/(16 V^3), the expanded form of V^{-3/4} (V^{-1/4})''.
inline double transformed_potential(const Potential& p, double x) {
    if (!p.is_theorem_class())
        throw std::invalid_argument("transformed_potential is defined for theorem-class potentials only");
    const Jet2 j = p.jet(x);
    if (!(j.v > 0.0)) throw ValidationError("V(" + detail::format_number(x) + ") is not positive");
    const double v2 = j.v * j.v;
    return -0.25 * j.d2 / v2 + 0.3125 * j.d1 * j.d1 / (v2 * j.v);
}

/// Samples U on a Chebyshev-Lobatto grid and maps the nodes to xi by
/// accumulating the quadrature over consecutive grid cells.
inline LGData lg_data(const Potential& p, int grid_points = 512, double quad_tol = 1e-12) {
    if (!p.is_theorem_class()) throw std::invalid_argument("lg_data is defined for theorem-class potentials only");
    if (grid_points < 200) throw std::invalid_argument("lg_data requires at least 200 grid points");

    const auto grid = chebyshev_lobatto(p.a(), p.b(), grid_points);
    LGData lg;
    lg.samples.resize(grid.size());
    double sup = 0.0, xi = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i > 0) xi += integrate_sqrtV(p, grid[i - 1], grid[i], quad_tol).value;
        const double u = transformed_potential(p, grid[i]);
        lg.samples[i] = {grid[i], xi, u};
        sup = std::max(sup, std::abs(u));
    }
    lg.D = phase_length(p, quad_tol);
    lg.samples.back().xi = lg.D;
    lg.C = kSupSafetyFactor * sup;
    return lg;
}

/// [ceil(D sqrt(lambda^2 - C)/pi - 1), ceil(D sqrt(lambda^2 + C)/pi - 1)], valid for lambda > sqrt(C).
inline CountBracket count_bracket(const LGData& lg, double lambda) {
    if (!(lambda > std::sqrt(lg.C)))
        throw std::invalid_argument("count_bracket requires lambda > sqrt(C) = " +
                                    detail::format_number(std::sqrt(lg.C)));
    const double l2 = lambda * lambda;
    auto ceil_count = [&](double k2) {
        return static_cast<std::int64_t>(std::ceil(lg.D * std::sqrt(k2) / std::numbers::pi - 1.0));
    };
    return {ceil_count(l2 - lg.C), ceil_count(l2 + lg.C)};
}

} // namespace sturm

#endif // STURM_LIOUVILLE_GREEN_HPP
