#ifndef STURM_POTENTIAL_HPP
#define STURM_POTENTIAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sturm/error.hpp"
#include "sturm/expr.hpp"

namespace sturm {

enum class PotentialClass {
    /// C^2 on the closed interval and bounded below by a positive constant.
    Theorem,
    /// Positive on the open interval with power-law behaviour (x-a)^gamma_a, (b-x)^gamma_b.
    Conjecture,
};

inline const char* to_string(PotentialClass c) {
    return c == PotentialClass::Theorem ? "theorem" : "conjecture";
}

/// Chebyshev-Lobatto points on [a, b], endpoints included, increasing.
inline std::vector<double> chebyshev_lobatto(double a, double b, int n) {
    std::vector<double> x(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int k = 0; k < n; ++k)
        x[k] = mid - half * std::cos(std::numbers::pi * k / (n - 1));
    x.front() = a;
    x.back() = b;
    return x;
}

/// Chebyshev-Gauss points on (a, b), endpoints excluded, increasing.
inline std::vector<double> chebyshev_gauss(double a, double b, int n) {
    std::vector<double> x(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int k = 0; k < n; ++k)
        x[k] = mid - half * std::cos(std::numbers::pi * (2.0 * k + 1.0) / (2.0 * n));
    return x;
}

/// 1/(4+2 gamma_a) + 1/(4+2 gamma_b) - 1/2
inline double endpoint_constant(double gamma_a, double gamma_b) {
    if (!(gamma_a > -2.0) || !(gamma_b > -2.0))
        throw std::invalid_argument("endpoint exponents must exceed -2");
    return 1.0 / (4.0 + 2.0 * gamma_a) + 1.0 / (4.0 + 2.0 * gamma_b) - 0.5;
}

/// A formula on a bounded interval together with its regularity class.
///
/// Theorem-class potentials carry a sampled lower bound c_lower; every later
/// evaluation through value() is checked against c_lower/2. Conjecture-class
/// potentials are only ever evaluated on the open interval.
class Potential {
public:
    static Potential theorem_class(Expr formula, double a, double b, int samples = 1024);
    static Potential conjecture_class(Expr formula, double a, double b, double gamma_a, double gamma_b);

    const Expr& formula() const noexcept { return formula_; }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    PotentialClass regularity() const noexcept { return class_; }
    bool is_theorem_class() const noexcept { return class_ == PotentialClass::Theorem; }
    std::optional<double> gamma_a() const noexcept { return gamma_a_; }
    std::optional<double> gamma_b() const noexcept { return gamma_b_; }
    /// Positive lower bound for theorem-class potentials, 0 otherwise.
    double c_lower() const noexcept { return c_lower_; }

    /// V(x), rejecting negative values and theorem-class values below c_lower/2.
    double value(double x) const {
        const double v = formula_.value(x);
        if (class_ == PotentialClass::Theorem) {
            if (v < 0.5 * c_lower_)
                throw ValidationError("V(" + detail::format_number(x) + ") = " + detail::format_number(v) +
                                      " is below c_lower/2 = " + detail::format_number(0.5 * c_lower_));
        } else if (v < 0.0) {
            throw ValidationError("negative V(" + detail::format_number(x) + ") = " + detail::format_number(v));
        }
        return v;
    }

    Jet2 jet(double x) const { return formula_.jet(x); }

private:
    Potential(Expr formula, double a, double b, PotentialClass c)
        : formula_(std::move(formula)), a_(a), b_(b), class_(c) {
        if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
            throw std::invalid_argument("interval requires finite a < b");
    }

    Expr formula_;
    double a_;
    double b_;
    PotentialClass class_;
    std::optional<double> gamma_a_;
    std::optional<double> gamma_b_;
    double c_lower_ = 0.0;
};

struct ValidationReport {
    int samples = 0;
    double min_v = 0.0;
    double max_abs_d2 = 0.0;
    std::optional<double> fitted_gamma_a;
    std::optional<double> fitted_gamma_b;
    bool exponent_mismatch = false;
    bool passed = false;
    std::string message;
};

namespace detail {

// least-squares slope of log V against log(distance to endpoint)
inline double loglog_slope(const std::vector<double>& dist, const std::vector<double>& v) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(dist.size());
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double lx = std::log(dist[i]), ly = std::log(v[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace detail

/// Samples V on a Chebyshev grid and checks the hypotheses of the declared class.
///
/// Theorem class: Lobatto grid including endpoints, throws ValidationError if
/// min V <= 0. Conjecture class: Gauss grid on the open interval; the local
/// exponent at each end is fitted on the 10 nearest points and compared with
/// the declared one (mismatch > 0.1 is flagged and fails the report).
inline ValidationReport validate(const Potential& p, int samples) {
    if (samples < 100) throw std::invalid_argument("validate needs at least 100 samples");
    constexpr int kFitPoints = 10;
    const bool theorem = p.is_theorem_class();
    const auto grid = theorem ? chebyshev_lobatto(p.a(), p.b(), samples) : chebyshev_gauss(p.a(), p.b(), samples);

    ValidationReport r;
    r.samples = samples;
    r.min_v = std::numeric_limits<double>::infinity();
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Jet2 j = p.formula().jet(grid[i]);
        values[i] = j.v;
        r.min_v = std::min(r.min_v, j.v);
        r.max_abs_d2 = std::max(r.max_abs_d2, std::abs(j.d2));
    }

    if (theorem) {
        if (!(r.min_v > 0.0))
            throw ValidationError("theorem-class potential has min V = " + detail::format_number(r.min_v) +
                                  " <= 0 on [" + detail::format_number(p.a()) + ", " +
                                  detail::format_number(p.b()) + "]");
        r.passed = true;
        return r;
    }

    if (!(r.min_v > 0.0))
        throw ValidationError("conjecture-class potential is not positive on the open interval (min V = " +
                              detail::format_number(r.min_v) + ")");

    std::vector<double> dist(kFitPoints), v(kFitPoints);
    for (int i = 0; i < kFitPoints; ++i) {
        dist[i] = grid[i] - p.a();
        v[i] = values[i];
    }
    r.fitted_gamma_a = detail::loglog_slope(dist, v);
    for (int i = 0; i < kFitPoints; ++i) {
        dist[i] = p.b() - grid[grid.size() - 1 - i];
        v[i] = values[grid.size() - 1 - i];
    }
    r.fitted_gamma_b = detail::loglog_slope(dist, v);

    const double da = std::abs(*r.fitted_gamma_a - *p.gamma_a());
    const double db = std::abs(*r.fitted_gamma_b - *p.gamma_b());
    r.exponent_mismatch = da > 0.1 || db > 0.1;
    r.passed = !r.exponent_mismatch;
    if (r.exponent_mismatch)
        r.message = "fitted endpoint exponents (" + detail::format_number(*r.fitted_gamma_a) + ", " +
                    detail::format_number(*r.fitted_gamma_b) + ") differ from declared (" +
                    detail::format_number(*p.gamma_a()) + ", " + detail::format_number(*p.gamma_b()) + ")";
    return r;
}

inline Potential Potential::theorem_class(Expr formula, double a, double b, int samples) {
    Potential p(std::move(formula), a, b, PotentialClass::Theorem);
    p.c_lower_ = validate(p, samples).min_v;
    return p;
}

inline Potential Potential::conjecture_class(Expr formula, double a, double b, double gamma_a, double gamma_b) {
    if (!(gamma_a > -2.0) || !(gamma_b > -2.0))
        throw std::invalid_argument("endpoint exponents must exceed -2");
    Potential p(std::move(formula), a, b, PotentialClass::Conjecture);
    p.gamma_a_ = gamma_a;
    p.gamma_b_ = gamma_b;
    return p;
}

} // namespace sturm

#endif // STURM_POTENTIAL_HPP
