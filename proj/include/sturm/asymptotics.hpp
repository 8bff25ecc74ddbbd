#ifndef STURM_ASYMPTOTICS_HPP
#define STURM_ASYMPTOTICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "sturm/error.hpp"
#include "sturm/jumps.hpp"
#include "sturm/oscillation.hpp"
#include "sturm/potential.hpp"

namespace sturm {

/// Boundedness of n e_n over a jump sequence.
///
/// Records are split at n_max/2. The sequence is judged consistent with
/// e_n = O(1/n) when the tail maximum of |n e_n| does not exceed twice the
/// head maximum and the running maximum of |n e_n| does not grow faster than
/// n^kMaxGrowthExponent over the tail.
struct TheoremCheck {
    double max_n_en = 0.0;
    double head_max_n_en = 0.0;
    double tail_max_n_en = 0.0;
    double growth_exponent = 0.0;
    std::int64_t n_min = 0;
    std::int64_t n_split = 0;
    std::int64_t n_max = 0;
    bool consistent = false;
};

inline constexpr double kMaxGrowthExponent = 0.25;
/// Below this level |n e_n| is treated as numerical noise by theorem_check.
inline constexpr double kNoiseFloor = 1e-6;

inline TheoremCheck theorem_check(std::span<const JumpRecord> records) {
    if (records.empty()) throw std::invalid_argument("theorem_check: no records");
    TheoremCheck c;
    c.n_min = records.front().n;
    c.n_max = records.back().n;
    if (c.n_min < 10 || c.n_max < 4 * c.n_min)
        throw std::invalid_argument("theorem_check: insufficient range (need n_min >= 10 and n_max >= 4 n_min)");
    c.n_split = c.n_max / 2;

    std::vector<double> log_n, log_running;
    double running = 0.0;
    for (const auto& r : records) {
        const double v = std::abs(static_cast<double>(r.n) * r.e_n);
        running = std::max(running, v);
        c.max_n_en = std::max(c.max_n_en, v);
        if (r.n < c.n_split) {
            c.head_max_n_en = std::max(c.head_max_n_en, v);
        } else {
            c.tail_max_n_en = std::max(c.tail_max_n_en, v);
            if (running > kNoiseFloor) {
                log_n.push_back(std::log(static_cast<double>(r.n)));
                log_running.push_back(std::log(running));
            }
        }
    }
    if (log_n.size() >= 2) {
        const double mx = std::accumulate(log_n.begin(), log_n.end(), 0.0) / log_n.size();
        const double my = std::accumulate(log_running.begin(), log_running.end(), 0.0) / log_n.size();
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < log_n.size(); ++i) {
            sxy += (log_n[i] - mx) * (log_running[i] - my);
            sxx += (log_n[i] - mx) * (log_n[i] - mx);
        }
        c.growth_exponent = sxx > 0 ? sxy / sxx : 0.0;
    }
    c.consistent = c.tail_max_n_en <= 2.0 * c.head_max_n_en + kNoiseFloor &&
                   c.growth_exponent <= kMaxGrowthExponent;
    return c;
}

/// lambda D / pi - N(lambda). Throws AtJumpAmbiguity at a jump.
inline double weyl_defect(const Potential& p, double lambda, double D, const PhaseOptions& opt = {}) {
    if (!(lambda > 0.0)) throw std::invalid_argument("weyl_defect requires lambda > 0");
    return lambda * D / std::numbers::pi - static_cast<double>(count_negative(p, lambda, opt));
}

/// Least-squares fit e_n = kappa + beta/n on the tail half of the records,
/// compared with the endpoint constant predicted from the declared exponents.
struct ConjectureFit {
    double constant_estimate = 0.0;
    double constant_stderr = 0.0;
    double slope = 0.0;
    double predicted = 0.0;
    std::int64_t n_from = 0;
    std::int64_t n_to = 0;
    bool consistent = false;
};

inline constexpr double kConjectureTolerance = 0.01;

inline ConjectureFit conjecture_fit(std::span<const JumpRecord> records, double gamma_a, double gamma_b) {
    if (records.empty()) throw std::invalid_argument("conjecture_fit: no records");
    if (records.back().n < 100) throw std::invalid_argument("conjecture_fit requires n_max >= 100");
    ConjectureFit fit;
    fit.predicted = endpoint_constant(gamma_a, gamma_b);

    const auto tail = records.subspan(records.size() / 2);
    fit.n_from = tail.front().n;
    fit.n_to = tail.back().n;
    const double m = static_cast<double>(tail.size());
    double mx = 0, my = 0;
    for (const auto& r : tail) {
        mx += 1.0 / static_cast<double>(r.n);
        my += r.e_n;
    }
    mx /= m;
    my /= m;
    double sxx = 0, sxy = 0;
    for (const auto& r : tail) {
        const double dx = 1.0 / static_cast<double>(r.n) - mx;
        sxx += dx * dx;
        sxy += dx * (r.e_n - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("conjecture_fit: degenerate fit (all n equal)");
    fit.slope = sxy / sxx;
    fit.constant_estimate = my - fit.slope * mx;

    double rss = 0;
    for (const auto& r : tail) {
        const double res = r.e_n - fit.constant_estimate - fit.slope / static_cast<double>(r.n);
        rss += res * res;
    }
    if (tail.size() > 2) {
        const double sigma2 = rss / (m - 2.0);
        fit.constant_stderr = std::sqrt(sigma2 * (1.0 / m + mx * mx / sxx));
    }
    fit.consistent = std::abs(fit.constant_estimate - fit.predicted) <=
                     std::max(3.0 * fit.constant_stderr, kConjectureTolerance);
    return fit;
}

/// Summary emitted by the verification suites. Ranges record which n or
/// lambda values each maximum was taken over.
struct AsymptoticsReport {
    std::optional<double> max_n_en;
    std::optional<double> tail_max_n_en;
    std::optional<double> weyl_defect_max;
    std::optional<double> constant_estimate;
    std::optional<double> constant_stderr;
    std::optional<std::int64_t> n_min;
    std::optional<std::int64_t> n_max;
    std::optional<double> lambda_min;
    std::optional<double> lambda_max;
};

} // namespace sturm

#endif // STURM_ASYMPTOTICS_HPP
