#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "sturm/asymptotics.hpp"

using sturm::JumpRecord;
using sturm::parse;
using sturm::Potential;

namespace {

std::vector<JumpRecord> synthetic(std::int64_t n0, std::int64_t n1, double (*e)(double)) {
    std::vector<JumpRecord> out;
    for (std::int64_t n = n0; n <= n1; ++n) out.push_back({n, 0.0, 0.0, e(static_cast<double>(n))});
    return out;
}

} // namespace

TEST(TheoremCheck, ConstantPotentialIsConsistent) {
    const auto p = Potential::theorem_class(parse("1"), 0, std::numbers::pi);
    const auto recs = sturm::jump_sequence(p, 10, 80);
    const auto c = sturm::theorem_check(recs);
    EXPECT_LE(c.max_n_en, 1e-6);
    EXPECT_LE(c.tail_max_n_en, 1e-6);
    EXPECT_TRUE(c.consistent);
    EXPECT_EQ(c.n_min, 10);
    EXPECT_EQ(c.n_max, 80);
}

TEST(TheoremCheck, OneOverNIsConsistent) {
    const auto c = sturm::theorem_check(synthetic(10, 500, [](double n) { return 0.3 / n; }));
    EXPECT_NEAR(c.max_n_en, 0.3, 1e-12);
    EXPECT_TRUE(c.consistent);
}

TEST(TheoremCheck, InverseSquareRootFails) {
    const auto c = sturm::theorem_check(synthetic(10, 500, [](double n) { return 1 / std::sqrt(n); }));
    EXPECT_FALSE(c.consistent);
    EXPECT_NEAR(c.growth_exponent, 0.5, 0.05);
}

TEST(TheoremCheck, LinearGrowthFails) {
    const auto c = sturm::theorem_check(synthetic(10, 500, [](double) { return 0.01; }));
    EXPECT_FALSE(c.consistent);
    EXPECT_GT(c.tail_max_n_en, 2 * c.head_max_n_en);
}

TEST(TheoremCheck, InsufficientRange) {
    EXPECT_THROW(sturm::theorem_check(synthetic(5, 100, [](double) { return 0.0; })), std::invalid_argument);
    EXPECT_THROW(sturm::theorem_check(synthetic(10, 39, [](double) { return 0.0; })), std::invalid_argument);
    EXPECT_THROW(sturm::theorem_check(std::vector<JumpRecord>{}), std::invalid_argument);
}

TEST(WeylDefect, ConstantPotential) {
    const auto p = Potential::theorem_class(parse("1"), 0, std::numbers::pi);
    const double D = std::numbers::pi;
    EXPECT_NEAR(sturm::weyl_defect(p, 2.5, D), 0.5, 1e-12);
    EXPECT_NEAR(sturm::weyl_defect(p, 7.999, D), 0.999, 1e-12);
    EXPECT_THROW(sturm::weyl_defect(p, 3.0, D), sturm::AtJumpAmbiguity);
}

// Inside one jump interval the defect moves linearly with slope D/pi.
TEST(WeylDefect, LinearInsideJumpInterval) {
    const auto p = Potential::theorem_class(parse("2+sin(x)"), 0, 3);
    const double D = sturm::phase_length(p);
    const auto recs = sturm::jump_sequence(p, 20, 30);
    for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
        const double l0 = recs[i].lambda_n, l1 = recs[i + 1].lambda_n;
        const double a = l0 + 0.1 * (l1 - l0), b = l0 + 0.9 * (l1 - l0);
        EXPECT_NEAR(sturm::weyl_defect(p, b, D) - sturm::weyl_defect(p, a, D), (b - a) * D / std::numbers::pi, 1e-12);
    }
}

// For lambda in (lambda_n, lambda_{n+1}]: defect <= (lambda_{n+1} - lambda_n) D/pi + |e_n|.
TEST(WeylDefect, CorollaryChain) {
    const Potential ps[] = {Potential::theorem_class(parse("2+sin(x)"), 0, 3),
                            Potential::theorem_class(parse("exp(x)"), 0, 1)};
    std::mt19937_64 rng(17);
    for (const auto& p : ps) {
        const double D = sturm::phase_length(p);
        const auto recs = sturm::jump_sequence(p, 5, 60);
        for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
            std::uniform_real_distribution<double> u(recs[i].lambda_n, recs[i + 1].lambda_n);
            const double lambda = u(rng);
            const double bound = (recs[i + 1].lambda_n - recs[i].lambda_n) * D / std::numbers::pi + std::abs(recs[i].e_n);
            EXPECT_LE(sturm::weyl_defect(p, lambda, D), bound + 1e-9);
        }
    }
}

TEST(ConjectureFit, RecoversSyntheticConstant) {
    const auto recs = synthetic(20, 400, [](double n) { return 0.123 - 0.7 / n; });
    const auto fit = sturm::conjecture_fit(recs, -1, 1);
    EXPECT_NEAR(fit.constant_estimate, 0.123, 1e-10);
    EXPECT_NEAR(fit.slope, -0.7, 1e-8);
    EXPECT_NEAR(fit.predicted, 1.0 / 6, 1e-15);
    EXPECT_LT(fit.constant_stderr, 1e-10);
    EXPECT_FALSE(fit.consistent);
    EXPECT_EQ(fit.n_to, 400);
}

TEST(ConjectureFit, ConstantPotentialPredictsZero) {
    const auto p = Potential::theorem_class(parse("1"), 0, std::numbers::pi);
    const auto recs = sturm::jump_sequence(p, 20, 120);
    const auto fit = sturm::conjecture_fit(recs, 0, 0);
    EXPECT_EQ(fit.predicted, 0.0);
    EXPECT_NEAR(fit.constant_estimate, 0.0, 1e-8);
    EXPECT_TRUE(fit.consistent);
}

TEST(ConjectureFit, Preconditions) {
    EXPECT_THROW(sturm::conjecture_fit(synthetic(20, 99, [](double) { return 0.0; }), 0, 0), std::invalid_argument);
    const std::vector<JumpRecord> same{{100, 1, 0, 0.1}, {100, 1, 0, 0.2}, {100, 1, 0, 0.3}, {100, 1, 0, 0.4}};
    EXPECT_THROW(sturm::conjecture_fit(same, 0, 0), std::invalid_argument);
}

// V = x on (0, 1): the constant is stable between n_max = 100 and 200.
TEST(ConjectureFit, LinearPotentialStableInRange) {
    const auto p = Potential::conjecture_class(parse("x"), 0, 1, 1, 0);
    sturm::JumpOptions opt;
    opt.phase.rtol = 1e-12;
    const auto recs = sturm::jump_sequence(p, 20, 200, opt);
    const auto f100 = sturm::conjecture_fit(std::span(recs).first(81), 1, 0);
    const auto f200 = sturm::conjecture_fit(recs, 1, 0);
    EXPECT_NEAR(f100.constant_estimate, -1.0 / 12, 0.01);
    EXPECT_NEAR(f200.constant_estimate, -1.0 / 12, 0.01);
    EXPECT_NEAR(f100.constant_estimate, f200.constant_estimate, 0.005);
    EXPECT_TRUE(f200.consistent);
}
