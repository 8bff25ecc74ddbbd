#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sturm/expr.hpp"
#include "support/oracles.hpp"

using sturm::Expr;
using sturm::NodeKind;
using sturm::parse;

namespace {

Expr X() { return Expr::variable(); }
Expr C(double v) { return Expr::constant(v); }

void expect_jet(const char* src, double x, double v, double d1, double d2) {
    const auto j = sturm::eval_jet2(parse(src), x);
    EXPECT_NEAR(j.v, v, 1e-14 * std::max(1.0, std::abs(v))) << src;
    EXPECT_NEAR(j.d1, d1, 1e-14 * std::max(1.0, std::abs(d1))) << src;
    EXPECT_NEAR(j.d2, d2, 1e-14 * std::max(1.0, std::abs(d2))) << src;
}

std::size_t parse_error_offset(const char* src) {
    try {
        parse(src);
    } catch (const sturm::ParseError& e) {
        return e.offset();
    }
    ADD_FAILURE() << "no ParseError for '" << src << "'";
    return static_cast<std::size_t>(-1);
}

} // namespace

TEST(Parse, BuildsExpectedTrees) {
    EXPECT_EQ(parse("2+sin(x)"), Expr::binary(NodeKind::Add, C(2), Expr::unary(NodeKind::Sin, X())));
    EXPECT_EQ(parse("(1-x)/x"), Expr::binary(NodeKind::Div, Expr::binary(NodeKind::Sub, C(1), X()), X()));
}

TEST(Parse, PowerIsRightAssociative) {
    EXPECT_EQ(parse("2^3^2").value(0.0), 512.0);
    EXPECT_EQ(parse("2^-1").value(0.0), 0.5);
}

TEST(Parse, UnaryMinusBindsToPowerBase) {
    EXPECT_EQ(parse("-x^2").value(3.0), 9.0);
    EXPECT_EQ(parse("-(x^2)").value(3.0), -9.0);
    EXPECT_EQ(parse("1 - -x").value(2.0), 3.0);
}

TEST(Parse, PrecedenceAndConstants) {
    EXPECT_EQ(parse("1+2*3").value(0.0), 7.0);
    EXPECT_EQ(parse("8/4/2").value(0.0), 1.0);
    EXPECT_EQ(parse("pi").value(0.0), std::numbers::pi);
    EXPECT_EQ(parse("2*e").value(0.0), 2 * std::numbers::e);
    EXPECT_EQ(parse("1.5e2").value(0.0), 150.0);
    EXPECT_EQ(parse(".25").value(0.0), 0.25);
    EXPECT_EQ(parse("  x  ").value(4.0), 4.0);
}

TEST(Parse, ErrorsCarryOffsets) {
    EXPECT_EQ(parse_error_offset("2+y"), 2u);
    EXPECT_EQ(parse_error_offset("foo(x)"), 0u);
    EXPECT_EQ(parse_error_offset("sin()"), 3u);
    EXPECT_EQ(parse_error_offset("sin(x,2)"), 3u);
    EXPECT_EQ(parse_error_offset("(x+1"), 4u);
    EXPECT_EQ(parse_error_offset("x+"), 2u);
    EXPECT_EQ(parse_error_offset("x $ 1"), 2u);
    EXPECT_EQ(parse_error_offset(""), 0u);
    EXPECT_THROW(parse("sin x"), sturm::ParseError);
}

TEST(Jet, WorkedExamples) {
    expect_jet("2+sin(x)", 0.0, 2, 1, 0);
    expect_jet("x^2", 3.0, 9, 6, 2);
    expect_jet("(1-x)/x", 0.5, 1, -4, 16);
    expect_jet("exp(x)", 1.0, std::exp(1.0), std::exp(1.0), std::exp(1.0));
    expect_jet("sqrt(x)", 4.0, 2, 0.25, -1.0 / 32);
    expect_jet("log(x)", 2.0, std::log(2.0), 0.5, -0.25);
    expect_jet("x^x", 1.0, 1, 1, 2);
    expect_jet("2^x", 0.0, 1, std::log(2.0), std::log(2.0) * std::log(2.0));
}

TEST(Jet, ConstantFormulaHasExactlyZeroDerivatives) {
    for (const char* src : {"1", "pi^2", "sqrt(2)*exp(1)", "log(3)/cos(1)"}) {
        const auto j = parse(src).jet(0.7);
        EXPECT_EQ(j.d1, 0.0) << src;
        EXPECT_EQ(j.d2, 0.0) << src;
        EXPECT_FALSE(parse(src).depends_on_x());
    }
}

TEST(Jet, ValueAgreesWithJet) {
    const auto e = parse("2+sin(3*x)*exp(-x^2)");
    for (double x = -2; x <= 2; x += 0.125) EXPECT_EQ(e.value(x), e.jet(x).v);
}

TEST(Jet, DomainErrors) {
    EXPECT_THROW(parse("sqrt(x)").jet(-1.0), sturm::DomainError);
    EXPECT_THROW(parse("log(x)").jet(0.0), sturm::DomainError);
    EXPECT_THROW(parse("1/x").jet(0.0), sturm::DomainError);
    EXPECT_THROW(parse("x^0.5").jet(-2.0), sturm::DomainError);
    EXPECT_THROW(parse("x^-1").value(0.0), sturm::DomainError);
    EXPECT_THROW(parse("exp(x)").value(1000.0), sturm::DomainError);
    EXPECT_NO_THROW(parse("x^2").jet(-2.0));
    EXPECT_NO_THROW(parse("x^3").value(-2.0));
}

// Derivatives against Richardson-extrapolated central differences of an
// independent long-double evaluator. Cases whose values are outside
// [1e-6, 1e6] in magnitude, or that hit a domain error in either precision,
// are redrawn.
TEST(Jet, MatchesFiniteDifferencesOnRandomExpressions) {
    sturm::test::RandomExpr gen(20240611);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> xs(0.2, 3.0);
    int checked = 0, draws = 0;
    while (checked < 1000) {
        ASSERT_LT(++draws, 200000);
        const Expr e = gen(5);
        if (!e.depends_on_x()) continue;
        const double x = xs(rng);
        sturm::Jet2 j;
        try {
            j = e.jet(x);
            for (double dx : {-0.02, 0.02}) e.value(x + dx);
        } catch (const sturm::DomainError&) {
            continue;
        }
        const double mags[] = {std::abs(j.v), std::abs(j.d1), std::abs(j.d2)};
        bool ok = true;
        for (double m : mags) ok = ok && m < 1e6;
        if (!ok || std::abs(j.v) < 1e-6) continue;

        auto f = [&](long double t) { return sturm::test::eval_long(e, t); };
        const long double h = 1e-3L;
        const auto a = sturm::test::central_difference(f, x, h);
        const auto b = sturm::test::central_difference(f, x, h / 2);
        const auto c = sturm::test::central_difference(f, x, h / 4);
        // two Richardson levels: O(h^6)
        auto rich = [](long double p, long double q, long double r) {
            const long double r1 = (4 * q - p) / 3, r2 = (4 * r - q) / 3;
            return (16 * r2 - r1) / 15;
        };
        if (!std::isfinite(static_cast<double>(a.d2 + b.d2 + c.d2))) continue;
        const double fd1 = static_cast<double>(rich(a.d1, b.d1, c.d1));
        const double fd2 = static_cast<double>(rich(a.d2, b.d2, c.d2));
        // a smooth-looking case can still be badly resolved by the stencil
        // (very fast oscillation); the disagreement between the last two
        // Richardson levels measures that, and such cases are redrawn
        const double spread = std::abs(static_cast<double>((4 * c.d2 - b.d2) / 3 - (4 * b.d2 - a.d2) / 3));
        if (spread > 1e-7 * std::max(1.0, std::abs(fd2))) continue;

        EXPECT_LE(std::abs(j.d1 - fd1), 1e-6 * std::max(1.0, std::abs(fd1))) << e.to_string() << " at " << x;
        EXPECT_LE(std::abs(j.d2 - fd2), 1e-6 * std::max(1.0, std::abs(fd2))) << e.to_string() << " at " << x;
        ++checked;
    }
}

TEST(Expr, ToStringRoundTrips) {
    sturm::test::RandomExpr gen(99);
    for (int i = 0; i < 2000; ++i) {
        const Expr e = gen(8);
        ASSERT_LE(e.depth(), 8);
        const Expr back = parse(e.to_string());
        EXPECT_EQ(back, e) << e.to_string();
        EXPECT_EQ(back.to_string(), e.to_string());
    }
}
