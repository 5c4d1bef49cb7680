#include <gtest/gtest.h>

#include <cmath>

#include "cyberalloc/cyberalloc.hpp"

using namespace cyberalloc;

TEST(RiskCurve, ExponentialMatchesFrozenValue) {
    const auto c = RiskCurve::exponential(0.2, 0.294);
    // 0.2 exp(-0.294 * 14.75), 40-digit reference
    EXPECT_NEAR(c(14.75), 0.002616447198824688, 1e-17);
    EXPECT_DOUBLE_EQ(c(0.0), 0.2);
}

TEST(RiskCurve, NegativeSpendIsDomainError) {
    const auto c = RiskCurve::exponential(0.2, 0.294);
    EXPECT_THROW(c(-1.0), DomainError);
    EXPECT_THROW(c(std::nan("")), DomainError);
}

TEST(RiskCurve, HeldFlatBeyondDomain) {
    const auto c = RiskCurve::exponential(0.2, 0.1, 50.0);
    EXPECT_EQ(c(80.0), c(50.0));
}

TEST(RiskCurve, ConstructionChecks) {
    EXPECT_THROW(RiskCurve::exponential(0.2, 0.0), DomainError);
    EXPECT_THROW(RiskCurve::exponential(1.2, 0.1), DomainError);
    EXPECT_THROW(RiskCurve::stepped({{1.0, 0.2, 0.0}}), DomainError);
    EXPECT_THROW(RiskCurve::stepped({{0.0, 0.2, 0.0}, {0.0, 0.1, 0.0}}), DomainError);
    EXPECT_THROW(RiskCurve::stepped({{0.0, 0.2, -0.1}}), DomainError);
    EXPECT_THROW(RiskCurve::tabulated({{0.0, 0.2}}), DomainError);
    EXPECT_THROW(RiskCurve::tabulated({{1.0, 0.2}, {2.0, 0.1}}), DomainError);
    EXPECT_THROW(RiskCurve::tabulated({{0.0, 0.2}, {0.0, 0.1}}), DomainError);
}

TEST(RiskCurve, SteppedIsRightContinuous) {
    const auto c = RiskCurve::stepped({{0.0, 0.2, 0.0}, {15.0, 0.025, 0.0}, {25.0, 0.013, 0.0}});
    EXPECT_EQ(c(14.999), 0.2);
    EXPECT_EQ(c(15.0), 0.025);
    EXPECT_EQ(c.left_limit(15.0), 0.2);
    EXPECT_EQ(c(25.0), 0.013);
    EXPECT_EQ(c.left_limit(25.0), 0.025);
    const auto bp = c.breakpoints();
    ASSERT_EQ(bp.size(), 3u);
    EXPECT_EQ(bp[0], 15.0);
    EXPECT_EQ(bp[1], 25.0);
    EXPECT_EQ(bp[2], kDefaultDomainMax);
}

TEST(RiskCurve, TabulatedInterpolatesLinearly) {
    const auto c = RiskCurve::tabulated({{0.0, 0.2}, {10.0, 0.1}, {20.0, 0.05}});
    EXPECT_DOUBLE_EQ(c(5.0), 0.15);
    EXPECT_DOUBLE_EQ(c(15.0), 0.075);
    EXPECT_DOUBLE_EQ(c(30.0), 0.05);
    EXPECT_EQ(c.domain_max(), 20.0);
}

TEST(RiskCurve, RescaledStretchesCurrencyAxis) {
    for (const auto& name : templates::names()) {
        const auto c = risk_curve_template(name);
        const auto r = c.rescaled(4.0);
        for (double x : {0.0, 3.0, 14.0, 40.0, 100.0}) {
            EXPECT_NEAR(r(4.0 * x), c(x), 1e-15) << name << " at " << x;
        }
        EXPECT_EQ(r.domain_max(), 4.0 * c.domain_max());
    }
}

TEST(Calibration, MatchesFrozenRate) {
    // ln(0.2 / 0.002562) / 14.82
    EXPECT_NEAR(calibrate_exponential(0.2, 14.82, 0.002562), 0.29403030789969596, 1e-15);
    EXPECT_THROW(calibrate_exponential(0.2, 14.82, 0.3), DomainError);
    EXPECT_THROW(calibrate_exponential(0.2, 0.0, 0.01), DomainError);
}

TEST(Calibration, RoundTripsAnchorPoint) {
    const double rate = calibrate_exponential(0.3, 7.0, 0.02);
    EXPECT_NEAR(RiskCurve::exponential(0.3, rate)(7.0), 0.02, 1e-16);
}

TEST(Templates, AllSatisfyAssumptions) {
    for (const auto& name : templates::names()) {
        const auto rep = validate_curve(risk_curve_template(name));
        EXPECT_TRUE(rep.satisfies_assumptions()) << name;
        EXPECT_TRUE(rep.theorem_precondition_ok) << name;
        EXPECT_LE(rep.max_probability, 0.3) << name;
    }
}

TEST(Templates, UnknownNameIsLookupError) { EXPECT_THROW(risk_curve_template("pi9"), LookupError); }

TEST(Templates, Pi4IsContinuousAtPlateau) {
    const auto c = templates::pi4();
    EXPECT_NEAR(c.left_limit(6.0), c(6.0), 1e-15);
    EXPECT_NEAR(c.left_limit(12.0), c(12.0), 1e-15);
}

TEST(Validation, DetectsIncreasingCurve) {
    const auto c = RiskCurve::tabulated({{0.0, 0.1}, {10.0, 0.2}});
    const auto rep = validate_curve(c);
    EXPECT_FALSE(rep.monotone);
    EXPECT_FALSE(rep.satisfies_assumptions());
    ASSERT_EQ(rep.violations().size(), 1u);
}

TEST(Validation, DetectsUpwardJump) {
    const auto c = RiskCurve::stepped({{0.0, 0.1, 0.0}, {5.0, 0.2, 0.0}});
    EXPECT_FALSE(validate_curve(c).monotone);
}

TEST(Validation, DetectsZeroProbability) {
    const auto c = RiskCurve::tabulated({{0.0, 0.2}, {10.0, 0.0}});
    const auto rep = validate_curve(c);
    EXPECT_TRUE(rep.monotone);
    EXPECT_FALSE(rep.strictly_positive);
}

TEST(Validation, BaselineOneAndTheoremPrecondition) {
    EXPECT_FALSE(validate_curve(RiskCurve::constant(1.0)).baseline_below_one);
    const auto hi = RiskCurve::exponential(0.7, 0.1);
    const auto rep = validate_curve(hi);
    EXPECT_TRUE(rep.satisfies_assumptions());
    EXPECT_FALSE(rep.theorem_precondition_ok);
}

TEST(Validation, ResolutionMustBeAtLeastTwo) {
    EXPECT_THROW(validate_curve(templates::pi1(), 1), DomainError);
}

// Property: every exponential curve with rate > 0 is strictly decreasing.
TEST(Property, ExponentialStrictlyDecreasing) {
    for (double b : {0.01, 0.2, 0.5, 0.99}) {
        for (double rate : {0.001, 0.3, 2.0}) {
            const auto c = RiskCurve::exponential(b, rate, 10.0);
            double prev = c(0.0);
            for (int i = 1; i <= 100; ++i) {
                const double p = c(0.1 * i);
                EXPECT_LT(p, prev);
                prev = p;
            }
        }
    }
}
