#include <gtest/gtest.h>

#include "cyberalloc/cyberalloc.hpp"
#include "oracles.hpp"

using namespace cyberalloc;

TEST(PTValue, LossFrozenValue) {
    // -2.25 * 100^0.88
    EXPECT_NEAR(pt_value(-100.0, PTParams{}), -129.47398590086031, 1e-12);
}

TEST(PTValue, GainsAndZero) {
    EXPECT_EQ(pt_value(0.0, PTParams{}), 0.0);
    EXPECT_NEAR(pt_value(100.0, PTParams{}), 129.47398590086031 / 2.25, 1e-12);
    EXPECT_EQ(pt_value(-7.0, PTParams{1.0, 1.0, 0.65}), -7.0);
}

TEST(PTWeight, FrozenValues) {
    const PTParams p{};
    EXPECT_NEAR(pt_weight(0.1, p), 0.17871926720611956, 1e-15);
    EXPECT_NEAR(pt_weight(0.01, p), 0.046933330495365356, 1e-15);
    EXPECT_NEAR(pt_weight(0.9, p), 0.74546800095055165, 1e-15);
    EXPECT_NEAR(2.0 * pt_weight(0.5, p), 0.87754101496936043, 1e-15);
}

TEST(PTWeight, EndpointsExact) {
    for (double b : {0.3, 0.65, 1.0}) {
        const PTParams p{0.88, 2.25, b};
        EXPECT_EQ(pt_weight(0.0, p), 0.0);
        EXPECT_EQ(pt_weight(1.0, p), 1.0);
    }
}

TEST(PTWeight, BetaOneIsIdentity) {
    const PTParams p{0.88, 2.25, 1.0};
    for (double x : {1e-9, 0.01, 0.3, 0.5, 0.77}) EXPECT_EQ(pt_weight(x, p), x);
}

TEST(PTWeight, OutsideUnitIntervalIsDomainError) {
    EXPECT_THROW(pt_weight(-0.01, PTParams{}), DomainError);
    EXPECT_THROW(pt_weight(1.01, PTParams{}), DomainError);
}

TEST(PTWeight, AgreesWithOracle) {
    for (double b : {0.5, 0.65, 0.9}) {
        for (int k = 1; k < 1000; ++k) {
            const double x = k / 1000.0;
            const double ref = static_cast<double>(oracle::weight(x, b));
            EXPECT_NEAR(pt_weight(x, PTParams{0.88, 2.25, b}), ref, 4e-16 + 1e-14 * ref);
        }
    }
}

// Inverse-S: small probabilities are overweighted, large ones underweighted.
TEST(PTWeight, InverseS) {
    const PTParams p{};
    EXPECT_GT(pt_weight(0.05, p), 0.05);
    EXPECT_LT(pt_weight(0.9, p), 0.9);
}

TEST(CRRA, FrozenValue) {
    // (10000 - 1000)^0.88
    EXPECT_NEAR(crra_utility(1000.0, EUTParams{0.88, 10000.0}), 3018.0984917203529, 1e-9);
}

TEST(CRRA, RiskNeutralIsWealth) {
    EXPECT_EQ(crra_utility(123.5, EUTParams{1.0, 10000.0}), 10000.0 - 123.5);
}

TEST(CRRA, NegativeWealthIsDomainError) {
    EXPECT_THROW(crra_utility(10001.0, EUTParams{0.88, 10000.0}), DomainError);
    EXPECT_EQ(crra_utility(10000.0, EUTParams{0.88, 10000.0}), 0.0);
}

TEST(Params, Validation) {
    EXPECT_NO_THROW(PTParams{}.validate());
    EXPECT_THROW((PTParams{0.0, 2.25, 0.65}.validate()), DomainError);
    EXPECT_THROW((PTParams{1.1, 2.25, 0.65}.validate()), DomainError);
    EXPECT_THROW((PTParams{0.88, 0.9, 0.65}.validate()), DomainError);
    EXPECT_THROW((PTParams{0.88, 2.25, 0.0}.validate()), DomainError);
    EXPECT_THROW((EUTParams{0.0}.validate()), DomainError);
    EXPECT_TRUE((EUTParams{1.0}.risk_neutral()));
    EXPECT_TRUE((EUTParams{0.88}.risk_averse()));
}

TEST(Params, WarningsOutsideEmpiricalRange) {
    EXPECT_TRUE(PTParams{}.warnings().empty());
    EXPECT_EQ((PTParams{0.4, 3.0, 0.4}.warnings().size()), 3u);
}

// Property: v is odd up to the loss-aversion factor.
TEST(Property, LossAversionScaling) {
    for (double lam : {1.0, 2.25, 4.0}) {
        const PTParams p{0.7, lam, 0.65};
        for (double x : {0.5, 3.0, 250.0}) EXPECT_NEAR(pt_value(-x, p), -lam * pt_value(x, p), 1e-12 * x);
    }
}
