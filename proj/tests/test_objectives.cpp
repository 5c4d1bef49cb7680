#include <gtest/gtest.h>

#include <cmath>

#include "cyberalloc/cyberalloc.hpp"
#include "oracles.hpp"

using namespace cyberalloc;

namespace {

double rel_err(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

}  // namespace

TEST(Premium, LoadedPremium) {
    const Scenario s{10000.0, 1000.0, 0.3, 0.8};
    EXPECT_NEAR(premium(s, 0.01), 10.4, 1e-12);
    EXPECT_EQ(premium(s.with_coverage(0.0), 0.01), 0.0);
    EXPECT_THROW(premium(s, 1.5), DomainError);
}

TEST(Outcomes, LossesRelativeToWealth) {
    const Scenario s{10000.0, 1000.0, 0.3, 0.8};
    const auto m = outcome_matrix(s, 10.0, 0.01);
    EXPECT_NEAR(m.loss_if_no_attack, -20.4, 1e-12);
    EXPECT_NEAR(m.loss_if_attack, -220.4, 1e-12);
    EXPECT_NEAR(m.wealth_if_attack, 9779.6, 1e-9);
    EXPECT_NEAR(m.wealth_if_no_attack, 9979.6, 1e-9);
    EXPECT_THROW(outcome_matrix(s, -1.0, 0.01), DomainError);
    EXPECT_THROW(outcome_matrix(s, 9900.0, 0.01), DomainError);
}

TEST(EUT, RiskNeutralExample) {
    // r = 1, i_r = 0.8, q = 0.3, pi = 0.01, c = 10: 0.01 * 9779.6 + 0.99 * 9979.6
    const Scenario s{10000.0, 1000.0, 0.3, 0.8};
    const auto curve = RiskCurve::constant(0.01);
    EXPECT_NEAR(eut_expected_utility(s, curve, EUTParams{1.0}, 10.0), 9977.6, 1e-9);
    EXPECT_NEAR(risk_neutral_expected_utility(s, curve, 10.0), 9977.6, 1e-9);
}

TEST(EUT, UsesScenarioWealth) {
    const Scenario s{20000.0, 1000.0, 0.3, 0.0};
    const auto curve = RiskCurve::constant(0.1);
    EXPECT_EQ(eut_expected_utility(s, curve, EUTParams{1.0, 10000.0}, 0.0),
              eut_expected_utility(s, curve, EUTParams{1.0, 20000.0}, 0.0));
}

TEST(PT, AgreesWithOracle) {
    const auto curve = templates::pi1();
    for (double i_r : {0.0, 0.8, 1.0}) {
        const Scenario s{10000.0, 1000.0, 0.3, i_r};
        for (double c : {0.0, 1.0, 14.75, 60.0, 1000.0}) {
            const double ref = static_cast<double>(oracle::pt_objective(s, curve(c), PTParams{}, c));
            EXPECT_LT(rel_err(pt_overall_value(s, curve, PTParams{}, c), ref), 1e-13);
        }
    }
}

TEST(PT, AllOutcomesAreLosses) {
    const auto curve = templates::pi2();
    for (double i_r : {0.0, 0.5, 1.0}) {
        const Scenario s{10000.0, 1000.0, 0.3, i_r};
        for (double c : {0.0, 5.0, 50.0}) EXPECT_LE(pt_overall_value(s, curve, PTParams{}, c), 0.0);
    }
}

// Closed forms on 1000 points, every template, several parameter sets.
TEST(ClosedForm, SpecialisationsMatchGeneralForm) {
    for (const auto& name : templates::names()) {
        const auto curve = risk_curve_template(name);
        for (const PTParams p : {PTParams{}, PTParams{0.65, 2.25, 0.65}, PTParams{0.95, 1.0, 0.9}}) {
            for (int k = 0; k < 1000; ++k) {
                const double c = 0.1 * k;
                const double pi = curve(c);
                const Scenario full{10000.0, 1000.0, 0.3, 1.0};
                const Scenario none{10000.0, 1000.0, 0.3, 0.0};
                const Scenario part{10000.0, 1000.0, 0.3, 0.8};
                ASSERT_LE(rel_err(closed_form::pt_value_full_insurance(full, pi, p, c),
                                  pt_overall_value(full, curve, p, c)), 1e-12);
                ASSERT_LE(rel_err(closed_form::pt_value_no_insurance(none, pi, p, c),
                                  pt_overall_value(none, curve, p, c)), 1e-12);
                ASSERT_LE(rel_err(closed_form::pt_value_expanded(part, pi, p, c),
                                  pt_overall_value(part, curve, p, c)), 1e-12);
                for (double r : {0.5, 0.88, 1.0}) {
                    const EUTParams e{r};
                    ASSERT_LE(rel_err(closed_form::eut_full_insurance(full, pi, r, c),
                                      eut_expected_utility(full, curve, e, c)), 1e-12);
                    ASSERT_LE(rel_err(closed_form::eut_no_insurance(none, pi, r, c),
                                      eut_expected_utility(none, curve, e, c)), 1e-12);
                    ASSERT_LE(rel_err(closed_form::eut_expanded(part, pi, r, c),
                                      eut_expected_utility(part, curve, e, c)), 1e-12);
                }
                ASSERT_LE(rel_err(closed_form::eut_risk_neutral(part, pi, c),
                                  eut_expected_utility(part, curve, EUTParams{1.0}, c)), 1e-12);
            }
        }
    }
}

// Fair premiums make a risk-neutral buyer indifferent to coverage.
TEST(Property, FairPremiumDegeneracy) {
    const auto curve = templates::pi3();
    for (int k = 0; k < 200; ++k) {
        const double c = 0.5 * k;
        const double v0 = eut_expected_utility(Scenario{10000.0, 1000.0, 0.0, 0.0}, curve, EUTParams{1.0}, c);
        for (double i_r : {0.8, 1.0}) {
            const double v = eut_expected_utility(Scenario{10000.0, 1000.0, 0.0, i_r}, curve, EUTParams{1.0}, c);
            ASSERT_LE(rel_err(v, v0), 1e-12);
        }
    }
}

// PT value is homogeneous of degree one in lambda.
TEST(Property, LambdaScalesValue) {
    const auto curve = templates::pi1();
    const Scenario s{10000.0, 1000.0, 0.3, 0.8};
    for (double c : {0.0, 7.0, 30.0}) {
        const double v1 = pt_overall_value(s, curve, PTParams{0.88, 1.0, 0.65}, c);
        const double v3 = pt_overall_value(s, curve, PTParams{0.88, 3.0, 0.65}, c);
        EXPECT_NEAR(v3, 3.0 * v1, 1e-12 * std::fabs(v3));
    }
}

// With beta = 1 and alpha = 1 PT is the expected loss times lambda.
TEST(Property, LinearPTIsExpectedLoss) {
    const auto curve = templates::pi2();
    const Scenario s{10000.0, 1000.0, 0.3, 0.8};
    for (double c : {0.0, 3.0, 12.0}) {
        const double v = pt_overall_value(s, curve, PTParams{1.0, 1.0, 1.0}, c);
        const double eu = risk_neutral_expected_utility(s, curve, c);
        EXPECT_NEAR(v, eu - s.wealth, 1e-9);
    }
}
