#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cyberalloc/cyberalloc.hpp"
#include "oracles.hpp"

using namespace cyberalloc;

TEST(GoldenSection, FindsParabolaPeak) {
    const auto r = golden_section_maximize([](double x) { return -(x - 1.3) * (x - 1.3); }, 0.0, 4.0, 1e-9);
    EXPECT_NEAR(r.x, 1.3, 1e-8);
    EXPECT_GT(r.iterations, 0u);
}

TEST(Piecewise, FindsPeakBetweenGridPoints) {
    const std::vector<double> none;
    const auto r = maximize_piecewise([](double x) { return -std::pow(x - 0.123456789, 2); }, 0.0, 10.0, none);
    EXPECT_NEAR(r.x, 0.123456789, 1e-6);
}

TEST(Piecewise, LandsOnJump) {
    // rises to 3, drops, then a lower hump; the maximum is the left limit
    // at 3 which is never attained, so the best attained point is at 5
    auto f = [](double x) { return x < 3.0 ? x : (x < 5.0 ? 0.0 : 4.0 - 0.1 * (x - 5.0)); };
    const std::vector<double> bps{3.0, 5.0};
    const auto r = maximize_piecewise(f, 0.0, 10.0, bps);
    EXPECT_EQ(r.x, 5.0);
}

TEST(Piecewise, TiesGoToSmallestX) {
    auto f = [](double x) { return -std::max(0.0, std::fabs(x - 5.0) - 1.0); };
    const std::vector<double> none;
    const auto r = maximize_piecewise(f, 0.0, 10.0, none);
    EXPECT_NEAR(r.x, 4.0, 1e-6);
    EXPECT_TRUE(r.diagnostics.tie_detected);
}

TEST(Piecewise, ConstantPicksLowerBound) {
    const std::vector<double> none;
    const auto r = maximize_piecewise([](double) { return 1.0; }, 2.0, 7.0, none);
    EXPECT_EQ(r.x, 2.0);
}

TEST(Piecewise, RejectsBadInterval) {
    const std::vector<double> none;
    EXPECT_THROW(maximize_piecewise([](double x) { return x; }, 1.0, 0.0, none), ConfigError);
    GridSearchOptions o;
    o.grid_points = 1;
    EXPECT_THROW(maximize_piecewise([](double x) { return x; }, 0.0, 1.0, none, o), ConfigError);
}

TEST(Allocation, RiskNeutralFullInsuranceClosedForm) {
    const auto curve = RiskCurve::exponential(0.2, 0.294);
    const auto a = optimize_allocation(Scenario{10000.0, 1000.0, 0.3, 1.0}, curve, EUTParams{1.0});
    // c* = ln(260 rho) / rho, C_i = 1 / rho
    EXPECT_NEAR(a.c_cs_star, 14.750020814190722, 1e-5);
    EXPECT_NEAR(a.c_i_star, 3.4013605442176871, 1e-5);
    EXPECT_NEAR(a.c_tot, a.c_cs_star + a.c_i_star, 1e-12);
    EXPECT_EQ(a.model_tag, ModelTag::EUT);
}

TEST(Allocation, MatchesBruteForce) {
    for (const char* name : {"pi1", "pi4", "pi5"}) {
        const auto curve = risk_curve_template(name);
        for (const Model& m : std::vector<Model>{PTParams{}, PTParams{0.65, 2.25, 0.65}, EUTParams{0.88}}) {
            for (double i_r : {0.0, 1.0}) {
                const Scenario s{10000.0, 1000.0, 0.3, i_r};
                const auto a = optimize_allocation(s, curve, m);
                const double ref = oracle::brute_force_argmax(s, curve, m, s.loss, 1e-3);
                EXPECT_NEAR(a.c_cs_star, ref, 5e-3) << name << " " << describe(m) << " i_r=" << i_r;
            }
        }
    }
}

TEST(Allocation, Pi5OptimaOnBreakpoints) {
    const auto curve = templates::pi5();
    for (const Model& m : std::vector<Model>{PTParams{}, PTParams{0.65, 2.25, 0.65}, EUTParams{1.0}}) {
        for (double i_r : {0.0, 0.8, 1.0}) {
            const double c = optimize_allocation(Scenario{10000.0, 1000.0, 0.3, i_r}, curve, m).c_cs_star;
            EXPECT_TRUE(c == 15.0 || c == 25.0) << describe(m) << " i_r=" << i_r << " c=" << c;
        }
    }
}

TEST(Allocation, RejectsDomainExceedingWealth) {
    OptimizerOptions o;
    o.c_max = 9500.0;
    EXPECT_THROW(optimize_allocation(Scenario{}, templates::pi1(), PTParams{}, o), ConfigError);
}

TEST(Allocation, InvalidModelRejected) {
    EXPECT_THROW(optimize_allocation(Scenario{}, templates::pi1(), PTParams{0.0, 2.25, 0.65}), DomainError);
}

// Property: the PT argmax does not depend on lambda.
TEST(Property, LambdaInvariantArgmax) {
    for (const char* name : {"pi1", "pi2", "pi4"}) {
        const auto curve = risk_curve_template(name);
        for (double i_r : {0.0, 0.8, 1.0}) {
            const Scenario s{10000.0, 1000.0, 0.3, i_r};
            const double c1 = optimize_allocation(s, curve, PTParams{0.88, 1.0, 0.65}).c_cs_star;
            const double c2 = optimize_allocation(s, curve, PTParams{0.88, 2.25, 0.65}).c_cs_star;
            const double c3 = optimize_allocation(s, curve, PTParams{0.88, 5.0, 0.65}).c_cs_star;
            EXPECT_NEAR(c1, c2, 1e-5);
            EXPECT_NEAR(c2, c3, 1e-5);
        }
    }
}

// Property: identical inputs give bit-identical outputs.
TEST(Property, Deterministic) {
    const Scenario s{10000.0, 1000.0, 0.3, 0.8};
    const auto a = optimize_allocation(s, templates::pi3(), PTParams{});
    const auto b = optimize_allocation(s, templates::pi3(), PTParams{});
    EXPECT_EQ(a.c_cs_star, b.c_cs_star);
    EXPECT_EQ(a.objective_value, b.objective_value);
}

TEST(Ranking, OrdersByObjective) {
    const std::vector<double> opts{0.0, 0.8, 1.0};
    const auto pt = rank_insurance_options(Scenario{}, templates::pi1(), PTParams{}, opts);
    EXPECT_EQ(pt.front().coverage, 1.0);
    const auto eut = rank_insurance_options(Scenario{}, templates::pi1(), EUTParams{0.88}, opts);
    EXPECT_EQ(eut.front().coverage, 0.0);
    for (std::size_t i = 1; i < pt.size(); ++i) {
        EXPECT_GE(pt[i - 1].allocation.objective_value, pt[i].allocation.objective_value);
    }
    EXPECT_FALSE(ranking_is_degenerate(pt));
}

TEST(Ranking, FairPremiumRiskNeutralIsDegenerate) {
    const std::vector<double> opts{0.0, 0.8, 1.0};
    const Scenario fair{10000.0, 1000.0, 0.0, 0.0};
    const auto r = rank_insurance_options(fair, templates::pi1(), EUTParams{1.0}, opts);
    EXPECT_TRUE(ranking_is_degenerate(r));
    // equal objectives: larger coverage listed first
    EXPECT_EQ(r.front().coverage, 1.0);
}

TEST(Ranking, EmptyOptionsIsConfigError) {
    const std::vector<double> none;
    EXPECT_THROW(rank_insurance_options(Scenario{}, templates::pi1(), PTParams{}, none), ConfigError);
}
