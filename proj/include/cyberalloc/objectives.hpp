#pragma once

#include <cmath>

#include "cyberalloc/errors.hpp"
#include "cyberalloc/preferences.hpp"
#include "cyberalloc/risk_curve.hpp"

namespace cyberalloc {

/// Market and organisation context for one allocation decision.
struct Scenario {
    double wealth = 10000.0;  // W
    double loss = 1000.0;     // L, collective loss if an attack succeeds
    double margin = 0.3;      // q, insurer profit loading
    double coverage = 0.0;    // i_r, indemnity D = i_r * L

    void validate() const {
        if (!(wealth >= 0.0) || !std::isfinite(wealth)) throw DomainError("wealth must be non-negative");
        if (!(loss >= 0.0) || !std::isfinite(loss)) throw DomainError("loss must be non-negative");
        if (loss > wealth) throw DomainError("loss must not exceed wealth");
        if (!(margin >= 0.0) || !std::isfinite(margin)) throw DomainError("profit margin must be non-negative");
        if (!(coverage >= 0.0 && coverage <= 1.0)) throw DomainError("coverage ratio must lie in [0, 1]");
    }

    Scenario with_coverage(double i_r) const {
        Scenario s = *this;
        s.coverage = i_r;
        return s;
    }

    double indemnity() const { return coverage * loss; }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Two-outcome view of an allocation: PT losses relative to W and the
/// matching EUT net wealth.
struct OutcomeMatrix {
    double loss_if_attack;
    double loss_if_no_attack;
    double wealth_if_attack;
    double wealth_if_no_attack;
};

/// Loaded premium C_i = (1 + q) * pi * i_r * L. q = 0 is the fair premium.
inline double premium(const Scenario& s, double pi) {
    if (!(pi >= 0.0 && pi <= 1.0)) throw DomainError("probability must lie in [0, 1]");
    return (1.0 + s.margin) * pi * s.coverage * s.loss;
}

/// Outcomes for spend c_cs when the attack probability is pi (the premium
/// is priced at pi).
inline OutcomeMatrix outcome_matrix(const Scenario& s, double c_cs, double pi) {
    if (!(c_cs >= 0.0)) throw DomainError("controls spend must be non-negative");
    const double c_i = premium(s, pi);
    OutcomeMatrix m{};
    m.loss_if_no_attack = -c_i - c_cs;
    m.loss_if_attack = -(1.0 - s.coverage) * s.loss + m.loss_if_no_attack;
    m.wealth_if_attack = s.wealth + m.loss_if_attack;
    m.wealth_if_no_attack = s.wealth + m.loss_if_no_attack;
    // the attack branch is the worst case
    if (m.wealth_if_attack < 0.0) throw DomainError("outlays exceed total wealth");
    return m;
}

inline OutcomeMatrix outcome_matrix(const Scenario& s, const RiskCurve& curve, double c_cs) {
    return outcome_matrix(s, c_cs, curve(c_cs));
}

/// PT overall value V = w(pi) v(attack loss) + w(1 - pi) v(no-attack loss).
/// The status-quo reference point keeps every outcome a loss, so V <= 0.
inline double pt_overall_value(const Scenario& s, const RiskCurve& curve, const PTParams& params, double c_cs) {
    const double pi = curve(c_cs);
    const OutcomeMatrix m = outcome_matrix(s, c_cs, pi);
    return pt_weight(pi, params) * pt_value(m.loss_if_attack, params) +
           pt_weight(1.0 - pi, params) * pt_value(m.loss_if_no_attack, params);
}

/// Expected CRRA utility of net wealth over the two outcomes. Wealth is
/// taken from the scenario; params.wealth is ignored here.
inline double eut_expected_utility(const Scenario& s, const RiskCurve& curve, const EUTParams& params,
                                   double c_cs) {
    const double pi = curve(c_cs);
    const OutcomeMatrix m = outcome_matrix(s, c_cs, pi);
    const EUTParams u{params.r, s.wealth};
    return pi * crra_utility(-m.loss_if_attack, u) + (1.0 - pi) * crra_utility(-m.loss_if_no_attack, u);
}

/// Risk-neutral expected utility in closed form: W - pi L (1 + q i_r) - c_cs.
inline double risk_neutral_expected_utility(const Scenario& s, const RiskCurve& curve, double c_cs) {
    const double pi = curve(c_cs);
    outcome_matrix(s, c_cs, pi);  // wealth guard
    return s.wealth - pi * s.loss * (1.0 + s.margin * s.coverage) - c_cs;
}

// Algebraically simplified objectives. These are independent routes to the
// same numbers and are used to cross-check the general forms.
namespace closed_form {

// V expanded in terms of L, q, i_r.
inline double pt_value_expanded(const Scenario& s, double pi, const PTParams& p, double c_cs) {
    const double attack = s.loss - s.coverage * s.loss * (1.0 - (1.0 + s.margin) * pi) + c_cs;
    const double no_attack = (1.0 + s.margin) * pi * s.coverage * s.loss + c_cs;
    return -p.lambda * (pt_weight(pi, p) * std::pow(attack, p.alpha) +
                        pt_weight(1.0 - pi, p) * std::pow(no_attack, p.alpha));
}

// i_r = 1: -lambda [(1+q) pi L + c]^alpha (w(pi) + w(1-pi))
inline double pt_value_full_insurance(const Scenario& s, double pi, const PTParams& p, double c_cs) {
    return -p.lambda * std::pow((1.0 + s.margin) * pi * s.loss + c_cs, p.alpha) *
           (pt_weight(pi, p) + pt_weight(1.0 - pi, p));
}

// i_r = 0: -lambda {w(pi) (L + c)^alpha + w(1-pi) c^alpha}
inline double pt_value_no_insurance(const Scenario& s, double pi, const PTParams& p, double c_cs) {
    return -p.lambda * (pt_weight(pi, p) * std::pow(s.loss + c_cs, p.alpha) +
                        pt_weight(1.0 - pi, p) * std::pow(c_cs, p.alpha));
}

inline double eut_expanded(const Scenario& s, double pi, double r, double c_cs) {
    const double attack = s.wealth - s.loss + s.coverage * s.loss * (1.0 - (1.0 + s.margin) * pi) - c_cs;
    const double no_attack = s.wealth - (1.0 + s.margin) * pi * s.coverage * s.loss - c_cs;
    return pi * std::pow(attack, r) + (1.0 - pi) * std::pow(no_attack, r);
}

// i_r = 1: (W - (1+q) pi L - c)^r
inline double eut_full_insurance(const Scenario& s, double pi, double r, double c_cs) {
    return std::pow(s.wealth - (1.0 + s.margin) * pi * s.loss - c_cs, r);
}

// i_r = 0: pi (W - L - c)^r + (1 - pi) (W - c)^r
inline double eut_no_insurance(const Scenario& s, double pi, double r, double c_cs) {
    return pi * std::pow(s.wealth - s.loss - c_cs, r) + (1.0 - pi) * std::pow(s.wealth - c_cs, r);
}

// r = 1: W - pi L (1 + q i_r) - c
inline double eut_risk_neutral(const Scenario& s, double pi, double c_cs) {
    return s.wealth - pi * s.loss * (1.0 + s.margin * s.coverage) - c_cs;
}

}  // namespace closed_form

}  // namespace cyberalloc
