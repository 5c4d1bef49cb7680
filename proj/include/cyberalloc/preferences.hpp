#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "cyberalloc/errors.hpp"

namespace cyberalloc {

/// Prospect theory parameters. Defaults are the usual median estimates.
struct PTParams {
    double alpha = 0.88;   // curvature (diminishing sensitivity)
    double lambda = 2.25;  // loss aversion
    double beta = 0.65;    // probability weighting

    // Hard bounds: 0 < alpha <= 1, lambda >= 1, 0 < beta <= 1.
    void validate() const {
        if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
        if (!(lambda >= 1.0) || !std::isfinite(lambda)) throw DomainError("lambda must be >= 1");
        if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("beta must lie in (0, 1]");
    }

    // Values outside the empirically observed ranges are allowed but flagged.
    std::vector<std::string> warnings() const {
        std::vector<std::string> w;
        if (alpha < 0.5) w.emplace_back("alpha below the empirical range [0.5, 1]");
        if (lambda > 2.5) w.emplace_back("lambda above the empirical range [1, 2.5]");
        if (beta < 0.5) w.emplace_back("beta below the empirical range [0.5, 1]");
        return w;
    }

    friend bool operator==(const PTParams&, const PTParams&) = default;
};

/// CRRA expected-utility parameters. r < 1 is risk averse, r == 1 risk
/// neutral, r > 1 risk seeking.
struct EUTParams {
    double r = 1.0;
    double wealth = 10000.0;

    void validate() const {
        if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("r must be positive");
        if (!(wealth >= 0.0) || !std::isfinite(wealth)) throw DomainError("wealth must be non-negative");
    }

    bool risk_neutral() const { return r == 1.0; }
    bool risk_averse() const { return r < 1.0; }

    friend bool operator==(const EUTParams&, const EUTParams&) = default;
};

namespace detail {

// |x|^a for |x| > 0 via exp(a ln|x|); 0 at x == 0.
inline double abs_pow(double x, double a) {
    const double m = std::fabs(x);
    if (m == 0.0) return 0.0;
    if (a == 1.0) return m;
    return std::exp(a * std::log(m));
}

}  // namespace detail

/// PT value of a gain (x >= 0) or loss (x < 0) relative to the reference point.
inline double pt_value(double x, const PTParams& params) {
    const double mag = detail::abs_pow(x, params.alpha);
    return x >= 0.0 ? mag : -params.lambda * mag;
}

/// Inverse-S probability weighting w(p) = p^b / (p^b + (1-p)^b)^(1/b).
/// Exact at the endpoints and linear when beta == 1.
inline double pt_weight(double p, const PTParams& params) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability must lie in [0, 1]");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    const double b = params.beta;
    if (b == 1.0) return p;
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    const double sum = std::exp(b * log_p) + std::exp(b * log_q);
    return std::exp(b * log_p - std::log(sum) / b);
}

/// CRRA utility of net wealth after a cost x: (W - x)^r.
inline double crra_utility(double x, const EUTParams& params) {
    const double base = params.wealth - x;
    if (base < 0.0) throw DomainError("costs exceed total wealth");
    if (params.r == 1.0) return base;
    return detail::abs_pow(base, params.r);
}

}  // namespace cyberalloc
