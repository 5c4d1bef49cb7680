#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cyberalloc/errors.hpp"
#include "cyberalloc/objectives.hpp"
#include "cyberalloc/optimizer.hpp"
#include "cyberalloc/preferences.hpp"
#include "cyberalloc/risk_curve.hpp"

namespace cyberalloc {

// ---------------------------------------------------------------------------
// PT vs EUT comparison

struct ComparisonReport {
    double c_cs_overspend_pct = 0.0;  // 100 (C_cs,PT - C_cs,EUT) / C_cs,EUT
    double risk_reduction_pct = 0.0;  // 100 (pi(C_cs,EUT) - pi(C_cs,PT)) / pi(C_cs,EUT)
    double c_tot_delta = 0.0;         // C_tot,PT - C_tot,EUT
    bool equal_total_cost = false;
};

inline constexpr double kEqualCostRelTolerance = 1e-6;

/// Percentage overspend on controls and the matching risk reduction of the
/// PT allocation relative to the EUT allocation.
inline ComparisonReport compare_models(const AllocationResult& pt, const AllocationResult& eut,
                                       const RiskCurve& curve) {
    if (!(pt.scenario == eut.scenario)) {
        throw UsageError("allocations were solved for different scenarios");
    }
    ComparisonReport r;
    const double dc = pt.c_cs_star - eut.c_cs_star;
    if (eut.c_cs_star > 0.0) {
        r.c_cs_overspend_pct = 100.0 * dc / eut.c_cs_star;
    } else {
        r.c_cs_overspend_pct = dc == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), dc);
    }
    const double p_eut = curve(eut.c_cs_star);
    const double p_pt = curve(pt.c_cs_star);
    r.risk_reduction_pct = p_eut > 0.0 ? 100.0 * (p_eut - p_pt) / p_eut : 0.0;
    r.c_tot_delta = pt.c_tot - eut.c_tot;
    r.equal_total_cost =
        std::fabs(r.c_tot_delta) <= kEqualCostRelTolerance * std::max(pt.c_tot, eut.c_tot);
    return r;
}

// ---------------------------------------------------------------------------
// Conjecture sweeps

enum class SweepAxis { RiskAversion, Alpha, Beta };

inline const char* to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::RiskAversion: return "r";
        case SweepAxis::Alpha: return "alpha";
        default: return "beta";
    }
}

enum class Trend { Increasing, Decreasing, Flat, Mixed };

inline const char* to_string(Trend t) {
    switch (t) {
        case Trend::Increasing: return "increasing";
        case Trend::Decreasing: return "decreasing";
        case Trend::Flat: return "flat";
        default: return "mixed";
    }
}

struct SweepReport {
    SweepAxis axis;
    std::vector<double> values;
    std::vector<AllocationResult> results;
    std::vector<double> c_cs_stars;
    Trend trend = Trend::Flat;
    double spread = 0.0;  // max - min of c_cs_stars
    // r: spread <= 0.1; alpha: strictly increasing; beta: strictly decreasing
    bool conjecture_holds = false;
};

inline constexpr double kRiskAversionSpreadLimit = 0.1;
// differences below this are solver noise
inline constexpr double kTrendTolerance = 1e-5;

inline Trend classify_trend(std::span<const double> xs, double tol = kTrendTolerance) {
    bool up = true, down = true, flat = true;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double d = xs[i] - xs[i - 1];
        if (!(d > tol)) up = false;
        if (!(d < -tol)) down = false;
        if (std::fabs(d) > tol) flat = false;
    }
    if (xs.size() < 2 || flat) return Trend::Flat;
    if (up) return Trend::Increasing;
    if (down) return Trend::Decreasing;
    return Trend::Mixed;
}

/// Re-solves along one parameter axis. The r axis varies base_eut, the
/// alpha and beta axes vary base_pt. values must be sorted ascending.
inline SweepReport conjecture_sweep(const Scenario& s, const RiskCurve& curve, SweepAxis axis,
                                    std::span<const double> values, const PTParams& base_pt = {},
                                    const EUTParams& base_eut = {}, const OptimizerOptions& opt = {}) {
    if (values.empty()) throw UsageError("sweep needs at least one value");
    if (!std::is_sorted(values.begin(), values.end())) throw UsageError("sweep values must be sorted ascending");

    SweepReport rep{axis, {values.begin(), values.end()}, {}, {}};
    for (double v : values) {
        Model m;
        if (axis == SweepAxis::RiskAversion) {
            EUTParams e = base_eut;
            e.r = v;
            m = e;
        } else {
            PTParams p = base_pt;
            (axis == SweepAxis::Alpha ? p.alpha : p.beta) = v;
            m = p;
        }
        rep.results.push_back(optimize_allocation(s, curve, m, opt));
        rep.c_cs_stars.push_back(rep.results.back().c_cs_star);
    }
    const auto [lo, hi] = std::minmax_element(rep.c_cs_stars.begin(), rep.c_cs_stars.end());
    rep.spread = *hi - *lo;
    rep.trend = classify_trend(rep.c_cs_stars);
    switch (axis) {
        case SweepAxis::RiskAversion: rep.conjecture_holds = rep.spread <= kRiskAversionSpreadLimit; break;
        case SweepAxis::Alpha: rep.conjecture_holds = rep.trend == Trend::Increasing; break;
        case SweepAxis::Beta: rep.conjecture_holds = rep.trend == Trend::Decreasing; break;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Bespoke (alpha, beta) search

struct BespokeCandidate {
    double alpha;
    double beta;
    AllocationResult allocation;
    double cost_gap;       // |C_tot - C_tot,EUT|
    double risk_gain_pct;  // 100 (pi_EUT - pi) / pi_EUT
};

struct BespokeResult {
    double alpha_star;
    double beta_star;
    AllocationResult allocation;
    AllocationResult eut_reference;
    double cost_gap;
    double risk_gain_pct;
};

/// 0.50, 0.51, ..., 1.00
inline std::vector<double> default_bespoke_grid() {
    std::vector<double> g;
    for (int i = 50; i <= 100; ++i) g.push_back(static_cast<double>(i) / 100.0);
    return g;
}

inline constexpr double kDefaultBespokeCostFraction = 1e-3;

/// Every grid point whose PT optimum costs the same as the EUT reference
/// (within cost_tolerance) while leaving strictly less residual risk.
/// Grid order: alpha outer, beta inner.
inline std::vector<BespokeCandidate> bespoke_candidates(const Scenario& s, const RiskCurve& curve,
                                                        const AllocationResult& eut_reference,
                                                        std::span<const double> alpha_grid,
                                                        std::span<const double> beta_grid, double cost_tolerance,
                                                        double lambda = PTParams{}.lambda,
                                                        const OptimizerOptions& opt = {}) {
    if (!(eut_reference.scenario == s)) throw UsageError("EUT reference was solved for a different scenario");
    if (eut_reference.model_tag != ModelTag::EUT) throw UsageError("reference allocation must come from EUT");
    std::vector<BespokeCandidate> out;
    const double p_ref = eut_reference.residual_prob;
    for (double a : alpha_grid) {
        for (double b : beta_grid) {
            const PTParams p{a, lambda, b};
            const AllocationResult r = optimize_allocation(s, curve, p, opt);
            const double gap = std::fabs(r.c_tot - eut_reference.c_tot);
            const double gain = p_ref > 0.0 ? 100.0 * (p_ref - r.residual_prob) / p_ref : 0.0;
            if (gap <= cost_tolerance && gain > 0.0) out.push_back({a, b, r, gap, gain});
        }
    }
    return out;
}

/// The qualifying (alpha, beta) with the largest risk gain, or nothing.
/// Equal gains keep the first in grid order.
inline std::optional<BespokeResult> bespoke_search(const Scenario& s, const RiskCurve& curve,
                                                   const AllocationResult& eut_reference,
                                                   std::span<const double> alpha_grid,
                                                   std::span<const double> beta_grid, double cost_tolerance,
                                                   double lambda = PTParams{}.lambda,
                                                   const OptimizerOptions& opt = {}) {
    const auto cands =
        bespoke_candidates(s, curve, eut_reference, alpha_grid, beta_grid, cost_tolerance, lambda, opt);
    if (cands.empty()) return std::nullopt;
    auto best = cands.begin();
    for (auto it = cands.begin(); it != cands.end(); ++it) {
        if (it->risk_gain_pct > best->risk_gain_pct) best = it;
    }
    return BespokeResult{best->alpha, best->beta, best->allocation, eut_reference, best->cost_gap,
                         best->risk_gain_pct};
}

// ---------------------------------------------------------------------------
// Theorem checks

enum class Verdict { Pass, Fail, NotApplicable };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        default: return "n/a";
    }
}

inline constexpr std::size_t kPropositionGridPoints = 500;
inline constexpr double kPropositionMargin = 1e-9;

/// w(p) + w(1 - p) strictly decreasing on p = 0.5 k / n, k = 1..n, each
/// step by more than margin. Not applicable for beta == 1 (the sum is 1).
inline Verdict check_weight_sum_decreasing(double beta, std::size_t n = kPropositionGridPoints,
                                           double margin = kPropositionMargin) {
    if (!(beta > 0.0 && beta < 1.0)) return Verdict::NotApplicable;
    const PTParams p{1.0, 1.0, beta};
    double prev = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double x = 0.5 * static_cast<double>(k) / static_cast<double>(n);
        const double s = pt_weight(x, p) + pt_weight(1.0 - x, p);
        if (k > 1 && !(prev - s > margin)) return Verdict::Fail;
        prev = s;
    }
    return Verdict::Pass;
}

struct TheoremReport {
    bool applicable = false;  // curve satisfies 0 < pi <= 0.5
    Verdict proposition1 = Verdict::NotApplicable;
    Verdict theorem1 = Verdict::NotApplicable;  // C_PT < C_EUT at full insurance
    Verdict theorem2 = Verdict::NotApplicable;  // C_i,PT > C_i,EUT at full insurance
    std::optional<AllocationResult> pt;
    std::optional<AllocationResult> eut;
    // C_EUT - C_PT - (1+q) L [pi(C_PT) - pi(C_EUT)]; zero iff total costs match
    double equal_cost_residual = 0.0;
    bool equal_total_cost = false;
    std::string note;
};

/// Numerical check of the full-insurance results. The scenario's coverage
/// is forced to 1.
inline TheoremReport verify_theorems(const RiskCurve& curve, const Scenario& scenario, const PTParams& pt,
                                     const EUTParams& eut, const OptimizerOptions& opt = {}) {
    TheoremReport rep;
    const CurveValidationReport v = validate_curve(curve);
    if (!v.theorem_precondition_ok || !v.monotone) {
        rep.note = "theorem not applicable: curve must be non-increasing with 0 < pi <= 0.5";
        return rep;
    }
    rep.applicable = true;
    rep.proposition1 = check_weight_sum_decreasing(pt.beta);

    const Scenario s = scenario.with_coverage(1.0);
    rep.pt = optimize_allocation(s, curve, pt, opt);
    rep.eut = optimize_allocation(s, curve, eut, opt);
    const double c_pt = rep.pt->c_cs_star;
    const double c_eut = rep.eut->c_cs_star;
    rep.equal_cost_residual =
        c_eut - c_pt - (1.0 + s.margin) * s.loss * (curve(c_pt) - curve(c_eut));
    rep.equal_total_cost = std::fabs(rep.equal_cost_residual) <=
                           kEqualCostRelTolerance * std::max(rep.pt->c_tot, rep.eut->c_tot);

    if (!(pt.beta < 1.0)) {
        rep.note = "theorems need beta < 1";
        return rep;
    }
    rep.theorem1 = c_pt < c_eut ? Verdict::Pass : Verdict::Fail;
    rep.theorem2 = rep.pt->c_i_star > rep.eut->c_i_star ? Verdict::Pass : Verdict::Fail;
    return rep;
}

// ---------------------------------------------------------------------------
// Sensitivity

struct NamedCurve {
    std::string name;
    RiskCurve curve;
};

struct SensitivityAxes {
    std::vector<double> wealth{5000.0, 10000.0, 20000.0};
    std::vector<double> loss_ratios{0.04, 0.1};
    std::vector<double> margins{0.0, 0.3};
    std::vector<double> coverage_options{0.0, 0.8, 1.0};
    // Stretch each curve's currency axis by L / reference_loss so that spend
    // stays commensurate with the loss.
    bool rescale_curves = true;
    double reference_loss = 1000.0;
};

struct SensitivityRow {
    std::string curve_name;
    double wealth;
    double loss;
    double margin;
    // sign of C_PT - C_EUT per coverage option (first EUT model), -1/0/+1
    std::vector<int> pt_minus_eut_sign;
    double pt_best_coverage;
    std::vector<double> eut_best_coverage;  // per EUT model
    // fair premiums: EUT rankings are reported but not judged
    bool eut_ranking_degenerate;
    bool pt_prefers_full;
    bool eut_prefers_none;  // all EUT models (ignored when degenerate)
    Verdict theorem1;
    Verdict theorem2;
    bool findings_hold;
};

inline int sign_with_tolerance(double x, double tol = kTrendTolerance) {
    if (x > tol) return 1;
    if (x < -tol) return -1;
    return 0;
}

inline Verdict merge(Verdict a, Verdict b) {
    if (a == Verdict::Fail || b == Verdict::Fail) return Verdict::Fail;
    if (a == Verdict::Pass || b == Verdict::Pass) return Verdict::Pass;
    return Verdict::NotApplicable;
}

/// Re-solves every (curve, W, L/W, q) combination and records whether the
/// qualitative findings survive: PT ranks full insurance first, EUT ranks no
/// insurance first, and at full insurance C_PT < C_EUT with a larger PT
/// premium.
inline std::vector<SensitivityRow> sensitivity_sweep(std::span<const NamedCurve> curves, const PTParams& pt,
                                                     std::span<const EUTParams> euts,
                                                     const SensitivityAxes& axes = {},
                                                     const OptimizerOptions& opt = {}) {
    if (euts.empty()) throw UsageError("sensitivity sweep needs at least one EUT model");
    for (double w : axes.wealth) {
        if (!(w > 0.0)) throw UsageError("wealth values must be positive");
    }
    for (double r : axes.loss_ratios) {
        if (!(r > 0.0 && r <= 1.0)) throw UsageError("loss ratios must lie in (0, 1]");
    }
    std::vector<SensitivityRow> rows;
    for (const auto& nc : curves) {
        for (double w : axes.wealth) {
            for (double ratio : axes.loss_ratios) {
                for (double q : axes.margins) {
                    const Scenario base{w, ratio * w, q, 0.0};
                    const RiskCurve curve =
                        axes.rescale_curves ? nc.curve.rescaled(base.loss / axes.reference_loss) : nc.curve;
                    SensitivityRow row{nc.name, w, base.loss, q, {}, 0.0, {}, q == 0.0, false, true,
                                       Verdict::NotApplicable, Verdict::NotApplicable, false};

                    const EUTParams eut0{euts.front().r, w};
                    for (double i_r : axes.coverage_options) {
                        const Scenario s = base.with_coverage(i_r);
                        const auto a = optimize_allocation(s, curve, pt, opt);
                        const auto b = optimize_allocation(s, curve, eut0, opt);
                        row.pt_minus_eut_sign.push_back(sign_with_tolerance(a.c_cs_star - b.c_cs_star));
                    }

                    const auto pt_rank = rank_insurance_options(base, curve, pt, axes.coverage_options, opt);
                    row.pt_best_coverage = pt_rank.front().coverage;
                    row.pt_prefers_full = row.pt_best_coverage == 1.0;
                    for (const auto& e : euts) {
                        const auto er = rank_insurance_options(base, curve, EUTParams{e.r, w}, axes.coverage_options, opt);
                        row.eut_best_coverage.push_back(er.front().coverage);
                        if (er.front().coverage != 0.0) row.eut_prefers_none = false;
                    }

                    // a verdict fails if it fails against any EUT model
                    for (const auto& e : euts) {
                        const auto th = verify_theorems(curve, base, pt, EUTParams{e.r, w}, opt);
                        row.theorem1 = merge(row.theorem1, th.theorem1);
                        row.theorem2 = merge(row.theorem2, th.theorem2);
                    }
                    row.findings_hold = row.pt_prefers_full &&
                                        (row.eut_ranking_degenerate || row.eut_prefers_none) &&
                                        row.theorem1 != Verdict::Fail && row.theorem2 != Verdict::Fail;
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    return rows;
}

}  // namespace cyberalloc
