#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cyberalloc/errors.hpp"
#include "cyberalloc/format.hpp"
#include "cyberalloc/objectives.hpp"
#include "cyberalloc/preferences.hpp"
#include "cyberalloc/risk_curve.hpp"

namespace cyberalloc {

// ---------------------------------------------------------------------------
// Scalar maximisation

struct GoldenSectionResult {
    double x;
    double value;
    std::size_t iterations;
};

/// Golden-section search for the maximum of f on [a, b]; assumes f is
/// unimodal there. Stops once the bracket is narrower than tolerance.
template <class F>
GoldenSectionResult golden_section_maximize(F&& f, double a, double b, double tolerance) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    std::size_t it = 0;
    while (b - a > tolerance) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        ++it;
    }
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (fm >= fc && fm >= fd) return {mid, fm, it};
    return fc >= fd ? GoldenSectionResult{c, fc, it} : GoldenSectionResult{d, fd, it};
}

struct GridSearchOptions {
    std::size_t grid_points = 10000;
    double x_tolerance = 1e-6;
    // objective values closer than this are ties; the smaller x wins
    double tie_tolerance = 1e-10;
};

struct SolverDiagnostics {
    std::size_t grid_points = 0;
    std::size_t refinement_iterations = 0;
    bool tie_detected = false;
};

struct ScalarMaximum {
    double x;
    double value;
    SolverDiagnostics diagnostics;
};

/// Global maximum of a piecewise-smooth f on [lo, hi].
///
/// A uniform grid is evaluated together with every breakpoint and the float
/// just below it, so both sides of a jump are probed. The best candidate is
/// then refined by golden-section search within its neighbouring grid cells,
/// never across a breakpoint. f must be right-continuous at breakpoints.
template <class F>
ScalarMaximum maximize_piecewise(F&& f, double lo, double hi, std::span<const double> breakpoints,
                                 const GridSearchOptions& opt = {}) {
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw ConfigError("search interval must be finite with lo <= hi");
    }
    if (opt.grid_points < 2) throw ConfigError("grid needs at least two points");

    std::vector<double> cuts;
    for (double b : breakpoints) {
        if (b > lo && b <= hi) cuts.push_back(b);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<double> xs;
    xs.reserve(opt.grid_points + 2 * cuts.size());
    const double n = static_cast<double>(opt.grid_points - 1);
    for (std::size_t i = 0; i < opt.grid_points; ++i) {
        xs.push_back(lo + (hi - lo) * (static_cast<double>(i) / n));
    }
    xs.back() = hi;
    for (double b : cuts) {
        xs.push_back(b);
        const double below = std::nextafter(b, lo);
        if (below >= lo) xs.push_back(below);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    // smooth piece index: number of cuts <= x
    auto piece_of = [&](double x) {
        return static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), x) - cuts.begin());
    };

    std::vector<double> fs(xs.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        fs[i] = f(xs[i]);
        if (fs[i] > fs[best]) best = i;
    }

    ScalarMaximum result{xs[best], fs[best], {}};
    result.diagnostics.grid_points = xs.size();

    // refine inside the neighbouring cells of candidate i, within its piece
    auto refine = [&](std::size_t i) {
        const std::size_t piece = piece_of(xs[i]);
        double a = xs[i];
        double b = xs[i];
        if (i > 0 && piece_of(xs[i - 1]) == piece) a = xs[i - 1];
        if (i + 1 < xs.size() && piece_of(xs[i + 1]) == piece) b = xs[i + 1];
        ScalarMaximum r{xs[i], fs[i], {}};
        if (a < b) {
            const auto g = golden_section_maximize(f, a, b, opt.x_tolerance);
            result.diagnostics.refinement_iterations += g.iterations;
            if (g.value > r.value) {
                r.x = g.x;
                r.value = g.value;
            }
        }
        return std::pair{r, a};
    };

    auto [top, bracket_lo] = refine(best);
    const double band = top.value - opt.tie_tolerance;
    std::size_t home = best;

    // A different candidate left of the winning bracket that is equally good
    // (within tolerance) takes precedence: never spend more for equal value.
    for (std::size_t i = 0; i < xs.size() && xs[i] < bracket_lo; ++i) {
        if (fs[i] >= band) {
            result.diagnostics.tie_detected = true;
            home = i;
            break;
        }
    }
    if (home != best) {
        top = refine(home).first;
    } else {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (xs[i] > top.x + (hi - lo) / n && fs[i] >= band) {
                result.diagnostics.tie_detected = true;
                break;
            }
        }
    }

    // On a genuine tie (a flat stretch), slide to the smallest x in the same
    // cell still within the band, by bisection against the left neighbour.
    // A smooth peak is left where refinement put it.
    if (result.diagnostics.tie_detected && home > 0 && piece_of(xs[home - 1]) == piece_of(top.x) && fs[home - 1] < band) {
        double a = xs[home - 1];
        double b = top.x;
        while (b - a > opt.x_tolerance) {
            const double m = 0.5 * (a + b);
            if (f(m) >= band) b = m;
            else a = m;
        }
        if (b < top.x) top.x = b;
    }
    result.x = top.x;
    result.value = f(top.x);
    return result;
}

// ---------------------------------------------------------------------------
// Allocation

using Model = std::variant<PTParams, EUTParams>;

enum class ModelTag { PT, EUT };

inline const char* to_string(ModelTag t) { return t == ModelTag::PT ? "PT" : "EUT"; }

inline ModelTag tag_of(const Model& m) { return std::holds_alternative<PTParams>(m) ? ModelTag::PT : ModelTag::EUT; }

/// Short parameter label, e.g. "alpha=0.88 beta=0.65 lambda=2.25" or "r=1".
inline std::string describe(const Model& m) {
    if (const auto* pt = std::get_if<PTParams>(&m)) {
        return "alpha=" + format_number(pt->alpha) + " beta=" + format_number(pt->beta) +
               " lambda=" + format_number(pt->lambda);
    }
    return "r=" + format_number(std::get<EUTParams>(m).r);
}

struct AllocationResult {
    double c_cs_star = 0.0;
    double c_i_star = 0.0;
    double c_tot = 0.0;
    double residual_prob = 0.0;
    double objective_value = 0.0;
    ModelTag model_tag = ModelTag::PT;
    Scenario scenario{};
    SolverDiagnostics diagnostics{};
};

struct OptimizerOptions {
    // Upper end of the search domain; <= 0 means "use the scenario loss".
    double c_max = 0.0;
    GridSearchOptions grid{};
};

/// Objective maximised by the chosen model: V for PT, E[U] for EUT. The
/// risk-neutral case uses the closed form.
inline double objective(const Scenario& s, const RiskCurve& curve, const Model& model, double c_cs) {
    if (const auto* pt = std::get_if<PTParams>(&model)) return pt_overall_value(s, curve, *pt, c_cs);
    const auto& eut = std::get<EUTParams>(model);
    if (eut.risk_neutral()) return risk_neutral_expected_utility(s, curve, c_cs);
    return eut_expected_utility(s, curve, eut, c_cs);
}

inline void validate_model(const Model& model) {
    std::visit([](const auto& p) { p.validate(); }, model);
}

/// Controls spend maximising the model's objective, with the implied
/// premium and totals. Ties resolve to the smallest spend.
inline AllocationResult optimize_allocation(const Scenario& s, const RiskCurve& curve, const Model& model,
                                            const OptimizerOptions& opt = {}) {
    s.validate();
    validate_model(model);
    const double c_max = opt.c_max > 0.0 ? opt.c_max : s.loss;
    if (!(c_max > 0.0) || !std::isfinite(c_max)) {
        throw ConfigError("search domain upper bound must be positive (scenario loss is zero?)");
    }
    // worst case outlay anywhere on the domain, premium bounded by pi <= 1
    if (c_max + (1.0 - s.coverage) * s.loss + (1.0 + s.margin) * s.coverage * s.loss > s.wealth) {
        throw ConfigError("search domain allows outlays exceeding wealth; lower c_max");
    }

    const std::vector<double> bps = curve.breakpoints();
    const auto f = [&](double c) { return objective(s, curve, model, c); };
    const ScalarMaximum m = maximize_piecewise(f, 0.0, c_max, bps, opt.grid);

    AllocationResult r;
    r.c_cs_star = m.x;
    r.residual_prob = curve(m.x);
    r.c_i_star = premium(s, r.residual_prob);
    r.c_tot = r.c_cs_star + r.c_i_star;
    r.objective_value = m.value;
    r.model_tag = tag_of(model);
    r.scenario = s;
    r.diagnostics = m.diagnostics;
    return r;
}

struct RankedOption {
    double coverage;
    AllocationResult allocation;
};

/// Solves every coverage ratio and orders them by optimal objective,
/// best first. Equal objectives (relative 1e-10) put the larger ratio first.
inline std::vector<RankedOption> rank_insurance_options(const Scenario& base, const RiskCurve& curve,
                                                        const Model& model, std::span<const double> options,
                                                        const OptimizerOptions& opt = {}) {
    if (options.empty()) throw ConfigError("at least one coverage option is required");
    std::vector<RankedOption> out;
    out.reserve(options.size());
    for (double i_r : options) {
        if (!(i_r >= 0.0 && i_r <= 1.0)) throw DomainError("coverage ratio must lie in [0, 1]");
        out.push_back({i_r, optimize_allocation(base.with_coverage(i_r), curve, model, opt)});
    }
    std::stable_sort(out.begin(), out.end(), [](const RankedOption& a, const RankedOption& b) {
        const double va = a.allocation.objective_value;
        const double vb = b.allocation.objective_value;
        const double scale = std::max({1.0, std::fabs(va), std::fabs(vb)});
        if (std::fabs(va - vb) <= 1e-10 * scale) return a.coverage > b.coverage;
        return va > vb;
    });
    return out;
}

/// True when every option's optimal objective is the same (relative 1e-10),
/// e.g. a risk-neutral buyer facing fair premiums.
inline bool ranking_is_degenerate(std::span<const RankedOption> ranked) {
    if (ranked.size() < 2) return false;
    const double v0 = ranked.front().allocation.objective_value;
    return std::all_of(ranked.begin(), ranked.end(), [v0](const RankedOption& o) {
        const double v = o.allocation.objective_value;
        return std::fabs(v - v0) <= 1e-10 * std::max({1.0, std::fabs(v), std::fabs(v0)});
    });
}

}  // namespace cyberalloc
