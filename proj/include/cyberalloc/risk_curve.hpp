#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "cyberalloc/errors.hpp"

namespace cyberalloc {

inline constexpr double kDefaultDomainMax = 1000.0;

// pi(c) = baseline * exp(-decay_rate * c)
struct ExponentialShape {
    double baseline;
    double decay_rate;
};

// One piece of a stepped curve, active on [start, next start).
// Inside the piece pi(c) = baseline * exp(-decay_rate * (c - start));
// decay_rate == 0 gives a plateau.
struct CurveSegment {
    double start;
    double baseline;
    double decay_rate;
};

struct SteppedShape {
    std::vector<CurveSegment> segments;
};

struct Knot {
    double c;
    double p;
};

// Piecewise-linear interpolation between knots, flat after the last one.
struct TabulatedShape {
    std::vector<Knot> knots;
};

/// Probability of at least one successful attack as a function of the
/// controls spend. Immutable after construction.
///
/// Construction only checks that the description is well formed (finite
/// numbers, probabilities in [0,1], ordered breakpoints). Whether the curve
/// satisfies the modelling assumptions (monotone, strictly positive,
/// baseline below one) is reported by validate_curve().
class RiskCurve {
public:
    using Shape = std::variant<ExponentialShape, SteppedShape, TabulatedShape>;

    static RiskCurve exponential(double baseline, double decay_rate,
                                 double domain_max = kDefaultDomainMax) {
        require_probability(baseline, "exponential baseline");
        if (!(decay_rate > 0.0) || !std::isfinite(decay_rate)) {
            throw DomainError("exponential decay rate must be positive and finite");
        }
        return RiskCurve(ExponentialShape{baseline, decay_rate}, domain_max);
    }

    static RiskCurve stepped(std::vector<CurveSegment> segments,
                             double domain_max = kDefaultDomainMax) {
        if (segments.empty()) {
            throw DomainError("stepped curve needs at least one segment");
        }
        if (segments.front().start != 0.0) {
            throw DomainError("first segment of a stepped curve must start at 0");
        }
        for (std::size_t i = 0; i < segments.size(); ++i) {
            const auto& s = segments[i];
            if (!std::isfinite(s.start)) throw DomainError("segment start must be finite");
            if (i > 0 && !(s.start > segments[i - 1].start)) {
                throw DomainError("segment starts must be strictly increasing");
            }
            require_probability(s.baseline, "segment baseline");
            if (!(s.decay_rate >= 0.0) || !std::isfinite(s.decay_rate)) {
                throw DomainError("segment decay rate must be non-negative and finite");
            }
        }
        return RiskCurve(SteppedShape{std::move(segments)}, domain_max);
    }

    // A curve that spending cannot move.
    static RiskCurve constant(double p, double domain_max = kDefaultDomainMax) {
        return stepped({CurveSegment{0.0, p, 0.0}}, domain_max);
    }

    // domain_max defaults to the last knot.
    static RiskCurve tabulated(std::vector<Knot> knots,
                               std::optional<double> domain_max = std::nullopt) {
        if (knots.size() < 2) throw DomainError("tabulated curve needs at least two knots");
        if (knots.front().c != 0.0) throw DomainError("first knot must sit at c = 0");
        for (std::size_t i = 0; i < knots.size(); ++i) {
            if (!std::isfinite(knots[i].c)) throw DomainError("knot position must be finite");
            if (i > 0 && !(knots[i].c > knots[i - 1].c)) {
                throw DomainError("knot positions must be strictly increasing");
            }
            require_probability(knots[i].p, "knot probability");
        }
        const double dmax = domain_max.value_or(knots.back().c);
        return RiskCurve(TabulatedShape{std::move(knots)}, dmax);
    }

    /// pi(c). Negative spend is a domain error; beyond domain_max the curve
    /// is held at pi(domain_max).
    double operator()(double c) const {
        if (!(c >= 0.0)) throw DomainError("controls spend must be non-negative");
        c = std::min(c, domain_max_);
        return std::visit([c](const auto& s) { return evaluate(s, c); }, shape_);
    }

    /// Limit of pi from the left at c (equals pi(c) where the curve is
    /// continuous). At c = 0 returns pi(0).
    double left_limit(double c) const {
        if (!(c >= 0.0)) throw DomainError("controls spend must be non-negative");
        if (c == 0.0) return (*this)(0.0);
        if (c > domain_max_) return (*this)(domain_max_);
        if (const auto* s = std::get_if<SteppedShape>(&shape_)) {
            auto it = std::lower_bound(s->segments.begin(), s->segments.end(), c,
                                       [](const CurveSegment& seg, double x) { return seg.start < x; });
            const auto& seg = *std::prev(it);
            return seg.baseline * std::exp(-seg.decay_rate * (c - seg.start));
        }
        return (*this)(c);
    }

    /// Points in (0, domain_max] where the curve is not smooth: segment
    /// starts, interior knots, and domain_max itself (the curve goes flat
    /// there). Sorted, unique.
    std::vector<double> breakpoints() const {
        std::vector<double> out;
        if (const auto* s = std::get_if<SteppedShape>(&shape_)) {
            for (const auto& seg : s->segments) {
                if (seg.start > 0.0 && seg.start < domain_max_) out.push_back(seg.start);
            }
        } else if (const auto* t = std::get_if<TabulatedShape>(&shape_)) {
            for (const auto& k : t->knots) {
                if (k.c > 0.0 && k.c < domain_max_) out.push_back(k.c);
            }
        }
        out.push_back(domain_max_);
        return out;
    }

    /// Segment starts of a stepped curve inside the domain (excluding 0).
    std::vector<double> step_points() const {
        std::vector<double> out;
        if (const auto* s = std::get_if<SteppedShape>(&shape_)) {
            for (const auto& seg : s->segments) {
                if (seg.start > 0.0 && seg.start <= domain_max_) out.push_back(seg.start);
            }
        }
        return out;
    }

    /// Same curve with the currency axis stretched by factor:
    /// result(c) == (*this)(c / factor).
    RiskCurve rescaled(double factor) const {
        if (!(factor > 0.0) || !std::isfinite(factor)) {
            throw DomainError("rescale factor must be positive and finite");
        }
        const double dmax = domain_max_ * factor;
        return std::visit(
            [&](const auto& s) -> RiskCurve {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, ExponentialShape>) {
                    return exponential(s.baseline, s.decay_rate / factor, dmax);
                } else if constexpr (std::is_same_v<T, SteppedShape>) {
                    auto segs = s.segments;
                    for (auto& seg : segs) {
                        seg.start *= factor;
                        seg.decay_rate /= factor;
                    }
                    return stepped(std::move(segs), dmax);
                } else {
                    auto knots = s.knots;
                    for (auto& k : knots) k.c *= factor;
                    return tabulated(std::move(knots), dmax);
                }
            },
            shape_);
    }

    double domain_max() const { return domain_max_; }
    double baseline() const { return (*this)(0.0); }
    const Shape& shape() const { return shape_; }

    std::string_view kind() const {
        switch (shape_.index()) {
            case 0: return "exponential";
            case 1: return "stepped";
            default: return "tabulated";
        }
    }

private:
    RiskCurve(Shape shape, double domain_max) : shape_(std::move(shape)), domain_max_(domain_max) {
        if (!(domain_max > 0.0) || !std::isfinite(domain_max)) {
            throw DomainError("domain_max must be positive and finite");
        }
    }

    static void require_probability(double p, const char* what) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw DomainError(std::string(what) + " must lie in [0, 1]");
        }
    }

    static double evaluate(const ExponentialShape& s, double c) {
        return s.baseline * std::exp(-s.decay_rate * c);
    }

    static double evaluate(const SteppedShape& s, double c) {
        // right-continuous: a breakpoint belongs to the segment it starts
        auto it = std::upper_bound(s.segments.begin(), s.segments.end(), c,
                                   [](double x, const CurveSegment& seg) { return x < seg.start; });
        const auto& seg = *std::prev(it);
        return seg.baseline * std::exp(-seg.decay_rate * (c - seg.start));
    }

    static double evaluate(const TabulatedShape& s, double c) {
        const auto& k = s.knots;
        if (c >= k.back().c) return k.back().p;
        auto it = std::upper_bound(k.begin(), k.end(), c,
                                   [](double x, const Knot& knot) { return x < knot.c; });
        const Knot& hi = *it;
        const Knot& lo = *std::prev(it);
        const double t = (c - lo.c) / (hi.c - lo.c);
        return lo.p + t * (hi.p - lo.p);
    }

    Shape shape_;
    double domain_max_;
};

inline double eval_prob(const RiskCurve& curve, double c_cs) { return curve(c_cs); }

// ---------------------------------------------------------------------------
// Validation

struct CurveValidationReport {
    bool monotone = false;
    bool strictly_positive = false;
    bool baseline_below_one = false;
    double max_probability = 0.0;
    // 0 < pi(c) <= 0.5 everywhere, needed by the full-insurance theorems.
    bool theorem_precondition_ok = false;

    // Monotone, positive and below one at zero spend.
    bool satisfies_assumptions() const { return monotone && strictly_positive && baseline_below_one; }

    std::vector<std::string> violations() const {
        std::vector<std::string> out;
        if (!monotone) out.emplace_back("curve is not monotone non-increasing");
        if (!strictly_positive) out.emplace_back("curve reaches zero probability");
        if (!baseline_below_one) out.emplace_back("baseline probability is not below 1");
        return out;
    }
};

/// Checks the modelling assumptions on a uniform grid of sample_resolution
/// points over [0, domain_max] plus every breakpoint (both the left limit
/// and the value at the point).
inline CurveValidationReport validate_curve(const RiskCurve& curve, std::size_t sample_resolution = 1001) {
    if (sample_resolution < 2) throw DomainError("sample resolution must be at least 2");

    // (c, is_value, p): a left limit sorts before the value at the same c
    struct Sample {
        double c;
        int is_value;
        double p;
    };
    std::vector<Sample> all;
    const double dmax = curve.domain_max();
    for (std::size_t i = 0; i < sample_resolution; ++i) {
        const double c = dmax * static_cast<double>(i) / static_cast<double>(sample_resolution - 1);
        all.push_back({c, 1, curve(c)});
    }
    for (double b : curve.breakpoints()) {
        all.push_back({b, 0, curve.left_limit(b)});
        all.push_back({b, 1, curve(b)});
    }
    if (const auto* t = std::get_if<TabulatedShape>(&curve.shape())) {
        for (const auto& k : t->knots) {
            if (k.c <= dmax) all.push_back({k.c, 1, k.p});
        }
    }
    std::stable_sort(all.begin(), all.end(), [](const Sample& a, const Sample& b) {
        return a.c < b.c || (a.c == b.c && a.is_value < b.is_value);
    });

    CurveValidationReport r;
    r.monotone = true;
    r.strictly_positive = true;
    r.max_probability = 0.0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        const double p = all[i].p;
        r.max_probability = std::max(r.max_probability, p);
        if (i > 0) {
            const double prev = all[i - 1].p;
            if (p > prev + 1e-15 * prev) r.monotone = false;
        }
    }
    // Positivity is read off the parameters: a steep exponential underflows
    // to 0.0 in floating point long before domain_max without ever being 0.
    r.strictly_positive = std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ExponentialShape>) {
                return s.baseline > 0.0;
            } else if constexpr (std::is_same_v<T, SteppedShape>) {
                return std::all_of(s.segments.begin(), s.segments.end(),
                                   [](const CurveSegment& g) { return g.baseline > 0.0; });
            } else {
                return std::all_of(s.knots.begin(), s.knots.end(), [](const Knot& k) { return k.p > 0.0; });
            }
        },
        curve.shape());
    r.baseline_below_one = curve(0.0) < 1.0;
    r.theorem_precondition_ok = r.strictly_positive && r.max_probability <= 0.5;
    return r;
}

/// Decay rate of the exponential through (0, baseline) and (anchor_c, anchor_prob).
inline double calibrate_exponential(double baseline, double anchor_c, double anchor_prob) {
    if (!(0.0 < anchor_prob && anchor_prob < baseline && baseline < 1.0)) {
        throw DomainError("calibration needs 0 < anchor_prob < baseline < 1");
    }
    if (!(anchor_c > 0.0) || !std::isfinite(anchor_c)) {
        throw DomainError("calibration anchor spend must be positive");
    }
    return std::log(baseline / anchor_prob) / anchor_c;
}

// ---------------------------------------------------------------------------
// Templates
//
// Parameters are back-solved from the full-insurance EUT rows of the
// reference tables (W = 10000, L = 1000, q = 0.3): at an interior optimum
// on an exponential piece the first-order condition gives
// C_i = (1 + q) * pi * L, so each (C_cs, C_i) row pins one anchor point.

namespace templates {

inline constexpr double kReferenceLoss = 1000.0;
inline constexpr double kReferenceLoading = 1.3;

// pi1 anchor: C_cs = 14.82, C_i = 3.33
inline double slow_decay_rate() { return calibrate_exponential(0.2, 14.82, 3.33 / (kReferenceLoading * kReferenceLoss)); }
// pi2 anchor: C_cs = 6.20, C_i = 1.11
inline double rapid_decay_rate() { return calibrate_exponential(0.2, 6.20, 1.11 / (kReferenceLoading * kReferenceLoss)); }

inline RiskCurve pi1() { return RiskCurve::exponential(0.2, slow_decay_rate()); }
inline RiskCurve pi2() { return RiskCurve::exponential(0.2, rapid_decay_rate()); }
inline RiskCurve pi3() { return RiskCurve::exponential(0.3, slow_decay_rate()); }

// Decline, plateau on [6, 12), decline again. The tail rate 0.16 comes from
// the gap between the no-insurance and full-insurance EUT optima
// (ln(1.3) / (23.85 - 22.21)); the tail passes through C_cs = 23.85,
// C_i = 6.25. The first piece joins 0.2 to the plateau continuously.
inline RiskCurve pi4() {
    constexpr double plateau_start = 6.0;
    constexpr double tail_start = 12.0;
    constexpr double tail_rate = 0.16;
    const double anchor = 6.25 / (kReferenceLoading * kReferenceLoss);
    const double plateau = anchor * std::exp(tail_rate * (23.85 - tail_start));
    const double head_rate = std::log(0.2 / plateau) / plateau_start;
    return RiskCurve::stepped({{0.0, 0.2, head_rate},
                               {plateau_start, plateau, 0.0},
                               {tail_start, plateau, tail_rate}});
}

// Three plateaus with drops at 15 and 25. The last level is pinned by
// C_i = 17.06 at C_cs = 25; the middle level is chosen so that only strong
// diminishing sensitivity stops at 15 without insurance.
inline RiskCurve pi5() {
    return RiskCurve::stepped({{0.0, 0.2, 0.0},
                               {15.0, 0.025, 0.0},
                               {25.0, 17.06 / (kReferenceLoading * kReferenceLoss), 0.0}});
}

inline const std::vector<std::string>& names() {
    static const std::vector<std::string> n{"pi1", "pi2", "pi3", "pi4", "pi5"};
    return n;
}

inline bool is_template(std::string_view name) {
    const auto& n = names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

}  // namespace templates

/// One of the five reference curves by name ("pi1" ... "pi5").
inline RiskCurve risk_curve_template(std::string_view name) {
    if (name == "pi1") return templates::pi1();
    if (name == "pi2") return templates::pi2();
    if (name == "pi3") return templates::pi3();
    if (name == "pi4") return templates::pi4();
    if (name == "pi5") return templates::pi5();
    throw LookupError("unknown risk curve template '" + std::string(name) + "'");
}

}  // namespace cyberalloc
