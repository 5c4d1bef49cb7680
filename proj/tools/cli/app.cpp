#include "cli/app.hpp"

#include <CLI11.hpp>

#include <climits>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace cyberalloc::cli {

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
constexpr int kDecimalsUnset = INT_MIN;

bool given(double x) { return !std::isnan(x); }

// Raw flag values; NaN / empty / INT_MIN mean "not on the command line".
struct Flags {
    std::string scenario;
    std::string curve;
    std::vector<std::string> models;
    double alpha = kUnset;
    double beta = kUnset;
    double lambda = kUnset;
    std::vector<double> r;
    std::vector<double> ir;
    double q = kUnset;
    double wealth = kUnset;
    double loss = kUnset;
    std::string out;
    std::string format;
    int decimals = kDecimalsUnset;

    // subcommand specific
    std::size_t resolution = 1001;
    std::string axis;
    std::vector<double> values;
    bool sensitivity = false;
    double cost_fraction = kDefaultBespokeCostFraction;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--scenario", f.scenario, "Scenario config file");
    cmd->add_option("--curve", f.curve, "Risk curve file or template name (pi1..pi5)");
    cmd->add_option("--model", f.models, "Model family, repeatable")->check(CLI::IsMember({"pt", "eut"}));
    cmd->add_option("--alpha", f.alpha, "PT diminishing sensitivity");
    cmd->add_option("--beta", f.beta, "PT probability weighting");
    cmd->add_option("--lambda", f.lambda, "PT loss aversion");
    cmd->add_option("--r", f.r, "EUT CRRA exponent, repeatable");
    cmd->add_option("--ir", f.ir, "Coverage ratio, repeatable");
    cmd->add_option("--q", f.q, "Insurer profit margin");
    cmd->add_option("--wealth", f.wealth, "Total wealth W");
    cmd->add_option("--loss", f.loss, "Loss L if an attack succeeds");
    cmd->add_option("--out", f.out, "Write the report here instead of stdout");
    cmd->add_option("--format", f.format, "csv or markdown");
    cmd->add_option("--decimals", f.decimals, "Decimals in the report (-1: shortest exact)");
}

// Which model families the command line asks for, if any.
std::vector<Model> models_from_flags(const Flags& f) {
    const bool pt_tuned = given(f.alpha) || given(f.beta) || given(f.lambda);
    std::vector<std::string> families = f.models;
    if (families.empty()) {
        if (pt_tuned) families.emplace_back("pt");
        if (!f.r.empty()) families.emplace_back("eut");
    }
    std::vector<Model> out;
    for (const auto& fam : families) {
        if (fam == "pt") {
            PTParams p;
            if (given(f.alpha)) p.alpha = f.alpha;
            if (given(f.beta)) p.beta = f.beta;
            if (given(f.lambda)) p.lambda = f.lambda;
            out.emplace_back(p);
        } else if (f.r.empty()) {
            out.emplace_back(EUTParams{});
        } else {
            for (double r : f.r) out.emplace_back(EUTParams{r});
        }
    }
    return out;
}

std::vector<Model> default_models() { return {PTParams{}, EUTParams{0.88}, EUTParams{1.0}}; }

RunConfig build_config(const Flags& f, std::vector<double> default_coverage) {
    RunConfig cfg;
    if (!f.scenario.empty()) load_scenario_file(f.scenario, cfg);

    if (given(f.wealth)) cfg.scenario.wealth = f.wealth;
    if (given(f.loss)) cfg.scenario.loss = f.loss;
    if (given(f.q)) cfg.scenario.margin = f.q;

    if (!f.curve.empty()) {
        cfg.curve = resolve_curve(f.curve);
        cfg.curve_label = templates::is_template(f.curve) ? f.curve : std::filesystem::path(f.curve).stem().string();
    }

    auto flagged = models_from_flags(f);
    if (!flagged.empty()) {
        cfg.models = std::move(flagged);
        cfg.models_given = true;
    } else if (!cfg.models_given) {
        cfg.models = default_models();
    }
    for (const auto& m : cfg.models) {
        try {
            validate_model(m);
        } catch (const DomainError& e) {
            throw ConfigError(std::string("invalid model: ") + e.what());
        }
    }

    if (!f.ir.empty()) {
        cfg.coverage_options = f.ir;
        cfg.coverage_given = true;
    } else if (!cfg.coverage_given) {
        cfg.coverage_options = std::move(default_coverage);
    }

    if (!f.format.empty()) cfg.format = parse_report_format(f.format);
    if (f.decimals != kDecimalsUnset) cfg.decimals = f.decimals;
    if (!f.out.empty()) cfg.out_path = f.out;
    cfg.validate();
    return cfg;
}

struct ValidationFailure {
    std::vector<std::string> violations;
};

const RiskCurve& require_curve(const RunConfig& cfg) {
    if (!cfg.curve) throw ConfigError("no risk curve given (use --curve or a 'curve' entry in the scenario)");
    const auto rep = validate_curve(*cfg.curve);
    if (!rep.satisfies_assumptions()) throw ValidationFailure{rep.violations()};
    return *cfg.curve;
}

std::vector<PTParams> pt_models(const RunConfig& cfg) {
    std::vector<PTParams> out;
    for (const auto& m : cfg.models) {
        if (const auto* p = std::get_if<PTParams>(&m)) out.push_back(*p);
    }
    return out;
}

std::vector<EUTParams> eut_models(const RunConfig& cfg) {
    std::vector<EUTParams> out;
    for (const auto& m : cfg.models) {
        if (const auto* e = std::get_if<EUTParams>(&m)) out.push_back(*e);
    }
    return out;
}

// Number formatting for one report.
struct Fmt {
    int decimals;
    std::string num(double x) const { return format_number(x, decimals); }
    // probabilities are small; give them four more places
    std::string prob(double x) const { return format_number(x, decimals < 0 ? -1 : decimals + 4); }
    static std::string flag(bool b) { return b ? "true" : "false"; }
};

void emit(const Table& t, const RunConfig& cfg, std::ostream& out) {
    const std::string text = render(t, cfg.format);
    if (!cfg.out_path) {
        out << text;
        return;
    }
    std::ofstream file(*cfg.out_path, std::ios::binary);
    if (!file) throw ConfigError("cannot write report to '" + *cfg.out_path + "'");
    file << text;
    if (!file) throw ConfigError("failed writing report to '" + *cfg.out_path + "'");
}

// ---------------------------------------------------------------------------
// Subcommands

Table run_solve(const RunConfig& cfg) {
    const RiskCurve& curve = require_curve(cfg);
    const Fmt fmt{cfg.decimals};
    Table t{{"curve", "model_tag", "params", "i_r", "c_cs", "c_i", "c_tot", "residual_prob", "objective"}, {}};
    for (const auto& m : cfg.models) {
        for (double i_r : cfg.coverage_options) {
            const auto a = optimize_allocation(cfg.scenario.with_coverage(i_r), curve, m);
            t.add_row({cfg.curve_label, to_string(a.model_tag), describe(m), format_number(i_r), fmt.num(a.c_cs_star),
                       fmt.num(a.c_i_star), fmt.num(a.c_tot), fmt.prob(a.residual_prob), fmt.num(a.objective_value)});
        }
    }
    return t;
}

Table run_compare(const RunConfig& cfg) {
    const RiskCurve& curve = require_curve(cfg);
    auto pts = pt_models(cfg);
    auto euts = eut_models(cfg);
    if (pts.empty()) pts.push_back(PTParams{});
    if (euts.empty()) euts.push_back(EUTParams{});
    const Fmt fmt{cfg.decimals};
    Table t{{"curve", "pt_params", "eut_params", "i_r", "c_cs_pt", "c_cs_eut", "c_tot_pt", "c_tot_eut",
             "overspend_pct", "risk_reduction_pct", "equal_total_cost"},
            {}};
    for (const auto& p : pts) {
        for (const auto& e : euts) {
            for (double i_r : cfg.coverage_options) {
                const Scenario s = cfg.scenario.with_coverage(i_r);
                const auto a = optimize_allocation(s, curve, p);
                const auto b = optimize_allocation(s, curve, e);
                const auto c = compare_models(a, b, curve);
                t.add_row({cfg.curve_label, describe(p), describe(e), format_number(i_r), fmt.num(a.c_cs_star),
                           fmt.num(b.c_cs_star), fmt.num(a.c_tot), fmt.num(b.c_tot), fmt.num(c.c_cs_overspend_pct),
                           fmt.num(c.risk_reduction_pct), Fmt::flag(c.equal_total_cost)});
            }
        }
    }
    return t;
}

Table run_rank(const RunConfig& cfg) {
    const RiskCurve& curve = require_curve(cfg);
    const Fmt fmt{cfg.decimals};
    Table t{{"curve", "model_tag", "params", "rank", "i_r", "c_cs", "c_tot", "objective", "degenerate"}, {}};
    for (const auto& m : cfg.models) {
        const auto ranked = rank_insurance_options(cfg.scenario, curve, m, cfg.coverage_options);
        const bool degenerate = ranking_is_degenerate(ranked);
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            const auto& a = ranked[i].allocation;
            t.add_row({cfg.curve_label, to_string(a.model_tag), describe(m), std::to_string(i + 1),
                       format_number(ranked[i].coverage), fmt.num(a.c_cs_star), fmt.num(a.c_tot),
                       // ranking is decided at full precision
                       format_number(a.objective_value), Fmt::flag(degenerate)});
        }
    }
    return t;
}

Table run_bespoke(const RunConfig& cfg, const Flags& f) {
    const RiskCurve& curve = require_curve(cfg);
    auto euts = eut_models(cfg);
    if (euts.empty()) euts.push_back(EUTParams{});
    const double lambda = given(f.lambda) ? f.lambda : PTParams{}.lambda;
    if (!(f.cost_fraction >= 0.0)) throw ConfigError("--cost-fraction must be non-negative");
    const auto grid = default_bespoke_grid();
    const Fmt fmt{cfg.decimals};
    Table t{{"curve", "eut_params", "i_r", "alpha", "beta", "c_cs", "c_tot", "c_tot_eut", "cost_gap",
             "risk_gain_pct"},
            {}};
    for (const auto& e : euts) {
        for (double i_r : cfg.coverage_options) {
            const Scenario s = cfg.scenario.with_coverage(i_r);
            const auto ref = optimize_allocation(s, curve, e);
            const auto best = bespoke_search(s, curve, ref, grid, grid, f.cost_fraction * ref.c_tot, lambda);
            if (!best) {
                t.add_row({cfg.curve_label, describe(e), format_number(i_r), "none", "none", "none", "none",
                           fmt.num(ref.c_tot), "none", "none"});
                continue;
            }
            t.add_row({cfg.curve_label, describe(e), format_number(i_r), format_number(best->alpha_star),
                       format_number(best->beta_star), fmt.num(best->allocation.c_cs_star),
                       fmt.num(best->allocation.c_tot), fmt.num(ref.c_tot), fmt.num(best->cost_gap),
                       fmt.num(best->risk_gain_pct)});
        }
    }
    return t;
}

SweepAxis parse_axis(const std::string& s) {
    if (s == "r") return SweepAxis::RiskAversion;
    if (s == "alpha") return SweepAxis::Alpha;
    if (s == "beta") return SweepAxis::Beta;
    throw ConfigError("--axis must be r, alpha or beta");
}

std::vector<double> default_sweep_values(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::RiskAversion: return {0.88, 1.0};
        case SweepAxis::Alpha: return {0.65, 0.88, 0.95};
        default: return {0.65, 1.0};
    }
}

Table run_sensitivity(const RunConfig& cfg) {
    std::vector<NamedCurve> curves;
    if (cfg.curve) {
        require_curve(cfg);
        curves.push_back({cfg.curve_label, *cfg.curve});
    } else {
        for (const char* n : {"pi1", "pi2", "pi3", "pi4"}) curves.push_back({n, risk_curve_template(n)});
    }
    const auto pts = pt_models(cfg);
    auto euts = eut_models(cfg);
    if (euts.empty()) euts = {EUTParams{0.88}, EUTParams{1.0}};
    SensitivityAxes axes;
    axes.coverage_options = cfg.coverage_options;
    const auto rows = sensitivity_sweep(curves, pts.empty() ? PTParams{} : pts.front(), euts, axes);

    Table t{{"curve", "wealth", "loss", "q", "pt_best_i_r", "eut_best_i_r", "eut_ranking_degenerate", "theorem1",
             "theorem2", "findings_hold"},
            {}};
    for (const auto& r : rows) {
        std::string eut_best;
        for (std::size_t i = 0; i < r.eut_best_coverage.size(); ++i) {
            if (i) eut_best += ' ';
            eut_best += format_number(r.eut_best_coverage[i]);
        }
        t.add_row({r.curve_name, format_number(r.wealth), format_number(r.loss), format_number(r.margin),
                   format_number(r.pt_best_coverage), eut_best, Fmt::flag(r.eut_ranking_degenerate),
                   to_string(r.theorem1), to_string(r.theorem2), Fmt::flag(r.findings_hold)});
    }
    return t;
}

Table run_sweep(const RunConfig& cfg, const Flags& f) {
    if (f.sensitivity) return run_sensitivity(cfg);
    if (f.axis.empty()) throw ConfigError("sweep needs --axis r|alpha|beta or --sensitivity");
    const RiskCurve& curve = require_curve(cfg);
    const SweepAxis axis = parse_axis(f.axis);
    std::vector<double> values = f.values.empty() ? default_sweep_values(axis) : f.values;
    if (!std::is_sorted(values.begin(), values.end())) throw ConfigError("--values must be sorted ascending");
    const auto pts = pt_models(cfg);
    const auto euts = eut_models(cfg);
    const PTParams base_pt = pts.empty() ? PTParams{} : pts.front();
    const EUTParams base_eut = euts.empty() ? EUTParams{} : euts.front();

    const Fmt fmt{cfg.decimals};
    Table t{{"curve", "axis", "i_r", "value", "c_cs", "c_i", "c_tot", "trend", "spread", "conjecture_holds"}, {}};
    for (double i_r : cfg.coverage_options) {
        SweepReport rep;
        try {
            rep = conjecture_sweep(cfg.scenario.with_coverage(i_r), curve, axis, values, base_pt, base_eut);
        } catch (const DomainError& e) {
            throw ConfigError(std::string("invalid sweep value: ") + e.what());
        }
        for (std::size_t i = 0; i < values.size(); ++i) {
            const auto& a = rep.results[i];
            t.add_row({cfg.curve_label, to_string(axis), format_number(i_r), format_number(values[i]),
                       fmt.num(a.c_cs_star), fmt.num(a.c_i_star), fmt.num(a.c_tot), to_string(rep.trend),
                       fmt.num(rep.spread), Fmt::flag(rep.conjecture_holds)});
        }
    }
    return t;
}

Table run_verify(const RunConfig& cfg) {
    if (!cfg.curve) throw ConfigError("no risk curve given (use --curve or a 'curve' entry in the scenario)");
    const RiskCurve& curve = *cfg.curve;
    const auto pts = pt_models(cfg);
    auto euts = eut_models(cfg);
    if (euts.empty()) euts = {EUTParams{0.88}, EUTParams{1.0}};
    const PTParams pt = pts.empty() ? PTParams{} : pts.front();
    const Fmt fmt{cfg.decimals};
    Table t{{"curve", "pt_params", "eut_params", "applicable", "proposition1", "theorem1", "theorem2", "c_cs_pt",
             "c_cs_eut", "c_i_pt", "c_i_eut", "equal_cost_residual", "note"},
            {}};
    for (const auto& e : euts) {
        const auto rep = verify_theorems(curve, cfg.scenario, pt, e);
        auto opt_num = [&](const std::optional<AllocationResult>& a, bool premium) {
            if (!a) return std::string("none");
            return fmt.num(premium ? a->c_i_star : a->c_cs_star);
        };
        t.add_row({cfg.curve_label, describe(pt), describe(e), Fmt::flag(rep.applicable), to_string(rep.proposition1),
                   to_string(rep.theorem1), to_string(rep.theorem2), opt_num(rep.pt, false),
                   opt_num(rep.eut, false), opt_num(rep.pt, true), opt_num(rep.eut, true),
                   rep.applicable ? format_number(rep.equal_cost_residual, cfg.decimals < 0 ? -1 : cfg.decimals + 4)
                                  : "none",
                   rep.note});
    }
    return t;
}

Table run_validate(const RunConfig& cfg) {
    if (!cfg.curve) throw ConfigError("no risk curve given (use --curve or a 'curve' entry in the scenario)");
    const auto rep = validate_curve(*cfg.curve);
    Table t{{"check", "result"}, {}};
    t.add_row({"monotone_non_increasing", Fmt::flag(rep.monotone)});
    t.add_row({"strictly_positive", Fmt::flag(rep.strictly_positive)});
    t.add_row({"baseline_below_one", Fmt::flag(rep.baseline_below_one)});
    t.add_row({"max_probability", format_number(rep.max_probability)});
    t.add_row({"theorem_precondition", Fmt::flag(rep.theorem_precondition_ok)});
    return t;
}

Table run_templates(const RunConfig& cfg) {
    const Fmt fmt{cfg.decimals < 0 ? -1 : cfg.decimals + 4};
    Table t{{"name", "kind", "baseline", "details"}, {}};
    for (const auto& n : templates::names()) {
        const RiskCurve c = risk_curve_template(n);
        std::string details;
        if (const auto* e = std::get_if<ExponentialShape>(&c.shape())) {
            details = "rate=" + fmt.num(e->decay_rate);
        } else if (const auto* s = std::get_if<SteppedShape>(&c.shape())) {
            for (const auto& seg : s->segments) {
                if (!details.empty()) details += "; ";
                details += "start=" + format_number(seg.start) + " baseline=" + fmt.num(seg.baseline) +
                           " rate=" + fmt.num(seg.decay_rate);
            }
        }
        t.add_row({n, std::string(c.kind()), format_number(c.baseline()), details});
    }
    return t;
}

Table run_emit_curve(const RunConfig& cfg, const Flags& f) {
    if (!cfg.curve) throw ConfigError("no risk curve given (use --curve or a 'curve' entry in the scenario)");
    if (f.resolution < 2) throw ConfigError("--resolution must be at least 2");
    const RiskCurve& curve = *cfg.curve;
    const double dmax = curve.domain_max();
    const Fmt fmt{cfg.decimals};

    // (c, is_value): a left limit sorts before the value at the same c
    std::vector<std::pair<double, int>> pts;
    const double n = static_cast<double>(f.resolution - 1);
    for (std::size_t i = 0; i < f.resolution; ++i) {
        pts.push_back({i + 1 == f.resolution ? dmax : dmax * (static_cast<double>(i) / n), 1});
    }
    for (double b : curve.step_points()) {
        if (curve.left_limit(b) != curve(b)) {
            pts.push_back({b, 0});
            pts.push_back({b, 1});
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    Table t{{"c_cs", "pi"}, {}};
    for (const auto& [c, is_value] : pts) {
        t.add_row({fmt.num(c), fmt.num(is_value ? curve(c) : curve.left_limit(c))});
    }
    return t;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal split of a budget between security controls and cyber insurance", "cyberalloc"};
    app.require_subcommand(1);
    Flags f;

    auto* solve = app.add_subcommand("solve", "Optimal controls spend and premium per model and coverage");
    auto* compare = app.add_subcommand("compare", "PT overspend and risk reduction relative to EUT");
    auto* rank = app.add_subcommand("rank", "Order coverage options by each model's optimal objective");
    auto* bespoke = app.add_subcommand("bespoke", "Search (alpha, beta) for equal cost and lower risk than EUT");
    auto* sweep = app.add_subcommand("sweep", "Re-solve along r, alpha or beta, or run the sensitivity grid");
    auto* verify = app.add_subcommand("verify", "Check the full-insurance theorems numerically");
    auto* validate = app.add_subcommand("validate", "Check a risk curve against the modelling assumptions");
    auto* templ = app.add_subcommand("templates", "List the built-in risk curves");
    auto* emit_curve = app.add_subcommand("emit-curve", "Tabulate a risk curve for plotting");
    for (auto* cmd : {solve, compare, rank, bespoke, sweep, verify, validate, templ, emit_curve}) add_common(cmd, f);

    emit_curve->add_option("--resolution", f.resolution, "Number of evenly spaced points (>= 2)");
    sweep->add_option("--axis", f.axis, "r, alpha or beta")->check(CLI::IsMember({"r", "alpha", "beta"}));
    sweep->add_option("--values", f.values, "Parameter values, ascending");
    sweep->add_flag("--sensitivity", f.sensitivity, "Vary W, L/W and q over the reference grid");
    bespoke->add_option("--cost-fraction", f.cost_fraction, "Allowed total-cost gap as a fraction of EUT's");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfig;
    }

    try {
        if (emit_curve->parsed()) {
            // plot data defaults to exact values
            Flags g = f;
            if (g.decimals == kDecimalsUnset) g.decimals = -1;
            const RunConfig cfg = build_config(g, {0.0});
            emit(run_emit_curve(cfg, g), cfg, out);
            return kExitOk;
        }
        if (templ->parsed()) {
            const RunConfig cfg = build_config(f, {0.0});
            emit(run_templates(cfg), cfg, out);
            return kExitOk;
        }
        const std::vector<double> std_coverage{0.0, 0.8, 1.0};
        const RunConfig cfg = build_config(f, bespoke->parsed() ? std::vector<double>{0.8} : std_coverage);
        Table t;
        if (solve->parsed()) t = run_solve(cfg);
        else if (compare->parsed()) t = run_compare(cfg);
        else if (rank->parsed()) t = run_rank(cfg);
        else if (bespoke->parsed()) t = run_bespoke(cfg, f);
        else if (sweep->parsed()) t = run_sweep(cfg, f);
        else if (verify->parsed()) t = run_verify(cfg);
        else {
            t = run_validate(cfg);
            emit(t, cfg, out);
            const auto rep = validate_curve(*cfg.curve);
            if (!rep.satisfies_assumptions()) {
                for (const auto& v : rep.violations()) err << "validation failure: " << v << '\n';
                return kExitValidation;
            }
            return kExitOk;
        }
        emit(t, cfg, out);
        return kExitOk;
    } catch (const ValidationFailure& v) {
        for (const auto& msg : v.violations) err << "validation failure: " << msg << '\n';
        return kExitValidation;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const LookupError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace cyberalloc::cli
