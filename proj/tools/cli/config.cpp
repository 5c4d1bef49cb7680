#include "cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <set>

namespace cyberalloc::cli {

namespace {

std::string where(const std::string& source, const YAML::Node& node) {
    const auto mark = node.Mark();
    if (mark.is_null()) return source + ": ";
    return source + ":" + std::to_string(mark.line + 1) + ": ";
}

[[noreturn]] void fail(const std::string& source, const YAML::Node& node, const std::string& msg) {
    throw ConfigError(where(source, node) + msg);
}

double as_number(const YAML::Node& node, const std::string& source, const std::string& key) {
    if (!node.IsScalar()) fail(source, node, "'" + key + "' must be a number");
    try {
        return node.as<double>();
    } catch (const YAML::Exception&) {
        fail(source, node, "'" + key + "' must be a number, got '" + node.Scalar() + "'");
    }
}

std::string as_string(const YAML::Node& node, const std::string& source, const std::string& key) {
    if (!node.IsScalar()) fail(source, node, "'" + key + "' must be a string");
    return node.Scalar();
}

void check_keys(const YAML::Node& map, const std::string& source, const std::set<std::string>& allowed) {
    if (!map.IsMap()) fail(source, map, "expected a mapping");
    for (const auto& kv : map) {
        const auto key = kv.first.Scalar();
        if (!allowed.count(key)) fail(source, kv.first, "unknown key '" + key + "'");
    }
}

YAML::Node load_yaml(const std::filesystem::path& path) {
    try {
        return YAML::LoadFile(path.string());
    } catch (const YAML::BadFile&) {
        throw ConfigError(path.string() + ": cannot open file");
    } catch (const YAML::ParserException& e) {
        throw ConfigError(path.string() + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
}

Model parse_model(const YAML::Node& node, const std::string& source) {
    check_keys(node, source, {"type", "alpha", "beta", "lambda", "r"});
    if (!node["type"]) fail(source, node, "model needs a 'type' (pt or eut)");
    const auto type = as_string(node["type"], source, "type");
    try {
        if (type == "pt") {
            PTParams p;
            if (node["alpha"]) p.alpha = as_number(node["alpha"], source, "alpha");
            if (node["beta"]) p.beta = as_number(node["beta"], source, "beta");
            if (node["lambda"]) p.lambda = as_number(node["lambda"], source, "lambda");
            p.validate();
            return p;
        }
        if (type == "eut") {
            EUTParams e;
            if (node["r"]) e.r = as_number(node["r"], source, "r");
            e.validate();
            return e;
        }
    } catch (const DomainError& e) {
        fail(source, node, e.what());
    }
    fail(source, node["type"], "model type must be 'pt' or 'eut', got '" + type + "'");
}

}  // namespace

void RunConfig::validate() const {
    if (models.empty()) throw ConfigError("at least one model is required");
    if (coverage_options.empty()) throw ConfigError("at least one coverage option is required");
    for (double i_r : coverage_options) {
        if (!(i_r >= 0.0 && i_r <= 1.0)) throw ConfigError("coverage ratio must lie in [0, 1]");
    }
    if (decimals > 17) throw ConfigError("decimals must be at most 17");
    try {
        scenario.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid scenario: ") + e.what());
    }
}

RiskCurve parse_curve(const YAML::Node& node, const std::string& source) {
    check_keys(node, source, {"type", "baseline", "rate", "segments", "knots", "domain_max"});
    if (!node["type"]) fail(source, node, "curve needs a 'type' (exponential, stepped or tabulated)");
    const auto type = as_string(node["type"], source, "type");
    const double dmax = node["domain_max"] ? as_number(node["domain_max"], source, "domain_max") : kDefaultDomainMax;
    try {
        if (type == "exponential") {
            if (!node["baseline"] || !node["rate"]) fail(source, node, "exponential curve needs 'baseline' and 'rate'");
            return RiskCurve::exponential(as_number(node["baseline"], source, "baseline"),
                                          as_number(node["rate"], source, "rate"), dmax);
        }
        if (type == "stepped") {
            const auto segs = node["segments"];
            if (!segs || !segs.IsSequence()) fail(source, node, "stepped curve needs a 'segments' list");
            std::vector<CurveSegment> out;
            for (const auto& s : segs) {
                check_keys(s, source, {"start", "baseline", "rate"});
                if (!s["start"] || !s["baseline"]) fail(source, s, "segment needs 'start' and 'baseline'");
                out.push_back({as_number(s["start"], source, "start"), as_number(s["baseline"], source, "baseline"),
                               s["rate"] ? as_number(s["rate"], source, "rate") : 0.0});
            }
            return RiskCurve::stepped(std::move(out), dmax);
        }
        if (type == "tabulated") {
            const auto knots = node["knots"];
            if (!knots || !knots.IsSequence()) fail(source, node, "tabulated curve needs a 'knots' list");
            std::vector<Knot> out;
            for (const auto& k : knots) {
                check_keys(k, source, {"c", "p"});
                if (!k["c"] || !k["p"]) fail(source, k, "knot needs 'c' and 'p'");
                out.push_back({as_number(k["c"], source, "c"), as_number(k["p"], source, "p")});
            }
            if (node["domain_max"]) return RiskCurve::tabulated(std::move(out), dmax);
            return RiskCurve::tabulated(std::move(out));
        }
    } catch (const DomainError& e) {
        fail(source, node, e.what());
    }
    fail(source, node["type"], "unknown curve type '" + type + "'");
}

RiskCurve load_curve_file(const std::filesystem::path& path) {
    return parse_curve(load_yaml(path), path.string());
}

RiskCurve resolve_curve(const std::string& ref, const std::filesystem::path& relative_to) {
    if (templates::is_template(ref)) return risk_curve_template(ref);
    std::filesystem::path p(ref);
    if (p.is_relative() && !relative_to.empty()) p = relative_to / p;
    if (!std::filesystem::exists(p)) {
        throw ConfigError("'" + ref + "' is neither a curve template (pi1..pi5) nor a readable file");
    }
    return load_curve_file(p);
}

void load_scenario_file(const std::filesystem::path& path, RunConfig& cfg) {
    const std::string source = path.string();
    const YAML::Node root = load_yaml(path);
    if (root.IsNull()) return;
    check_keys(root, source, {"wealth", "loss", "q", "margin", "coverage", "curve", "models", "format", "decimals", "out"});

    if (root["wealth"]) cfg.scenario.wealth = as_number(root["wealth"], source, "wealth");
    if (root["loss"]) cfg.scenario.loss = as_number(root["loss"], source, "loss");
    if (root["q"]) cfg.scenario.margin = as_number(root["q"], source, "q");
    if (root["margin"]) cfg.scenario.margin = as_number(root["margin"], source, "margin");

    if (const auto cov = root["coverage"]) {
        cfg.coverage_options.clear();
        cfg.coverage_given = true;
        if (cov.IsSequence()) {
            for (const auto& v : cov) cfg.coverage_options.push_back(as_number(v, source, "coverage"));
        } else {
            cfg.coverage_options.push_back(as_number(cov, source, "coverage"));
        }
        for (std::size_t i = 0; i < cfg.coverage_options.size(); ++i) {
            const double v = cfg.coverage_options[i];
            if (!(v >= 0.0 && v <= 1.0)) fail(source, cov, "coverage ratio must lie in [0, 1]");
        }
        if (cfg.coverage_options.empty()) fail(source, cov, "coverage list is empty");
    }

    if (const auto curve = root["curve"]) {
        if (curve.IsScalar()) {
            const auto ref = curve.Scalar();
            try {
                cfg.curve = resolve_curve(ref, path.parent_path());
            } catch (const ConfigError& e) {
                fail(source, curve, e.what());
            }
            cfg.curve_label = templates::is_template(ref) ? ref : std::filesystem::path(ref).stem().string();
        } else {
            cfg.curve = parse_curve(curve, source);
            cfg.curve_label = path.stem().string();
        }
    }

    if (const auto models = root["models"]) {
        if (!models.IsSequence()) fail(source, models, "'models' must be a list");
        cfg.models.clear();
        cfg.models_given = true;
        for (const auto& m : models) cfg.models.push_back(parse_model(m, source));
        if (cfg.models.empty()) fail(source, models, "model list is empty");
    }

    if (const auto f = root["format"]) {
        try {
            cfg.format = parse_report_format(as_string(f, source, "format"));
        } catch (const ConfigError& e) {
            fail(source, f, e.what());
        }
    }
    if (const auto d = root["decimals"]) cfg.decimals = static_cast<int>(as_number(d, source, "decimals"));
    if (const auto o = root["out"]) cfg.out_path = as_string(o, source, "out");
}

}  // namespace cyberalloc::cli
