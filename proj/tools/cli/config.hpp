#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cyberalloc/cyberalloc.hpp"

namespace YAML {
class Node;
}

namespace cyberalloc::cli {

/// Everything a subcommand needs, merged from the scenario file and flags.
struct RunConfig {
    Scenario scenario{};
    std::optional<RiskCurve> curve;  // resolved curve, if one was given
    std::string curve_label;         // template name or file stem
    std::vector<Model> models;
    std::vector<double> coverage_options;
    // set when a file or flag named them, even as an empty list
    bool models_given = false;
    bool coverage_given = false;
    ReportFormat format = ReportFormat::Csv;
    std::optional<std::string> out_path;
    int decimals = 2;

    // At least one model and one coverage option.
    void validate() const;
};

/// Parses a curve description (`type`, `baseline`, `rate`, `segments`,
/// `knots`, `domain_max`). Errors carry "source:line:".
RiskCurve parse_curve(const YAML::Node& node, const std::string& source);

RiskCurve load_curve_file(const std::filesystem::path& path);

/// A template name ("pi1".."pi5") or a path to a curve file.
RiskCurve resolve_curve(const std::string& ref, const std::filesystem::path& relative_to = {});

/// Reads a scenario file into cfg, overwriting the fields it mentions.
void load_scenario_file(const std::filesystem::path& path, RunConfig& cfg);

}  // namespace cyberalloc::cli
