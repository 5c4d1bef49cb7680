#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cyberalloc/errors.hpp"
#include "cyberalloc/format.hpp"

namespace cyberalloc {

enum class ReportFormat { Csv, Markdown };

inline ReportFormat parse_report_format(std::string_view s) {
    if (s == "csv") return ReportFormat::Csv;
    if (s == "markdown" || s == "md") return ReportFormat::Markdown;
    throw ConfigError("unknown output format '" + std::string(s) + "' (expected csv or markdown)");
}

/// A report is a header plus rows of already-formatted cells.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) {
        if (row.size() != header.size()) throw UsageError("row width does not match the header");
        rows.push_back(std::move(row));
    }
};

namespace detail {

inline std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string md_cell(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace detail

inline std::string render(const Table& t, ReportFormat format) {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        if (format == ReportFormat::Csv) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) out += ',';
                out += detail::csv_cell(cells[i]);
            }
        } else {
            out += '|';
            for (const auto& c : cells) {
                out += ' ';
                out += detail::md_cell(c);
                out += " |";
            }
        }
        out += '\n';
    };
    line(t.header);
    if (format == ReportFormat::Markdown) {
        out += '|';
        for (std::size_t i = 0; i < t.header.size(); ++i) out += "---|";
        out += '\n';
    }
    for (const auto& r : t.rows) line(r);
    return out;
}

}  // namespace cyberalloc
