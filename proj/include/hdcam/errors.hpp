#pragma once

#include <stdexcept>
#include <string>

namespace hdcam {

// Raised when a requested evaluation point lies outside the calibrated
// model range (e.g. energy lookup beyond the characterized V_eval grid).
struct out_of_model_error : std::runtime_error {
    explicit out_of_model_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a match-probability curve never reaches probability 1 (no
// guaranteed-match bound) or never reaches 0 (no guaranteed-mismatch bound)
// inside the scanned distance range.
struct region_unbounded_error : std::runtime_error {
    explicit region_unbounded_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a ratio metric has an empty denominator (no trials of the
// required class); never silently reported as 0 or 1.
struct undefined_metric_error : std::runtime_error {
    explicit undefined_metric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Text-input parse failure; carries the 1-based line number.
struct parse_error : std::runtime_error {
    parse_error(const std::string& msg, std::size_t line_no)
        : std::runtime_error(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
    std::size_t line;
};

// Binary database file failure (magic, version, truncation, ...).
struct db_format_error : std::runtime_error {
    explicit db_format_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace hdcam
