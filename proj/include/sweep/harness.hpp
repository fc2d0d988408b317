#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sweep/scenario.hpp"
#include "sweep/variation.hpp"

namespace sweep {

struct RunOptions {
    /// Overrides the scenario's level count.
    std::optional<int> levels;
    bool svg = false;
    /// Skip all file output (the report is still returned).
    bool write_files = true;
};

struct CheckResult {
    Check check = Check::constraint;
    bool pass = false;
    /// Distance to the failure threshold; negative when failing.
    double margin = 0.0;
    std::string detail;
};

struct LevelSummary {
    int level = 0;
    double eps = 0.0;
    double delta = 0.0;
    std::size_t intervals = 0;
    double variation = 0.0;
    double constraint_residual = 0.0;
    double max_jump = 0.0;
    double wall_seconds = 0.0;
    std::optional<double> sup_diff;
    std::optional<double> cauchy_ratio;
    std::optional<double> ball_bound;
    std::optional<double> cone_bound;
};

struct RunReport {
    std::string scenario;
    std::vector<LevelSummary> levels;
    std::vector<CheckResult> checks;
    std::vector<std::string> notes;
    ConvergenceReport convergence;

    bool passed() const;
    const CheckResult* find(Check c) const;
};

RefinementSchedule schedule_for(const Scenario& s, std::optional<int> levels = std::nullopt);

/// Solves every level, evaluates the enabled checks, writes level_<n>.csv,
/// convergence.json, report.json and (optionally) SVG plots into out_dir.
RunReport run(const Scenario& s, const std::filesystem::path& out_dir, const RunOptions& options = {});

std::string report_json(const RunReport& report);
std::string convergence_json(const ConvergenceReport& report);

}  // namespace sweep
