#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sweep/moving_family.hpp"
#include "sweep/schedule.hpp"

namespace sweep {

enum class Check { constraint, normal, ball_bound, cone_bound, cauchy };

std::string to_string(Check c);

/// Declared inner ball B_rho(w) for the ball bound; r defaults to the family's radius.
struct BallBoundSpec {
    Vector w;
    double rho = 0.0;
    std::optional<double> r;
    friend bool operator==(const BallBoundSpec& l, const BallBoundSpec& r) {
        return same(l.w, r.w) && l.rho == r.rho && l.r == r.r;
    }
};

/// Declared interior cone data (R, d) for the cone bound.
struct ConeBoundSpec {
    double R = 0.0;
    double d = 0.0;
    std::optional<double> r;
    friend bool operator==(const ConeBoundSpec&, const ConeBoundSpec&) = default;
};

struct ScheduleSpec {
    EpsTemplate eps;
    int levels = 5;
    std::size_t refinement = 2;
    std::size_t base_intervals = 1;
    friend bool operator==(const ScheduleSpec&, const ScheduleSpec&) = default;
};

struct Scenario {
    std::string name;
    std::string description;
    Eigen::Index dim = 0;
    double horizon = 0.0;
    MovingFamily family;
    Vector y0;
    ScheduleSpec schedule;
    std::vector<Check> checks;
    std::optional<BallBoundSpec> ball_bound;
    std::optional<ConeBoundSpec> cone_bound;
    std::uint64_t seed = 1;
    std::size_t samples_per_step = 64;

    bool enabled(Check c) const;
    friend bool operator==(const Scenario& l, const Scenario& r);
};

/// Validates eagerly: SchemaError (with line or field path), UnknownShapeTag, InfeasibleInitialPoint.
Scenario parse_scenario(std::string_view text);
std::string serialize_scenario(const Scenario& s);

/// Name and one-line description of every builtin.
std::vector<std::pair<std::string, std::string>> list_builtins();
/// The JSON fixture of a builtin; InvalidArgument for unknown names.
std::string builtin_text(const std::string& name);
bool is_builtin(const std::string& name);

/// A builtin name or a path to a JSON document.
Scenario load_scenario(const std::string& name_or_path);

/// SWEEP_SEED when set, else the scenario's own seed.
std::uint64_t effective_seed(const Scenario& s);

}  // namespace sweep
