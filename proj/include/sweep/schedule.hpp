#pragma once

#include <cstddef>
#include <vector>

#include "sweep/moving_family.hpp"
#include "sweep/time_grid.hpp"

namespace sweep {

/// Geometric tolerance sequence eps_n = eps0 * ratio^n, summable for ratio in (0, 1).
struct EpsTemplate {
    double eps0 = 0.1;
    double ratio = 0.5;

    double operator()(int n) const;
    friend bool operator==(const EpsTemplate&, const EpsTemplate&) = default;
};

struct ScheduleOptions {
    /// Grid n has base_intervals * refinement^k_n uniform intervals, k_n strictly increasing.
    std::size_t refinement = 2;
    std::size_t base_intervals = 1;
    std::size_t max_intervals = std::size_t{1} << 22;
    SamplingBudget budget;
};

// Nested refinement data (eps_n, delta_n, grid_n) with
// sup{e(C(s), C(t)) : 0 <= t - s <= delta_n} < eps_n < r and mesh(grid_n) <= delta_n.
struct RefinementSchedule {
    EpsTemplate eps_template;
    std::vector<double> eps;
    std::vector<double> delta;
    std::vector<TimeGrid> grids;
    double r = 0.0;

    std::size_t levels() const { return eps.size(); }
};

/// Convex sets (r = inf) are validated against this cap.
inline constexpr double kConvexRadiusCap = 1e9;

RefinementSchedule build_schedule(const MovingFamily& family, double horizon, const EpsTemplate& eps_template,
                                  int levels, const ScheduleOptions& options = {});

/// Largest delta in (0, horizon] with omega(delta) < eps, found by bisection, then halved
/// once; the full horizon is returned unhalved when omega(horizon) < eps already.
double delta_for(const MovingFamily& family, double horizon, double eps, const SamplingBudget& budget);

}  // namespace sweep
