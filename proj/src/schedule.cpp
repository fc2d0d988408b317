#include "sweep/schedule.hpp"

#include <cmath>
#include <string>

namespace sweep {

double EpsTemplate::operator()(int n) const { return eps0 * std::pow(ratio, n); }

double delta_for(const MovingFamily& family, double horizon, double eps, const SamplingBudget& budget) {
    auto omega = [&](double d) {
        return estimate_modulus(family, {d}, budget).front().second;
    };
    if (omega(horizon) < eps) return horizon;
    double lo = 0.0, hi = horizon;
    const int iterations = family.analytic_modulus() && !budget.force_sampling ? 64 : 40;
    for (int it = 0; it < iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (omega(mid) < eps) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (!(lo > 0.0)) {
        throw Error(ErrorKind::ModulusUnavailable,
                    "no delta in (0, horizon] certifies omega(delta) < " + std::to_string(eps));
    }
    return 0.5 * lo;
}

RefinementSchedule build_schedule(const MovingFamily& family, double horizon, const EpsTemplate& eps_template,
                                  int levels, const ScheduleOptions& options) {
    if (!(horizon > 0.0) || horizon > family.horizon()) {
        throw Error(ErrorKind::InvalidArgument, "schedule horizon must lie in (0, family horizon]");
    }
    if (levels < 1) throw Error(ErrorKind::InvalidArgument, "schedule needs at least one level");
    if (!(eps_template.ratio > 0.0 && eps_template.ratio < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "eps ratio must lie in (0, 1) for a summable sequence");
    }
    const double r = std::min(family.r(), kConvexRadiusCap);
    if (!(eps_template.eps0 > 0.0 && eps_template.eps0 < r)) {
        throw Error(ErrorKind::InvalidArgument, "eps0 must lie in (0, r)");
    }
    if (options.refinement < 2 || options.base_intervals < 1) {
        throw Error(ErrorKind::InvalidArgument, "refinement must be >= 2 and base_intervals >= 1");
    }

    RefinementSchedule schedule;
    schedule.eps_template = eps_template;
    schedule.r = r;
    std::size_t intervals = 0;
    for (int n = 0; n < levels; ++n) {
        const double eps = eps_template(n);
        const double delta = delta_for(family, horizon, eps, options.budget);
        std::size_t count = n == 0 ? options.base_intervals : intervals * options.refinement;
        while (horizon / static_cast<double>(count) > delta) {
            if (count > options.max_intervals / options.refinement) {
                throw Error(ErrorKind::ModulusUnavailable,
                            "level " + std::to_string(n) + " needs more than " +
                                std::to_string(options.max_intervals) + " intervals");
            }
            count *= options.refinement;
        }
        TimeGrid grid = TimeGrid::uniform(0.0, horizon, count);
        if (grid.mesh() > delta) {
            // rounding in the node positions; one more refinement absorbs it
            count *= options.refinement;
            grid = TimeGrid::uniform(0.0, horizon, count);
        }
        intervals = count;
        schedule.eps.push_back(eps);
        schedule.delta.push_back(delta);
        schedule.grids.push_back(std::move(grid));
    }
    return schedule;
}

}  // namespace sweep
