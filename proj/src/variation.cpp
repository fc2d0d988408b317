#include "sweep/variation.hpp"

#include <algorithm>
#include <cmath>
#include <chrono>
#include <exception>
#include <string>

#include "sweep/kernels.hpp"

namespace sweep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kOversample = 10;

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be positive");
}

}  // namespace

double variation(const DiscreteTrajectory& traj, double from, double to) {
    if (from > to) throw Error(ErrorKind::InvalidArgument, "variation window is reversed");
    double sum = 0.0;
    for (std::size_t j = 1; j < traj.points.size(); ++j) {
        const double t = traj.grid[j];
        if (t > from && t <= to) sum += traj.jumps[j].norm();
    }
    return sum;
}

double variation_on(const AffineInterpolant& x, const TimeGrid& grid) {
    double sum = 0.0;
    Vector prev = x(grid[0]);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        Vector cur = x(grid[k]);
        sum += (cur - prev).norm();
        prev = std::move(cur);
    }
    return sum;
}

BoundValue ball_variation_bound(const VariationBoundParams& p) {
    require_positive(p.rho, "rho");
    require_positive(p.r, "r");
    if (p.w.size() != p.y0.size()) throw Error(ErrorKind::DimensionMismatch, "w and y0 differ in dimension");
    const double dist2 = (p.y0 - p.w).squaredNorm();
    const double num = dist2 - p.rho * p.rho;
    if (std::isinf(p.r)) {
        // r -> inf limit of the same expression
        return {std::max(num / (2.0 * p.rho), 0.0), false};
    }
    const double scale = 2.0 * p.r * p.rho;
    const double den = scale - p.alpha * p.alpha;
    if (!(den > 0.0)) {
        throw Error(ErrorKind::InapplicableBound, "alpha^2 = " + std::to_string(p.alpha * p.alpha) +
                                                      " >= 2 r rho = " + std::to_string(scale));
    }
    return {std::max(p.r * num / den, 0.0), den <= 1e-9 * scale};
}

double cone_variation_bound(const VariationBoundParams& p, double horizon) {
    if (horizon == 0.0) return 0.0;
    if (horizon < 0.0) throw Error(ErrorKind::InvalidArgument, "negative horizon");
    require_positive(p.r, "r");
    require_positive(p.R, "R");
    if (!(p.tau > 0.0)) throw Error(ErrorKind::InapplicableBound, "tau must be positive");
    if (!(p.lambda > 0.0 && p.lambda < 1.0)) throw Error(ErrorKind::InapplicableBound, "lambda outside (0, 1)");
    const double half = p.lambda * p.R / 2.0;
    if (p.d < half) {
        throw Error(ErrorKind::InapplicableBound, "d < lambda R / 2: no inner ball of that size fits");
    }
    if (!(p.eps_bar >= 0.0 && p.eps_bar < p.r / 2.0)) {
        throw Error(ErrorKind::InapplicableBound, "eps_bar must lie in [0, r/2)");
    }
    const double gap = p.d + p.R / 2.0;
    if (!(p.lambda * gap * gap < p.r * p.R)) {
        throw Error(ErrorKind::InapplicableBound, "lambda (d + R/2)^2 >= r R");
    }
    const double windows = std::ceil(2.0 * horizon / p.tau);
    const double num = p.d * p.d - half * half;
    if (std::isinf(p.r)) return windows * (num / (p.lambda * p.R) + p.eps_bar);
    const double alpha = p.lambda * p.d + half + p.eps_bar;
    const double den = p.lambda * p.r * p.R - alpha * alpha;
    if (!(den > 0.0)) throw Error(ErrorKind::InapplicableBound, "lambda r R <= alpha^2");
    return windows * (p.r * num / den + p.eps_bar);
}

VariationBoundParams choose_cone_params(double r, double R, double d, const Modulus& omega, double horizon,
                                        const RefinementSchedule* schedule) {
    require_positive(r, "r");
    require_positive(R, "R");
    require_positive(d, "d");
    VariationBoundParams p;
    p.r = r;
    p.R = R;
    p.d = d;
    const double gap = d + R / 2.0;
    p.lambda = std::min(0.9 * r * R / (gap * gap), 0.99);
    p.tau = compute_tau(omega, r, p.lambda * R, p.lambda * R / 2.0, horizon);
    // eps_bar < r/2 and (lambda d + lambda R/2 + eps_bar)^2 < lambda r R
    const double quad = std::isinf(r) ? kInf : std::sqrt(p.lambda * r * R) - p.lambda * gap;
    const double cap = std::min(r / 2.0, quad);
    if (!(cap > 0.0)) throw Error(ErrorKind::NoFeasibleEps, "no eps satisfies the cone smallness conditions");
    if (schedule == nullptr) {
        p.eps_bar = std::isinf(cap) ? 0.0 : 0.5 * cap;
        return p;
    }
    for (std::size_t n = 0; n < schedule->levels(); ++n) {
        if (schedule->eps[n] < cap && schedule->delta[n] < p.tau / 2.0) {
            p.eps_bar = schedule->eps[n];
            p.n_bar = static_cast<int>(n);
            return p;
        }
    }
    throw Error(ErrorKind::NoFeasibleEps, "no schedule level meets eps < " + std::to_string(cap) +
                                              " and delta < tau/2 = " + std::to_string(p.tau / 2.0));
}

namespace {

std::vector<double> union_nodes(const TimeGrid& a, const TimeGrid& b) {
    std::vector<double> nodes;
    nodes.reserve(a.size() + b.size());
    std::set_union(a.times().begin(), a.times().end(), b.times().begin(), b.times().end(),
                   std::back_inserter(nodes));
    return nodes;
}

// evaluation point k of the oversampled union partition
double sample_time(const std::vector<double>& nodes, std::size_t k) {
    const std::size_t seg = k / kOversample;
    const std::size_t off = k % kOversample;
    if (seg + 1 >= nodes.size()) return nodes.back();
    return nodes[seg] + (nodes[seg + 1] - nodes[seg]) * (static_cast<double>(off) / kOversample);
}

void check_span(const AffineInterpolant& a, const AffineInterpolant& b) {
    if (a.grid().t_first() != b.grid().t_first() || a.grid().t_last() != b.grid().t_last()) {
        throw Error(ErrorKind::InvalidArgument, "interpolants cover different intervals");
    }
}

}  // namespace

double sup_diff_serial(const AffineInterpolant& a, const AffineInterpolant& b) {
    check_span(a, b);
    const std::vector<double> nodes = union_nodes(a.grid(), b.grid());
    const std::size_t count = (nodes.size() - 1) * kOversample + 1;
    return kernels::argmax_serial(count, [&](std::size_t k) {
               const double t = sample_time(nodes, k);
               return (a(t) - b(t)).norm();
           })
        .value;
}

double sup_diff(const AffineInterpolant& a, const AffineInterpolant& b) {
    check_span(a, b);
    const std::vector<double> nodes = union_nodes(a.grid(), b.grid());
    const std::size_t count = (nodes.size() - 1) * kOversample + 1;
    return kernels::argmax(count, [&](std::size_t k) {
               const double t = sample_time(nodes, k);
               return (a(t) - b(t)).norm();
           })
        .value;
}

namespace {

DiscreteTrajectory solve_level(const MovingFamily& family, const Vector& y0, const RefinementSchedule& schedule,
                               std::size_t n, double& seconds) {
    try {
        const auto start = std::chrono::steady_clock::now();
        DiscreteTrajectory traj = solve(family, y0, schedule.grids[n], schedule.eps[n], static_cast<int>(n));
        seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return traj;
    } catch (const Error& e) {
        throw e.with_level(static_cast<int>(n));
    }
}

ConvergenceReport assemble(const MovingFamily& family, const RefinementSchedule& schedule,
                           std::vector<DiscreteTrajectory> trajs, std::vector<double> wall, bool parallel) {
    ConvergenceReport rep;
    rep.wall_seconds = std::move(wall);
    for (std::size_t n = 0; n < trajs.size(); ++n) {
        rep.levels.push_back(static_cast<int>(n));
        rep.eps.push_back(schedule.eps[n]);
        rep.variations.push_back(variation(trajs[n], trajs[n].grid.t_first(), trajs[n].grid.t_last()));
        rep.constraint_residuals.push_back(constraint_residual(family, trajs[n]));
    }
    for (std::size_t n = 0; n + 1 < trajs.size(); ++n) {
        const AffineInterpolant coarse(trajs[n]);
        const AffineInterpolant fine(trajs[n + 1]);
        const double diff = parallel ? sup_diff(coarse, fine) : sup_diff_serial(coarse, fine);
        rep.sup_diffs.push_back(diff);
        rep.cauchy_ratios.push_back(diff * diff / schedule.eps[n]);
    }
    rep.trajectories = std::move(trajs);
    return rep;
}

}  // namespace

ConvergenceReport converge_study_serial(const MovingFamily& family, const Vector& y0,
                                        const RefinementSchedule& schedule) {
    if (family.horizon() == 0.0) return {};
    std::vector<DiscreteTrajectory> trajs;
    std::vector<double> wall(schedule.levels(), 0.0);
    for (std::size_t n = 0; n < schedule.levels(); ++n) trajs.push_back(solve_level(family, y0, schedule, n, wall[n]));
    return assemble(family, schedule, std::move(trajs), std::move(wall), false);
}

ConvergenceReport converge_study(const MovingFamily& family, const Vector& y0, const RefinementSchedule& schedule) {
    if (family.horizon() == 0.0) return {};
    const std::size_t levels = schedule.levels();
    std::vector<std::optional<DiscreteTrajectory>> slots(levels);
    std::vector<std::exception_ptr> failures(levels);
    std::vector<double> wall(levels, 0.0);
    // finest levels first: they dominate the cost
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(levels) - 1; k >= 0; --k) {
        const auto n = static_cast<std::size_t>(k);
        try {
            slots[n] = solve_level(family, y0, schedule, n, wall[n]);
        } catch (...) {
            failures[n] = std::current_exception();
        }
    }
    std::vector<DiscreteTrajectory> trajs;
    for (std::size_t n = 0; n < levels; ++n) {
        if (failures[n]) std::rethrow_exception(failures[n]);
        trajs.push_back(std::move(*slots[n]));
    }
    return assemble(family, schedule, std::move(trajs), std::move(wall), true);
}

CauchyVerdict cauchy_check(const ConvergenceReport& report) {
    CauchyVerdict v;
    const auto& d = report.sup_diffs;
    const auto& q = report.cauchy_ratios;
    if (d.size() < 2) return v;
    v.decreasing = true;
    for (std::size_t i = 1; i < d.size(); ++i) {
        // two exact levels in a row count as converged
        v.decreasing = v.decreasing && (d[i] < d[i - 1] || (d[i] == 0.0 && d[i - 1] == 0.0));
    }
    const std::size_t k = std::min<std::size_t>(3, q.size());
    const double head = *std::max_element(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(k));
    const double tail = *std::max_element(q.end() - static_cast<std::ptrdiff_t>(k), q.end());
    v.growth = head > 0.0 ? tail / head : (tail > 0.0 ? kInf : 0.0);
    v.bounded = tail <= 2.0 * head;
    return v;
}

}  // namespace sweep
