#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "sweep/catchup.hpp"
#include "sweep/schedule.hpp"

namespace sweep {

/// Sum of jump norms at nodes t_j in (from, to]; exact for the step interpolant.
double variation(const DiscreteTrajectory& traj, double from, double to);

/// Sum of ||x(t_k) - x(t_{k-1})|| over the nodes of `grid`.
double variation_on(const AffineInterpolant& x, const TimeGrid& grid);

// Inputs of both a priori bounds. The ball bound reads r, w, rho, alpha, y0;
// the cone bound reads r, R, d, lambda, tau, eps_bar.
struct VariationBoundParams {
    double r = std::numeric_limits<double>::infinity();
    Vector w;
    double rho = 0.0;
    double alpha = 0.0;
    Vector y0;
    double R = 0.0;
    double d = 0.0;
    double lambda = 0.0;
    double tau = 0.0;
    double eps_bar = 0.0;
    /// First schedule level allowed to use eps_bar; -1 when chosen without a schedule.
    int n_bar = -1;
};

struct BoundValue {
    double value = 0.0;
    /// Denominator within 1e-9 relative of zero: finite but not trustworthy.
    bool near_pole = false;
};

/// max{r(|y0-w|^2 - rho^2) / (2 r rho - alpha^2), 0}; InapplicableBound unless alpha^2 < 2 r rho.
BoundValue ball_variation_bound(const VariationBoundParams& p);

/// ceil(2T/tau) * (r(d^2 - (lambda R/2)^2) / (lambda r R - alpha^2) + eps_bar),
/// alpha = lambda d + lambda R/2 + eps_bar.
double cone_variation_bound(const VariationBoundParams& p, double horizon);

/// lambda = min(0.9 r R / (d + R/2)^2, 0.99), tau from compute_tau(omega, r, lambda R, lambda R/2).
/// With a schedule, eps_bar is its first eps meeting the smallness conditions and delta < tau/2.
VariationBoundParams choose_cone_params(double r, double R, double d, const Modulus& omega, double horizon,
                                        const RefinementSchedule* schedule = nullptr);

struct ConvergenceReport {
    std::vector<int> levels;
    std::vector<double> eps;
    /// sup_t ||x_{n+1}(t) - x_n(t)||; one entry per consecutive pair, so levels.size() - 1 entries.
    std::vector<double> sup_diffs;
    std::vector<double> variations;
    /// sup_diffs[n]^2 / eps[n].
    std::vector<double> cauchy_ratios;
    /// max_j d(y_j, C(t_j)) per level.
    std::vector<double> constraint_residuals;
    std::vector<DiscreteTrajectory> trajectories;
    /// Solve time per level in seconds.
    std::vector<double> wall_seconds;
};

/// sup of ||a(t) - b(t)|| over the union of both grids plus 10 points per union interval.
double sup_diff(const AffineInterpolant& a, const AffineInterpolant& b);
double sup_diff_serial(const AffineInterpolant& a, const AffineInterpolant& b);

ConvergenceReport converge_study(const MovingFamily& family, const Vector& y0, const RefinementSchedule& schedule);
ConvergenceReport converge_study_serial(const MovingFamily& family, const Vector& y0,
                                        const RefinementSchedule& schedule);

struct CauchyVerdict {
    bool decreasing = false;
    bool bounded = false;
    /// max(last 3 ratios) / max(first 3 ratios).
    double growth = 0.0;
    bool pass() const { return decreasing && bounded; }
};

/// sup_diffs strictly decreasing and max(last 3 ratios) <= 2 max(first 3 ratios).
CauchyVerdict cauchy_check(const ConvergenceReport& report);

}  // namespace sweep
