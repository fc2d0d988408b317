#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "sweep/moving_family.hpp"
#include "sweep/time_grid.hpp"

namespace sweep {

// Output of the catching-up scheme y_j = P_{C(t_j)}(y_{j-1}) on one grid.
// jumps[0] is zero; jumps[j] = points[j] - points[j-1].
struct DiscreteTrajectory {
    TimeGrid grid;
    std::vector<Vector> points;
    std::vector<Vector> jumps;
    int level = 0;
    double eps_level = 0.0;

    double jump_norm(std::size_t j) const { return jumps[j].norm(); }
    double max_jump() const;
};

/// eps_level = +inf disables the per-step eps check (grids not built from a schedule).
DiscreteTrajectory solve(const MovingFamily& family, const Vector& y0, const TimeGrid& grid, double eps_level,
                         int level = 0);

// y_n(t) = y_{j-1} on [t_{j-1}, t_j), y_J at the final node.
class StepInterpolant {
public:
    explicit StepInterpolant(const DiscreteTrajectory& traj) : grid_(traj.grid), points_(traj.points) {}
    Vector operator()(double t) const;

private:
    TimeGrid grid_;
    std::vector<Vector> points_;
};

// x_n(t) = y_{j-1} + (t - t_{j-1}) / (t_j - t_{j-1}) * (y_j - y_{j-1}).
class AffineInterpolant {
public:
    explicit AffineInterpolant(const DiscreteTrajectory& traj) : grid_(traj.grid), points_(traj.points) {}
    Vector operator()(double t) const;
    const TimeGrid& grid() const { return grid_; }

private:
    TimeGrid grid_;
    std::vector<Vector> points_;
};

inline StepInterpolant step_interpolant(const DiscreteTrajectory& traj) { return StepInterpolant(traj); }
inline AffineInterpolant affine_interpolant(const DiscreteTrajectory& traj) { return AffineInterpolant(traj); }

struct StepCertificate {
    std::size_t j = 0;
    double distance_moved = 0.0;
    double excess_bound_used = 0.0;
    NormalResidualReport normal_report;
};

inline constexpr double kCertifyFailure = 1e-6;

struct CertifyOptions {
    /// Half-width of the sampling cube around y_j.
    double half_width = 2.0;
};

/// Checks -jumps[j] against sampled z in C(t_j) for every nonzero jump.
std::vector<StepCertificate> certify_steps(const MovingFamily& family, const DiscreteTrajectory& traj,
                                           std::size_t samples_per_step, std::uint64_t seed,
                                           const CertifyOptions& options = {});
std::vector<StepCertificate> certify_steps_serial(const MovingFamily& family, const DiscreteTrajectory& traj,
                                                  std::size_t samples_per_step, std::uint64_t seed,
                                                  const CertifyOptions& options = {});

/// max_j d(y_j, C(t_j)), unsnapped.
double constraint_residual(const MovingFamily& family, const DiscreteTrajectory& traj);

/// Header t,x_0,...,x_{d-1},jump_norm,dist_to_set; one row per node, %.17g.
void write_csv(std::ostream& out, const MovingFamily& family, const DiscreteTrajectory& traj);

}  // namespace sweep
