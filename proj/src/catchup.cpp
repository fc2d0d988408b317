#include "sweep/catchup.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <string>

#include <omp.h>

#include "sweep/kernels.hpp"

namespace sweep {

double DiscreteTrajectory::max_jump() const {
    double m = 0.0;
    for (const auto& d : jumps) m = std::max(m, d.norm());
    return m;
}

DiscreteTrajectory solve(const MovingFamily& family, const Vector& y0, const TimeGrid& grid, double eps_level,
                         int level) {
    require_dim(y0, family.dim(), "initial point");
    if (grid.t_first() != 0.0 || grid.t_last() > family.horizon()) {
        throw Error(ErrorKind::InvalidArgument, "grid must start at 0 and end within the family horizon");
    }
    const ProxSet first = family.slice(grid.t_first());
    if (!first.contains(y0)) {
        throw Error(ErrorKind::InitialInfeasible,
                    "initial point violates C(0) by " + std::to_string(first.defect(y0)));
    }
    DiscreteTrajectory traj{grid, {}, {}, level, eps_level};
    traj.points.reserve(grid.size());
    traj.jumps.reserve(grid.size());
    traj.points.push_back(y0);
    traj.jumps.push_back(Vector::Zero(y0.size()));
    const double r = family.r();
    // strict "< eps" with a relative allowance for rounding
    const double eps_cap = eps_level * (1.0 + 1e-12);
    for (std::size_t j = 1; j < grid.size(); ++j) {
        const ProxSet set = family.slice(grid[j]);
        const Vector& prev = traj.points.back();
        const double d = set.raw_distance(prev);
        if (d >= r) {
            throw Error(ErrorKind::TubeViolation,
                        "step " + std::to_string(j) + ": d(y_{j-1}, C(t_j)) = " + std::to_string(d) +
                            " >= r = " + std::to_string(r),
                        j);
        }
        Vector next;
        try {
            next = set.project(prev);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::OutsideTube || e.kind() == ErrorKind::AtSingularity) {
                throw Error(ErrorKind::TubeViolation, "step " + std::to_string(j) + ": " + e.what(), j);
            }
            throw;
        }
        Vector jump = next - prev;
        if (jump.norm() >= eps_cap) {
            throw Error(ErrorKind::EpsExceeded,
                        "step " + std::to_string(j) + " moved " + std::to_string(jump.norm()) +
                            " >= eps_n = " + std::to_string(eps_level),
                        j);
        }
        traj.points.push_back(std::move(next));
        traj.jumps.push_back(std::move(jump));
    }
    return traj;
}

Vector StepInterpolant::operator()(double t) const { 
    const std::size_t j = grid_.interval_of(t);
    return j == grid_.intervals() && t == grid_.t_last() ? points_.back() : points_[j - 1];
}

Vector AffineInterpolant::operator()(double t) const {
    const std::size_t j = grid_.interval_of(t);
    if (j == grid_.intervals() && t == grid_.t_last()) return points_.back();
    const double t0 = grid_[j - 1];
    const double t1 = grid_[j];
    const double s = (t - t0) / (t1 - t0);
    return points_[j - 1] + s * (points_[j] - points_[j - 1]);
}

namespace {

StepCertificate certify_one(const MovingFamily& family, const DiscreteTrajectory& traj, std::size_t j,
                            std::size_t samples, std::uint64_t seed, const CertifyOptions& options) {
    const ProxSet set = family.slice(traj.grid[j]);
    const Vector& x = traj.points[j];
    const Vector n = -traj.jumps[j];
    const Region region = Region::cube(x, options.half_width);
    const std::vector<Vector> zs = sample_points(set, region, samples, mix_seed(seed, j));
    StepCertificate cert;
    cert.j = j;
    cert.distance_moved = n.norm();
    const ExcessEstimate e = excess(family.slice(traj.grid[j - 1]), set);
    cert.excess_bound_used = e.method == ExcessMethod::analytic ? e.lower : traj.eps_level;
    cert.normal_report = normal_residual(set, x, n, zs);
    return cert;
}

void check(const StepCertificate& c) {
    if (c.normal_report.worst_residual > kCertifyFailure) {
        throw Error(ErrorKind::CertificationFailed,
                    "step " + std::to_string(c.j) + ": normal residual " +
                        std::to_string(c.normal_report.worst_residual),
                    c.j);
    }
    if (c.distance_moved > c.excess_bound_used * (1.0 + 1e-12) + 1e-9) {
        throw Error(ErrorKind::CertificationFailed,
                    "step " + std::to_string(c.j) + ": moved farther than the excess bound", c.j);
    }
}

std::vector<std::size_t> moving_steps(const DiscreteTrajectory& traj) {
    std::vector<std::size_t> steps;
    for (std::size_t j = 1; j < traj.jumps.size(); ++j) {
        if (traj.jumps[j].norm() > 0.0) steps.push_back(j);
    }
    return steps;
}

}  // namespace

std::vector<StepCertificate> certify_steps_serial(const MovingFamily& family, const DiscreteTrajectory& traj,
                                                  std::size_t samples_per_step, std::uint64_t seed,
                                                  const CertifyOptions& options) {
    std::vector<StepCertificate> out;
    for (std::size_t j : moving_steps(traj)) {
        out.push_back(certify_one(family, traj, j, samples_per_step, seed, options));
        check(out.back());
    }
    return out;
}

std::vector<StepCertificate> certify_steps(const MovingFamily& family, const DiscreteTrajectory& traj,
                                           std::size_t samples_per_step, std::uint64_t seed,
                                           const CertifyOptions& options) {
    const std::vector<std::size_t> steps = moving_steps(traj);
    std::vector<StepCertificate> out(steps.size());
    std::vector<std::exception_ptr> failures(steps.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(steps.size()); ++k) {
        const auto i = static_cast<std::size_t>(k);
        try {
            out[i] = certify_one(family, traj, steps[i], samples_per_step, seed, options);
        } catch (...) {
            failures[i] = std::current_exception();
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (failures[i]) std::rethrow_exception(failures[i]);
        check(out[i]);
    }
    return out;
}

double constraint_residual(const MovingFamily& family, const DiscreteTrajectory& traj) {
    const auto best = kernels::argmax(traj.points.size(), [&](std::size_t j) {
        return family.slice(traj.grid[j]).raw_distance(traj.points[j]);
    });
    return std::max(best.value, 0.0);
}

void write_csv(std::ostream& out, const MovingFamily& family, const DiscreteTrajectory& traj) {
    const Eigen::Index dim = traj.points.empty() ? 0 : traj.points.front().size();
    out << "t";
    for (Eigen::Index k = 0; k < dim; ++k) out << ",x_" << k;
    out << ",jump_norm,dist_to_set\n";
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    for (std::size_t j = 0; j < traj.points.size(); ++j) {
        put(traj.grid[j]);
        for (Eigen::Index k = 0; k < dim; ++k) {
            out << ',';
            put(traj.points[j][k]);
        }
        out << ',';
        put(traj.jumps[j].norm());
        out << ',';
        put(family.slice(traj.grid[j]).raw_distance(traj.points[j]));
        out << '\n';
    }
}

}  // namespace sweep
