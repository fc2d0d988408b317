#pragma once

#include <string>

#include "sweep/catchup.hpp"
#include "sweep/variation.hpp"

namespace sweep {

/// Components x_k(t) of a trajectory as polylines.
std::string trajectory_svg(const DiscreteTrajectory& traj, const std::string& title);

/// Log-scale bars of eps_n next to sup_diff_n^2, one group per level.
std::string convergence_svg(const ConvergenceReport& report, const std::string& title);

}  // namespace sweep
