#pragma once

#include <span>
#include <string>

#include "eseek/engine.hpp"

namespace eseek {

/// Static line plot of the state components against time, with a dashed rule
/// at each minimizer component. Dependency-free; for anything richer, export
/// the CSV and plot externally.
std::string trajectory_svg(const Trajectory& traj, std::span<const double> x_star,
                           const std::string& title);

}  // namespace eseek
