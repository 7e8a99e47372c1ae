#pragma once

#include <string>
#include <vector>

#include "eseek/engine.hpp"

namespace eseek {

/// Columns: t, x_1..x_n, h_m, tau, alpha, phase, g_1..g_n.
/// Numbers carry 17 significant digits so re-parsing reproduces the doubles
/// exactly.
std::string trajectory_csv(const Trajectory& traj);

/// Inverse of trajectory_csv (data rows only; meta is not serialized).
Trajectory parse_trajectory_csv(const std::string& text);

/// One row per grid cell: the swept parameters followed by the run metrics.
/// convergence_time is left empty when the run never settles into the band.
std::string sweep_csv(const std::vector<std::string>& param_names,
                      const std::vector<std::vector<std::string>>& param_values,
                      const std::vector<RunMetrics>& results);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

std::string format_double(double v);  // shortest 17-significant-digit form

}  // namespace eseek
