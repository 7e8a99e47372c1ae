#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eseek/common.hpp"
#include "eseek/costs.hpp"
#include "eseek/measurement.hpp"
#include "eseek/schemes.hpp"

namespace eseek {

enum class IntegrationMethod : std::int8_t { RK4, Euler };

struct EngineConfig {
  double t0 = 0.0;
  double t_end = 0.0;
  int steps_per_dither_period = 200;  // >= 32; dt = T / steps_per_dither_period
  IntegrationMethod method = IntegrationMethod::RK4;
  int sample_stride = 1;     // record every k-th step (events always recorded)
  double blowup_radius = 0.0;  // <= 0 selects 1e3 * (1 + ||x0 - x*||)

  void validate() const;
};

/// Time-stamped run record. Columnar; row i spans x[i*dim .. i*dim+dim).
/// Every measurement edge and phase-switch time in [t0, t_end] appears as a
/// sample, independent of the stride.
struct Trajectory {
  std::size_t dim = 0;
  std::vector<double> t;
  std::vector<double> h_m;
  std::vector<double> tau;
  std::vector<double> alpha;
  std::vector<std::int8_t> phase;
  std::vector<double> x;
  std::vector<double> g;
  bool diverged = false;
  double end_time = 0.0;
  std::map<std::string, std::string> meta;

  std::size_t size() const { return t.size(); }
  std::span<const double> x_at(std::size_t i) const { return {x.data() + i * dim, dim}; }
  std::span<const double> g_at(std::size_t i) const { return {g.data() + i * dim, dim}; }
};

struct RunMetrics {
  double steady_state_error = 0.0;  // sup ||x - x*|| over the final 20% of the run
  std::optional<double> convergence_time;  // entry-and-stay into the band
  bool diverged = false;
  double max_excursion = 0.0;
};

/// Integrates the scheme with fixed steps shortened so that no step straddles
/// a measurement edge or a dither-period boundary. Within a step all RK4
/// stages use the branch of the step's interior. Pure function of its inputs;
/// identical inputs produce bit-identical trajectories.
Trajectory simulate(const SchemeConfig& scheme, const MeasurementSchedule& sched,
                    const CostField& cost, const EngineConfig& eng, Vec x0);

RunMetrics metrics(const Trajectory& traj, std::span<const double> x_star, double band,
                   double blowup);

/// Theorem-style check for the freeze scheme: re-integrates the continuous
/// system on the freeze run's tau grid and returns
/// sup_t ||x_freeze(t) - x_cont(tau(t))||.
double verify_path_equivalence(const SchemeConfig& freeze_cfg, const CostField& cost,
                               const MeasurementSchedule& sched, const EngineConfig& eng,
                               Vec x0);

struct ScalingPoint {
  double omega = 0.0;
  double error = 0.0;     // ||g_held + rho * grad h(x)|| at the first hold switch
  double switch_time = 0.0;
};

/// Runs the gradient-hold scheme at each omega until the first hold switch
/// and tabulates the estimate error against the analytic -rho * grad h.
std::vector<ScalingPoint> verify_gradient_scaling(const SchemeConfig& base,
                                                  const CostField& cost,
                                                  const MeasurementSchedule& sched,
                                                  const EngineConfig& eng, Vec x0,
                                                  std::span<const double> omegas);

/// One grid cell of a parameter sweep.
struct SimJob {
  SchemeConfig scheme;
  MeasurementSchedule sched = MeasurementSchedule::continuous();
  CostField cost = CostField::case_study();
  EngineConfig eng;
  Vec x0;
  double band = 0.6;
  double metrics_blowup = 10.0;
};

/// Executes jobs (possibly concurrently, capped by max_threads) and returns
/// metrics in job order. Each job is independent and deterministic.
std::vector<RunMetrics> run_jobs(std::span<const SimJob> jobs, unsigned max_threads);

}  // namespace eseek
