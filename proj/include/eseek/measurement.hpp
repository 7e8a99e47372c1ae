#pragma once

#include <cstdint>

#include "eseek/common.hpp"
#include "eseek/costs.hpp"

namespace eseek {

struct EdgeEvent {
  enum class Kind : std::int8_t { Rising, Falling };
  double time = 0.0;
  Kind kind = Kind::Rising;
};

/// Pulse pattern of the intermittent measurement channel: the cost is
/// observable on [k*Ts, k*Ts + eps) and reads exactly 0.0 otherwise.
/// Controllers never see Ts or eps; only the engine may query the edge
/// geometry so integration steps land exactly on edges.
class MeasurementSchedule {
 public:
  MeasurementSchedule(double ts, double eps);

  static MeasurementSchedule case_study(double eps);  // Ts = 1, eps in {0.1, 0.17}
  static MeasurementSchedule arva_min();              // Ts = 1.0, eps = 0.07
  static MeasurementSchedule continuous(double ts = 1.0);

  double ts() const { return ts_; }
  double eps() const { return eps_; }
  bool continuous_mode() const { return eps_ == ts_; }

  /// True iff mod(t, Ts) in [0, eps); mod is the Euclidean remainder so
  /// negative t behaves like any other t.
  bool is_transmitting(double t) const { return mod_pos(t, ts_) < eps_; }

  /// h_m(t, x): h(x) while transmitting, exactly 0.0 otherwise.
  double measure(const CostField& cost, double t, std::span<const double> x) const {
    return is_transmitting(t) ? cost.eval(x) : 0.0;
  }

  /// Earliest edge strictly after t. With eps == Ts there is no interior
  /// falling edge; only rising edges at multiples of Ts are reported.
  EdgeEvent next_edge(double t) const;

 private:
  double ts_, eps_;
};

}  // namespace eseek
