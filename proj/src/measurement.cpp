#include "eseek/measurement.hpp"

#include <cmath>

namespace eseek {

MeasurementSchedule::MeasurementSchedule(double ts, double eps) : ts_(ts), eps_(eps) {
  if (!(ts > 0.0)) throw ConfigError("measurement: requires Ts > 0");
  if (!(eps > 0.0 && eps <= ts))
    throw ConfigError("measurement: requires 0 < eps <= Ts (pulse must fit in the period)");
}

MeasurementSchedule MeasurementSchedule::case_study(double eps) {
  return MeasurementSchedule(1.0, eps);
}

MeasurementSchedule MeasurementSchedule::arva_min() { return MeasurementSchedule(1.0, 0.07); }

MeasurementSchedule MeasurementSchedule::continuous(double ts) {
  return MeasurementSchedule(ts, ts);
}

EdgeEvent MeasurementSchedule::next_edge(double t) const {
  const double k = std::floor(t / ts_);
  // Candidate edges around t, in increasing order; the first strictly after
  // t wins. Falling edges exist only when eps < Ts.
  for (double base : {k - 1.0, k, k + 1.0, k + 2.0}) {
    const double rising = base * ts_;
    if (rising > t) return {rising, EdgeEvent::Kind::Rising};
    if (!continuous_mode()) {
      const double falling = base * ts_ + eps_;
      if (falling > t) return {falling, EdgeEvent::Kind::Falling};
    }
  }
  contract_fail("measurement: next_edge search failed");
}

}  // namespace eseek
