#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "eseek/common.hpp"
#include "eseek/costs.hpp"
#include "eseek/fields.hpp"
#include "eseek/signals.hpp"

namespace eseek {

enum class SchemeKind : std::int8_t {
  ClassicalContinuous,
  ClassicalIntermittent,
  Freeze,
  GradientHold,
  AdaptiveAmplitude,
  LieBracketReference,
};

const char* scheme_kind_name(SchemeKind k);

enum class Phase : std::int8_t { Dithering = 0, Holding = 1, WaitingFirstPulse = 2 };

/// Static controller parametrization. The controllers receive only the
/// measured cost value; Ts and eps never appear here.
struct SchemeConfig {
  SchemeKind kind = SchemeKind::ClassicalIntermittent;
  double omega = 20.0 * kPi;  // rad/s
  double rho = 0.25;          // 1/s
  double rho2 = 0.0;          // hold gain (GradientHold / AdaptiveAmplitude)
  double eps_prime = 0.0;     // known lower estimate of the pulse duration
  double a = 1e-5;            // adaptive amplitude floor parameter
  double b = 0.1;             // adaptive amplitude threshold parameter
  double tau0 = 0.0;          // auxiliary clock offset (Freeze)
  double g_init_norm = -1.0;  // first-period seed for alpha; < 0 means "use b"
  FieldFamily fields = FieldFamily::affine_pair(0.25);
  DitherBank dithers = DitherBank::cos_sin_pairs(1);

  /// T = C / omega, the dithers' common period in seconds.
  double dither_period() const { return dithers.common_period() / omega; }

  /// floor(eps'/T), tolerant of quotients within 1e-9 of an integer.
  long hold_switch_periods() const;

  bool uses_phases() const {
    return kind == SchemeKind::GradientHold || kind == SchemeKind::AdaptiveAmplitude;
  }

  double resolved_g_init_norm() const { return g_init_norm < 0.0 ? b : g_init_norm; }

  /// Throws ConfigError on any violated constraint (omega < C/eps' for the
  /// phase schemes, b <= a for the adaptive scheme, field/dither mismatch...).
  void validate() const;
};

/// Mutable controller state, owned by a single simulation run.
struct SchemeState {
  Vec x;
  double tau = 0.0;            // auxiliary dither clock; frozen during breaks
  Phase phase = Phase::Dithering;
  bool anchored = false;       // a rising edge has been observed
  double pulse_anchor = 0.0;   // time of the most recent rising edge
  long periods_done = 0;       // complete dither periods since the anchor
  Vec accumulator;             // running g-integral over the current period
  Vec accumulator_prev;        // g-integral over the last completed period
  Vec g_held;                  // estimate applied while Holding
  bool has_estimate = false;
  double g_prev_norm = 0.0;
  double alpha = 1.0;          // frozen per transmission period
  double inv_alpha = 1.0;      // compensation factor inside the g integrand
  double prev_measured = 0.0;  // for 0 -> nonzero edge detection

  static SchemeState initial(const SchemeConfig& cfg, Vec x0);
};

struct GradientEstimate {
  Vec g;
  double at_time = 0.0;
  double window = 0.0;  // T = C/omega
};

/// out = scale * sum_i f_i(measured) * u_i(k_i * omega * phase_time).
/// Shared kernel of every dithered right-hand side; phase_time is absolute
/// time for the classical schemes and the auxiliary clock tau for Freeze.
void dither_drive(const SchemeConfig& cfg, double phase_time, double measured, double scale,
                  std::span<double> dx);

/// Classical law: sqrt(omega) * sum_i f_i(measured) * u_i(k_i omega t).
void rhs_classical(const SchemeConfig& cfg, double t, double measured, std::span<double> dx);

/// Freeze law: (0, 0) while the measurement reads zero, otherwise the
/// classical drive clocked by tau with tau' = 1.
void rhs_freeze(const SchemeConfig& cfg, const SchemeState& state, double measured,
                std::span<double> dx, double& dtau);

/// Integrand of the windowed gradient estimate,
///   (sqrt(omega)/T) * sum_i f_i(measured) * u_i(k_i omega t),
/// carrying the 1/alpha compensation for the adaptive scheme.
void g_integrand(const SchemeConfig& cfg, const SchemeState& state, double t, double measured,
                 std::span<double> out);

/// Explicit accumulation step: accumulator += dt * integrand. The engine
/// integrates the same integrand through its RK4 stages instead.
void accumulate_g(SchemeState& state, const SchemeConfig& cfg, double t, double measured,
                  double dt);

/// Rollover at a dither-period boundary: accumulator_prev <- accumulator,
/// accumulator <- 0, period counter advanced.
void on_period_boundary(SchemeState& state);

/// The estimate over the last completed dither period. Requires at least one
/// complete period since the pulse anchor.
GradientEstimate finalize_g(const SchemeState& state, const SchemeConfig& cfg, double at_time);

/// Gradient-hold law: classical drive while Dithering, constant rho2 * g_held
/// while Holding, zero while waiting for the first pulse.
void rhs_gradient_hold(const SchemeConfig& cfg, const SchemeState& state, double t,
                       double measured, std::span<double> dx);

/// sqrt((norm + a)/(norm + b)), in (0, 1] for 0 < a <= b.
double alpha(double g_prev_norm, double a, double b);

/// Adaptive-amplitude law: alpha-scaled classical drive while Dithering,
/// rho2 * g_held while Holding.
void rhs_adaptive(const SchemeConfig& cfg, const SchemeState& state, double t, double measured,
                  std::span<double> dx);

/// The averaged system the dithered schemes approximate: -rho * grad h(x).
void rhs_reference(const SchemeConfig& cfg, const CostField& cost, std::span<const double> x,
                   std::span<double> dx);

/// Reaction to a detected 0 -> nonzero switch of the measured value. Phase
/// schemes restart their dither window (and refresh alpha); schemes without
/// phases only re-anchor their period bookkeeping.
void on_rising_edge(SchemeState& state, const SchemeConfig& cfg, double t);

/// Switch to Holding after floor(eps'/T) complete periods: freezes the
/// estimate from the last completed period into g_held.
void on_dither_deadline(SchemeState& state, const SchemeConfig& cfg, double t);

}  // namespace eseek
