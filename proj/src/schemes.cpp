#include "eseek/schemes.hpp"

#include <algorithm>
#include <cmath>

namespace eseek {

const char* scheme_kind_name(SchemeKind k) {
  switch (k) {
    case SchemeKind::ClassicalContinuous: return "classical-continuous";
    case SchemeKind::ClassicalIntermittent: return "classical-intermittent";
    case SchemeKind::Freeze: return "freeze";
    case SchemeKind::GradientHold: return "gradient-hold";
    case SchemeKind::AdaptiveAmplitude: return "adaptive-amplitude";
    case SchemeKind::LieBracketReference: return "lie-bracket-reference";
  }
  return "?";
}

long SchemeConfig::hold_switch_periods() const {
  const double t_period = dither_period();
  if (!(t_period > 0.0) || !(eps_prime > 0.0)) return 0;
  return static_cast<long>(std::floor(eps_prime / t_period + 1e-9));
}

void SchemeConfig::validate() const {
  if (!(omega > 0.0)) throw ConfigError("scheme: omega must be positive");
  if (!(rho > 0.0)) throw ConfigError("scheme: rho must be positive");
  if (fields.count() != dithers.size())
    throw ConfigError("scheme: field count does not match dither count");
  if (uses_phases()) {
    if (!(eps_prime > 0.0))
      throw ConfigError("scheme: eps_prime (pulse-duration lower estimate) is required");
    if (!(rho2 > 0.0)) throw ConfigError("scheme: rho2 (hold gain) is required");
    if (hold_switch_periods() < 1)
      throw ConfigError(
          "scheme: omega < C/eps_prime, no complete dither period fits the pulse estimate");
  }
  if (kind == SchemeKind::AdaptiveAmplitude) {
    if (!(a > 0.0 && b > a))
      throw ConfigError("scheme: adaptive amplitude requires b > a > 0");
    if (g_init_norm >= 0.0 && !std::isfinite(g_init_norm))
      throw ConfigError("scheme: g_init_norm must be finite");
  }
}

SchemeState SchemeState::initial(const SchemeConfig& cfg, Vec x0) {
  SchemeState s;
  const std::size_t n = cfg.fields.dim();
  contract_check(x0.size() == n, "scheme: x0 dimension does not match the field family");
  s.x = std::move(x0);
  s.tau = cfg.tau0;
  s.phase = cfg.uses_phases() ? Phase::WaitingFirstPulse : Phase::Dithering;
  s.accumulator.assign(n, 0.0);
  s.accumulator_prev.assign(n, 0.0);
  s.g_held.assign(n, 0.0);
  s.g_prev_norm = cfg.resolved_g_init_norm();
  return s;
}

void dither_drive(const SchemeConfig& cfg, double phase_time, double measured, double scale,
                  std::span<double> dx) {
  const std::size_t n = cfg.fields.dim();
  const std::size_t l = cfg.fields.count();
  std::fill(dx.begin(), dx.end(), 0.0);

  double stack[8];
  std::vector<double> heap;
  std::span<double> f;
  if (n <= 8) {
    f = std::span<double>(stack, n);
  } else {
    heap.resize(n);
    f = heap;
  }
  for (std::size_t i = 0; i < l; ++i) {
    const double u = cfg.dithers[i].value(cfg.dithers[i].k().value() * cfg.omega * phase_time);
    if (u == 0.0) continue;
    cfg.fields.value(i, measured, f);
    for (std::size_t d = 0; d < n; ++d) dx[d] += scale * u * f[d];
  }
}

void rhs_classical(const SchemeConfig& cfg, double t, double measured, std::span<double> dx) {
  dither_drive(cfg, t, measured, std::sqrt(cfg.omega), dx);
}

void rhs_freeze(const SchemeConfig& cfg, const SchemeState& state, double measured,
                std::span<double> dx, double& dtau) {
  if (measured == 0.0) {
    std::fill(dx.begin(), dx.end(), 0.0);
    dtau = 0.0;
    return;
  }
  dither_drive(cfg, state.tau, measured, std::sqrt(cfg.omega), dx);
  dtau = 1.0;
}

void g_integrand(const SchemeConfig& cfg, const SchemeState& state, double t, double measured,
                 std::span<double> out) {
  const double t_period = cfg.dither_period();
  double scale = std::sqrt(cfg.omega) / t_period;
  if (cfg.kind == SchemeKind::AdaptiveAmplitude) scale *= state.inv_alpha;
  dither_drive(cfg, t, measured, scale, out);
}

void accumulate_g(SchemeState& state, const SchemeConfig& cfg, double t, double measured,
                  double dt) {
  contract_check(state.phase == Phase::Dithering, "accumulate_g: not in the dithering phase");
  if (dt == 0.0) return;
  Vec inc(state.accumulator.size());
  g_integrand(cfg, state, t, measured, inc);
  for (std::size_t d = 0; d < inc.size(); ++d) state.accumulator[d] += dt * inc[d];
}

void on_period_boundary(SchemeState& state) {
  state.accumulator_prev = state.accumulator;
  std::fill(state.accumulator.begin(), state.accumulator.end(), 0.0);
  ++state.periods_done;
}

GradientEstimate finalize_g(const SchemeState& state, const SchemeConfig& cfg, double at_time) {
  contract_check(state.periods_done >= 1,
                 "finalize_g: no complete dither period elapsed in the current pulse");
  GradientEstimate est;
  est.g = state.accumulator_prev;
  est.at_time = at_time;
  est.window = cfg.dither_period();
  return est;
}

void rhs_gradient_hold(const SchemeConfig& cfg, const SchemeState& state, double t,
                       double measured, std::span<double> dx) {
  switch (state.phase) {
    case Phase::WaitingFirstPulse:
      std::fill(dx.begin(), dx.end(), 0.0);
      return;
    case Phase::Dithering:
      rhs_classical(cfg, t, measured, dx);
      return;
    case Phase::Holding:
      for (std::size_t d = 0; d < dx.size(); ++d) dx[d] = cfg.rho2 * state.g_held[d];
      return;
  }
}

double alpha(double g_prev_norm, double a, double b) {
  contract_check(g_prev_norm >= 0.0, "alpha: norm must be nonnegative");
  if (!(a > 0.0) || !(b >= a)) throw ConfigError("alpha: requires 0 < a <= b");
  return std::sqrt((g_prev_norm + a) / (g_prev_norm + b));
}

void rhs_adaptive(const SchemeConfig& cfg, const SchemeState& state, double t, double measured,
                  std::span<double> dx) {
  switch (state.phase) {
    case Phase::WaitingFirstPulse:
      std::fill(dx.begin(), dx.end(), 0.0);
      return;
    case Phase::Dithering:
      dither_drive(cfg, t, measured, state.alpha * std::sqrt(cfg.omega), dx);
      return;
    case Phase::Holding:
      for (std::size_t d = 0; d < dx.size(); ++d) dx[d] = cfg.rho2 * state.g_held[d];
      return;
  }
}

void rhs_reference(const SchemeConfig& cfg, const CostField& cost, std::span<const double> x,
                   std::span<double> dx) {
  cost.grad_into(x, dx);
  for (double& v : dx) v *= -cfg.rho;
}

void on_rising_edge(SchemeState& state, const SchemeConfig& cfg, double t) {
  switch (cfg.kind) {
    case SchemeKind::GradientHold:
    case SchemeKind::AdaptiveAmplitude:
      if (cfg.kind == SchemeKind::AdaptiveAmplitude) {
        state.g_prev_norm =
            state.has_estimate ? norm2(state.g_held) : cfg.resolved_g_init_norm();
        state.alpha = alpha(state.g_prev_norm, cfg.a, cfg.b);
        state.inv_alpha = std::sqrt((state.g_prev_norm + cfg.b) / (state.g_prev_norm + cfg.a));
      }
      state.phase = Phase::Dithering;
      std::fill(state.accumulator.begin(), state.accumulator.end(), 0.0);
      state.anchored = true;
      state.pulse_anchor = t;
      state.periods_done = 0;
      return;
    case SchemeKind::ClassicalContinuous:
    case SchemeKind::ClassicalIntermittent:
      // No phases; the anchor only structures period-boundary bookkeeping.
      state.anchored = true;
      state.pulse_anchor = t;
      state.periods_done = 0;
      return;
    case SchemeKind::Freeze:
    case SchemeKind::LieBracketReference:
      return;
  }
}

void on_dither_deadline(SchemeState& state, const SchemeConfig& cfg, double t) {
  contract_check(cfg.uses_phases(), "on_dither_deadline: scheme has no hold phase");
  const GradientEstimate est = finalize_g(state, cfg, t);
  state.g_held = est.g;
  state.has_estimate = true;
  state.phase = Phase::Holding;
}

}  // namespace eseek
