#include "eseek/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace eseek {

namespace {

constexpr double kNoEvent = std::numeric_limits<double>::infinity();

struct Stepper {
  const SchemeConfig& cfg;
  const MeasurementSchedule& sched;
  const CostField& cost;
  bool transmitting = false;

  Vec k1x, k2x, k3x, k4x, k1a, k2a, k3a, k4a, xt;

  Stepper(const SchemeConfig& c, const MeasurementSchedule& s, const CostField& h)
      : cfg(c), sched(s), cost(h) {
    const std::size_t n = cfg.fields.dim();
    for (Vec* v : {&k1x, &k2x, &k3x, &k4x, &k1a, &k2a, &k3a, &k4a, &xt}) v->assign(n, 0.0);
  }

  bool accumulates(const SchemeState& st) const {
    return cfg.uses_phases() && st.phase == Phase::Dithering;
  }

  // Right-hand side at one stage. The branch (transmitting or not) is fixed
  // per step; the measured value is re-evaluated at the stage state.
  void rhs(const SchemeState& st, double t_stage, double tau_stage,
           std::span<const double> x, std::span<double> dx, std::span<double> dacc) {
    std::fill(dacc.begin(), dacc.end(), 0.0);
    if (cfg.kind == SchemeKind::LieBracketReference) {
      rhs_reference(cfg, cost, x, dx);
      return;
    }
    const double measured = transmitting ? cost.eval(x) : 0.0;
    switch (cfg.kind) {
      case SchemeKind::ClassicalContinuous:
      case SchemeKind::ClassicalIntermittent:
        rhs_classical(cfg, t_stage, measured, dx);
        return;
      case SchemeKind::Freeze:
        if (measured == 0.0) {
          std::fill(dx.begin(), dx.end(), 0.0);
        } else {
          dither_drive(cfg, tau_stage, measured, std::sqrt(cfg.omega), dx);
        }
        return;
      case SchemeKind::GradientHold:
      case SchemeKind::AdaptiveAmplitude:
        switch (st.phase) {
          case Phase::WaitingFirstPulse:
            std::fill(dx.begin(), dx.end(), 0.0);
            return;
          case Phase::Dithering: {
            const double amp =
                cfg.kind == SchemeKind::AdaptiveAmplitude ? st.alpha : 1.0;
            dither_drive(cfg, t_stage, measured, amp * std::sqrt(cfg.omega), dx);
            double scale = std::sqrt(cfg.omega) / cfg.dither_period();
            if (cfg.kind == SchemeKind::AdaptiveAmplitude) scale *= st.inv_alpha;
            dither_drive(cfg, t_stage, measured, scale, dacc);
            return;
          }
          case Phase::Holding:
            for (std::size_t d = 0; d < dx.size(); ++d) dx[d] = cfg.rho2 * st.g_held[d];
            return;
        }
        return;
      default:
        return;
    }
  }

  void step(SchemeState& st, double t, double h, IntegrationMethod method) {
    const std::size_t n = st.x.size();
    const double tau0 = st.tau;
    const bool adv = transmitting;
    const bool acc = accumulates(st);

    if (method == IntegrationMethod::Euler) {
      rhs(st, t, tau0, st.x, k1x, k1a);
      for (std::size_t d = 0; d < n; ++d) st.x[d] += h * k1x[d];
      if (acc)
        for (std::size_t d = 0; d < n; ++d) st.accumulator[d] += h * k1a[d];
      if (adv) st.tau = tau0 + h;
      return;
    }

    const double h2 = 0.5 * h;
    rhs(st, t, tau0, st.x, k1x, k1a);
    for (std::size_t d = 0; d < n; ++d) xt[d] = st.x[d] + h2 * k1x[d];
    rhs(st, t + h2, adv ? tau0 + h2 : tau0, xt, k2x, k2a);
    for (std::size_t d = 0; d < n; ++d) xt[d] = st.x[d] + h2 * k2x[d];
    rhs(st, t + h2, adv ? tau0 + h2 : tau0, xt, k3x, k3a);
    for (std::size_t d = 0; d < n; ++d) xt[d] = st.x[d] + h * k3x[d];
    rhs(st, t + h, adv ? tau0 + h : tau0, xt, k4x, k4a);

    const double w = h / 6.0;
    for (std::size_t d = 0; d < n; ++d)
      st.x[d] += w * (k1x[d] + 2.0 * k2x[d] + 2.0 * k3x[d] + k4x[d]);
    if (acc)
      for (std::size_t d = 0; d < n; ++d)
        st.accumulator[d] += w * (k1a[d] + 2.0 * k2a[d] + 2.0 * k3a[d] + k4a[d]);
    if (adv) st.tau = tau0 + h;
  }
};

void record_sample(Trajectory& traj, double t, const SchemeState& st, double measured) {
  if (!traj.t.empty() && traj.t.back() == t) {
    // Re-record at the same instant (event after a stride sample): keep the
    // post-event view.
    const std::size_t i = traj.size() - 1;
    traj.h_m[i] = measured;
    traj.tau[i] = st.tau;
    traj.alpha[i] = st.alpha;
    traj.phase[i] = static_cast<std::int8_t>(st.phase);
    std::copy(st.x.begin(), st.x.end(), traj.x.begin() + i * traj.dim);
    std::copy(st.g_held.begin(), st.g_held.end(), traj.g.begin() + i * traj.dim);
    return;
  }
  traj.t.push_back(t);
  traj.h_m.push_back(measured);
  traj.tau.push_back(st.tau);
  traj.alpha.push_back(st.alpha);
  traj.phase.push_back(static_cast<std::int8_t>(st.phase));
  traj.x.insert(traj.x.end(), st.x.begin(), st.x.end());
  traj.g.insert(traj.g.end(), st.g_held.begin(), st.g_held.end());
}

// Next dither-period boundary the controller must see, or kNoEvent.
double next_period_event(const SchemeConfig& cfg, const SchemeState& st,
                         const MeasurementSchedule& sched, double t) {
  if (cfg.kind == SchemeKind::Freeze || cfg.kind == SchemeKind::LieBracketReference)
    return kNoEvent;
  if (!st.anchored) return kNoEvent;
  const double t_period = cfg.dither_period();
  const double cand = st.pulse_anchor + static_cast<double>(st.periods_done + 1) * t_period;
  if (cand <= t) return kNoEvent;
  if (cfg.uses_phases()) {
    // Boundaries are generated until the hold switch, independent of the
    // (unknown to the controller) pulse end.
    return st.phase == Phase::Dithering ? cand : kNoEvent;
  }
  // Classical schemes: boundaries structure sampling within the pulse only.
  if (sched.continuous_mode()) return cand;
  const double pulse_end = st.pulse_anchor + sched.eps();
  return cand <= pulse_end ? cand : kNoEvent;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void EngineConfig::validate() const {
  if (!(t_end > t0)) throw ConfigError("engine: requires t_end > t0");
  if (steps_per_dither_period < 32)
    throw ConfigError("engine: steps_per_dither_period must be at least 32");
  if (sample_stride < 1) throw ConfigError("engine: sample_stride must be at least 1");
}

Trajectory simulate(const SchemeConfig& scheme, const MeasurementSchedule& sched_in,
                    const CostField& cost, const EngineConfig& eng, Vec x0) {
  scheme.validate();
  eng.validate();
  if (cost.dim() != scheme.fields.dim())
    throw ConfigError("simulate: cost dimension does not match the field family");
  if (x0.size() != cost.dim())
    throw ConfigError("simulate: x0 dimension does not match the cost");

  // The continuous scheme is defined against eps = Ts.
  const MeasurementSchedule sched = scheme.kind == SchemeKind::ClassicalContinuous
                                        ? MeasurementSchedule::continuous(sched_in.ts())
                                        : sched_in;

  const std::size_t n = cost.dim();
  const double t_period = scheme.dither_period();
  const double dt_pulse = t_period / eng.steps_per_dither_period;
  const bool trivial_breaks = scheme.kind == SchemeKind::Freeze || scheme.uses_phases();
  const double dt_break = scheme.kind == SchemeKind::LieBracketReference
                              ? dt_pulse
                              : (trivial_breaks ? sched.ts() / 100.0
                                                : std::min(dt_pulse, sched.ts() / 100.0));

  const std::span<const double> x_star = cost.minimizer();
  double blowup = eng.blowup_radius;
  if (!(blowup > 0.0)) blowup = 1e3 * (1.0 + dist2(x0, x_star));

  SchemeState st = SchemeState::initial(scheme, std::move(x0));
  Stepper stepper(scheme, sched, cost);

  Trajectory traj;
  traj.dim = n;
  traj.meta["scheme.kind"] = scheme_kind_name(scheme.kind);
  traj.meta["scheme.omega"] = fmt_double(scheme.omega);
  traj.meta["scheme.rho"] = fmt_double(scheme.rho);
  if (scheme.uses_phases()) {
    traj.meta["scheme.rho2"] = fmt_double(scheme.rho2);
    traj.meta["scheme.eps_prime"] = fmt_double(scheme.eps_prime);
  }
  if (scheme.kind == SchemeKind::AdaptiveAmplitude) {
    traj.meta["scheme.a"] = fmt_double(scheme.a);
    traj.meta["scheme.b"] = fmt_double(scheme.b);
    traj.meta["scheme.g_init_norm"] = fmt_double(scheme.resolved_g_init_norm());
  }
  traj.meta["scheme.tau0"] = fmt_double(scheme.tau0);
  switch (scheme.fields.kind()) {
    case FieldKind::AffinePair: traj.meta["fields.kind"] = "affine"; break;
    case FieldKind::TrigPair: traj.meta["fields.kind"] = "trig"; break;
    case FieldKind::Custom: traj.meta["fields.kind"] = "custom"; break;
  }
  traj.meta["cost.dim"] = std::to_string(cost.dim());
  {
    std::string xs, x0s;
    for (std::size_t d = 0; d < n; ++d) {
      xs += (d ? "," : "") + fmt_double(cost.minimizer()[d]);
      x0s += (d ? "," : "") + fmt_double(st.x[d]);
    }
    traj.meta["cost.x_star"] = xs;
    traj.meta["init.x0"] = x0s;
  }
  traj.meta["measurement.Ts"] = fmt_double(sched.ts());
  traj.meta["measurement.eps"] = fmt_double(sched.eps());
  traj.meta["engine.t0"] = fmt_double(eng.t0);
  traj.meta["engine.t_end"] = fmt_double(eng.t_end);
  traj.meta["engine.steps_per_dither_period"] = std::to_string(eng.steps_per_dither_period);
  traj.meta["engine.method"] = eng.method == IntegrationMethod::RK4 ? "rk4" : "euler";
  traj.meta["engine.sample_stride"] = std::to_string(eng.sample_stride);
  traj.meta["engine.blowup"] = fmt_double(blowup);

  double t = eng.t0;

  // Prime edge detection with the measured value "just before" t0 so that a
  // start exactly on a rising edge begins immediately while a start mid-pulse
  // waits for the next genuine 0 -> nonzero switch.
  const bool trans0 = sched.is_transmitting(t);
  double measured_now = trans0 ? cost.eval(st.x) : 0.0;
  st.prev_measured = (trans0 && mod_pos(t, sched.ts()) > 0.0) ? measured_now : 0.0;
  if (st.prev_measured == 0.0 && measured_now != 0.0) on_rising_edge(st, scheme, t);
  st.prev_measured = measured_now;

  record_sample(traj, t, st, measured_now);

  long step_counter = 0;
  bool aborted = false;
  while (t < eng.t_end && !aborted) {
    double t_next = eng.t_end;
    const EdgeEvent edge = sched.next_edge(t);
    if (edge.time < t_next) t_next = edge.time;
    const double boundary = next_period_event(scheme, st, sched, t);
    if (boundary < t_next) t_next = boundary;

    // The branch for the whole segment is decided at its midpoint: segment
    // endpoints sit exactly on edges where the mod test is a knife edge.
    const bool trans = sched.is_transmitting(0.5 * (t + t_next));

    const double span = t_next - t;
    const double dt_target = trans ? dt_pulse : dt_break;
    long nsub = static_cast<long>(std::ceil(span / dt_target - 1e-9));
    if (nsub < 1) nsub = 1;
    const double h = span / nsub;

    stepper.transmitting = trans;
    for (long i = 0; i < nsub; ++i) {
      const double ta = t + static_cast<double>(i) * h;
      stepper.step(st, ta, h, eng.method);
      ++step_counter;
      const double t_after = (i + 1 == nsub) ? t_next : t + static_cast<double>(i + 1) * h;

      if (!all_finite(st.x) || dist2(st.x, x_star) > blowup) {
        traj.diverged = true;
        aborted = true;
        const double m = trans && all_finite(st.x) ? cost.eval(st.x) : 0.0;
        record_sample(traj, t_after, st, m);
        break;
      }
      if (i + 1 < nsub && step_counter % eng.sample_stride == 0) {
        record_sample(traj, t_after, st, trans ? cost.eval(st.x) : 0.0);
      }
    }
    if (aborted) break;
    t = t_next;

    // At an engine-generated edge instant the branch follows the edge kind;
    // re-deriving it from mod(t, Ts) can fall on the wrong side by one ulp.
    const bool trans_now = t == edge.time ? edge.kind == EdgeEvent::Kind::Rising
                                          : sched.is_transmitting(t);
    measured_now = trans_now ? cost.eval(st.x) : 0.0;
    if (boundary == t) {
      on_period_boundary(st);
      if (scheme.uses_phases() && st.phase == Phase::Dithering &&
          st.periods_done == scheme.hold_switch_periods()) {
        on_dither_deadline(st, scheme, t);
      }
    }
    if (st.prev_measured == 0.0 && measured_now != 0.0) on_rising_edge(st, scheme, t);
    st.prev_measured = measured_now;
    record_sample(traj, t, st, measured_now);
  }

  traj.end_time = traj.t.back();
  return traj;
}

RunMetrics metrics(const Trajectory& traj, std::span<const double> x_star, double band,
                   double blowup) {
  contract_check(traj.size() > 0, "metrics: empty trajectory");
  if (!(band > 0.0)) throw ConfigError("metrics: band must be positive");
  if (!(blowup > band)) throw ConfigError("metrics: blowup must exceed the band");

  RunMetrics m;
  const std::size_t count = traj.size();
  const double t0 = traj.t.front();
  const double t_last = traj.t.back();
  const double tail_start = t0 + 0.8 * (t_last - t0);

  std::size_t last_outside = count;  // sentinel: none outside the band
  for (std::size_t i = 0; i < count; ++i) {
    const double d = dist2(traj.x_at(i), x_star);
    m.max_excursion = std::max(m.max_excursion, d);
    if (traj.t[i] >= tail_start) m.steady_state_error = std::max(m.steady_state_error, d);
    if (d > band) last_outside = i;
  }
  if (last_outside == count) {
    m.convergence_time = t0;
  } else if (last_outside + 1 < count) {
    m.convergence_time = traj.t[last_outside + 1];
  }
  m.diverged = traj.diverged || m.max_excursion > blowup;
  return m;
}

double verify_path_equivalence(const SchemeConfig& freeze_cfg, const CostField& cost,
                               const MeasurementSchedule& sched, const EngineConfig& eng,
                               Vec x0) {
  if (freeze_cfg.kind != SchemeKind::Freeze)
    throw ConfigError("verify_path_equivalence: scheme must be the freeze scheme");

  EngineConfig dense = eng;
  dense.sample_stride = 1;
  const Trajectory fr = simulate(freeze_cfg, sched, cost, dense, x0);

  // Integrate the continuous-measurement system over the freeze run's tau
  // grid: every transmitting engine step becomes one step of the same size
  // here, so the two discrete flows are directly comparable.
  const std::size_t n = fr.dim;
  Vec xc(fr.x_at(0).begin(), fr.x_at(0).end());
  Vec k1(n), k2(n), k3(n), k4(n), xt(n);
  const double sw = std::sqrt(freeze_cfg.omega);

  auto drive = [&](double s, std::span<const double> x, std::span<double> dx) {
    dither_drive(freeze_cfg, s, cost.eval(x), sw, dx);
  };

  double worst = 0.0;
  for (std::size_t i = 1; i < fr.size(); ++i) {
    const double dtau = fr.tau[i] - fr.tau[i - 1];
    if (dtau < 0.0) contract_fail("verify_path_equivalence: tau must be nondecreasing");
    if (dtau > 0.0) {
      const double s = fr.tau[i - 1];
      const double h = dtau;
      if (eng.method == IntegrationMethod::Euler) {
        drive(s, xc, k1);
        for (std::size_t d = 0; d < n; ++d) xc[d] += h * k1[d];
      } else {
        const double h2 = 0.5 * h;
        drive(s, xc, k1);
        for (std::size_t d = 0; d < n; ++d) xt[d] = xc[d] + h2 * k1[d];
        drive(s + h2, xt, k2);
        for (std::size_t d = 0; d < n; ++d) xt[d] = xc[d] + h2 * k2[d];
        drive(s + h2, xt, k3);
        for (std::size_t d = 0; d < n; ++d) xt[d] = xc[d] + h * k3[d];
        drive(s + h, xt, k4);
        const double w = h / 6.0;
        for (std::size_t d = 0; d < n; ++d)
          xc[d] += w * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
      }
    }
    worst = std::max(worst, dist2(fr.x_at(i), xc));
  }
  return worst;
}

std::vector<ScalingPoint> verify_gradient_scaling(const SchemeConfig& base,
                                                  const CostField& cost,
                                                  const MeasurementSchedule& sched,
                                                  const EngineConfig& eng, Vec x0,
                                                  std::span<const double> omegas) {
  if (base.kind != SchemeKind::GradientHold && base.kind != SchemeKind::AdaptiveAmplitude)
    throw ConfigError("verify_gradient_scaling: scheme must produce gradient estimates");

  std::vector<ScalingPoint> table;
  table.reserve(omegas.size());
  for (double w : omegas) {
    SchemeConfig cfg = base;
    cfg.omega = w;
    EngineConfig dense = eng;
    dense.sample_stride = 1;
    const Trajectory tr = simulate(cfg, sched, cost, dense, x0);

    ScalingPoint point;
    point.omega = w;
    bool found = false;
    Vec grad(cost.dim());
    for (std::size_t i = 0; i < tr.size(); ++i) {
      if (tr.phase[i] == static_cast<std::int8_t>(Phase::Holding)) {
        cost.grad_into(tr.x_at(i), grad);
        double s = 0.0;
        for (std::size_t d = 0; d < grad.size(); ++d) {
          const double e = tr.g_at(i)[d] + cfg.rho * grad[d];
          s += e * e;
        }
        point.error = std::sqrt(s);
        point.switch_time = tr.t[i];
        found = true;
        break;
      }
    }
    if (!found)
      throw ConfigError("verify_gradient_scaling: run ended before the first hold switch");
    table.push_back(point);
  }
  return table;
}

std::vector<RunMetrics> run_jobs(std::span<const SimJob> jobs, unsigned max_threads) {
  std::vector<RunMetrics> results(jobs.size());
  if (jobs.empty()) return results;

  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  unsigned workers = std::min<unsigned>({max_threads == 0 ? 1 : max_threads, hw,
                                         static_cast<unsigned>(jobs.size())});

  std::atomic<std::size_t> cursor{0};
  std::exception_ptr first_error;
  std::mutex error_lock;

  auto work = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        const SimJob& job = jobs[i];
        const Trajectory tr = simulate(job.scheme, job.sched, job.cost, job.eng, job.x0);
        results[i] = metrics(tr, job.cost.minimizer(), job.band, job.metrics_blowup);
      } catch (...) {
        std::lock_guard<std::mutex> g(error_lock);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

}  // namespace eseek
